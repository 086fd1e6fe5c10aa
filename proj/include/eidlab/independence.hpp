#pragma once

#include <string>
#include <vector>

#include "eidlab/cdc_matrix.hpp"
#include "eidlab/energy_form.hpp"
#include "eidlab/measure.hpp"
#include "eidlab/sphere.hpp"

namespace eidlab {

// Pointwise minimum over sampled unit directions of the directional energy
// density d Gamma_p<lambda . phi> / d Lambda_phi, where Lambda_phi is the sum
// of the component energy measures. Vertices with Lambda_phi = 0 are omitted
// from `domain` and carry value 0.
struct LatticeInfimum {
    VertexFn value;
    VertexSet domain;
    VertexFn lambda_density;  // Lambda_phi vertexwise
};

LatticeInfimum lattice_infimum(const PEnergyForm& form, const std::vector<VertexFn>& phi,
                               const SphereSampler& sampler);

// A_i = {x in A : G(x) > 1/i}, reported once per threshold that adds new
// vertices. Sampled values at or below the sampler's resolution bound are
// treated as 0, since they are indistinguishable from a degenerate direction.
struct IndependencePart {
    long i;
    VertexSet set;
};

struct IndependenceDecomposition {
    std::vector<IndependencePart> parts;
    VertexSet covered;     // union of the parts
    double residual_mass;  // Lambda_phi(A \ covered)
    bool independent;      // residual_mass == 0
};

IndependenceDecomposition independence_decomposition(const PEnergyForm& form,
                                                     const std::vector<VertexFn>& phi,
                                                     const VertexSet& a,
                                                     const SphereSampler& sampler,
                                                     long i_max = 64);

// Both p = 2 verdict routes per vertex: determinant of the carre du champ
// matrix against 1e-10 * trace^n, and the sampled lattice infimum against the
// sampler's resolution bound. Values in the borderline band between the two
// thresholds may disagree; a disagreement outside that band throws.
struct DetEquivalenceRow {
    Eigen::Index vertex;
    double trace, det, sigma1, lattice_inf;
    std::string verdict;  // independent | degenerate | excluded
};

struct DetEquivalenceReport {
    std::vector<DetEquivalenceRow> rows;
    VertexSet independence_set;  // I_phi by the determinant route
    bool routes_agree;
    bool null_sets_match;  // 1_{I_phi} nu and 1_{I_phi} Lambda_phi share null vertices
};

DetEquivalenceReport det_equivalence_check(const PEnergyForm& form,
                                           const std::vector<VertexFn>& phi, const Measure& nu,
                                           const VertexSet& a, const SphereSampler& sampler);

}  // namespace eidlab
