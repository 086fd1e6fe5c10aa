#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "eidlab/binning.hpp"
#include "eidlab/energy_form.hpp"

namespace eidlab {

// Atomic 1-current pushed forward from a graph: one atom per vertex, located
// at f(x) with vector weight (Gamma(f_j, g)(x))_j. Keeps its provenance so
// boundary identities can be evaluated back on the graph.
struct Current1 {
    Eigen::MatrixXd locations;  // atoms x n
    Eigen::MatrixXd vectors;    // atoms x n
    const PEnergyForm* form = nullptr;
    std::vector<VertexFn> f;
    VertexFn g;

    Eigen::Index atom_count() const { return locations.rows(); }
    Eigen::Index dim() const { return locations.cols(); }
    // ||T||(X): sum of atom vector norms.
    double mass() const;
};

// Requires a bilinear form (edgewise, p = 2).
Current1 build_current(const PEnergyForm& form, const std::vector<VertexFn>& f,
                       const VertexFn& g);

struct TestFunction {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
};

// dT(phi) evaluated three ways:
//   atoms:     sum_j sum_x  d_j phi(f(x)) Gamma(f_j, g)(x)
//   chain:     E(phi(f), g)
//   generator: -sum_x (A g)(x) phi(f(x)) mu(x)
// chain == generator is a discrete summation-by-parts identity and is always
// asserted at rel_tol. atoms == chain holds exactly for affine phi and only
// up to a mesh-scale chain-rule defect otherwise, so it is asserted only when
// affine_phi is set; the gap is reported either way.
struct BoundaryCheck {
    double atom_route = 0.0;
    double chain_route = 0.0;
    double generator_route = 0.0;
    double chain_generator_gap = 0.0;  // relative
    double atom_chain_gap = 0.0;       // relative
};

BoundaryCheck current_boundary(const Current1& t, const TestFunction& phi, bool affine_phi,
                               double rel_tol = 1e-8);

// Decomposability probe for a family T_1..T_n in R^n against a binned
// reference measure: every nu-charged box must carry ||T_i|| mass for each i,
// and the matrix of binned vector sums must have |det| above 1e-10 times the
// product of its column norms. The currents are binned with nu's own
// partition.
struct DrRow {
    BoxKey key{};
    double det = 0.0;
    double min_mass = 0.0;
    bool pass = false;
};

struct DrReport {
    std::vector<DrRow> rows;
    int dim = 0;
    bool all_pass = true;
};

DrReport dr_hypothesis_check(const std::vector<Current1>& currents, const BinnedMeasure& nu);

// Atom table "x1..xn,v1..vn", one row per atom.
std::string current_dump_csv(const Current1& t);

}  // namespace eidlab
