#pragma once

#include <Eigen/Core>
#include <vector>

#include "eidlab/energy_form.hpp"
#include "eidlab/measure.hpp"

namespace eidlab {

// Per-vertex symmetric n x n matrix of carre du champ densities against a
// reference measure nu: entry (i,j) at x is Gamma(phi_i, phi_j)({x}) / nu({x}).
// Vertices with nu = 0 (necessarily with vanishing numerators) carry the zero
// matrix and sit outside `domain`.
struct CdcMatrixField {
    Eigen::Index tuple_size = 0;
    std::vector<Eigen::MatrixXd> at;  // one matrix per vertex
    Measure reference;                // nu
    VertexSet domain;                 // nu > 0

    Eigen::Index vertex_count() const { return static_cast<Eigen::Index>(at.size()); }
    const Eigen::MatrixXd& matrix(Eigen::Index v) const { return at[static_cast<std::size_t>(v)]; }
    double trace(Eigen::Index v) const { return matrix(v).trace(); }
    double det(Eigen::Index v) const;
    // Smallest eigenvalue.
    double sigma1(Eigen::Index v) const;
    // Most negative sigma1 / trace over the domain; 0 when clean. The PSD
    // invariant is sigma1 >= -1e-10 * trace at every charged vertex.
    double psd_slack() const;
};

// Builds the field and asserts the PSD invariant (tolerance 1e-10 * trace).
// Edgewise p = 2 forms only. A vertex with nu = 0 but a nonvanishing
// numerator is a domination violation.
CdcMatrixField cdc_matrix(const PEnergyForm& form, const std::vector<VertexFn>& phi,
                          const Measure& nu);

}  // namespace eidlab
