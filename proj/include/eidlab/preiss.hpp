#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "eidlab/cone.hpp"
#include "eidlab/grid.hpp"

namespace eidlab {

// Flattening-sequence construction on a 2D grid: a slowdown field g_k built
// by inf-convolution from the two-valued profile (1/2 on K, 1 off K), a
// Lipschitz approximation f_k of f(x) = x1 with that slowdown, mollification
// at radius delta, and the first partial of the smoothed field. det of the
// flattening map y -> (f~(y), y2) equals that partial exactly.
struct PreissInput {
    GridSpec spec;              // 2D
    PointOracle k_set;          // exact on grid points
    Eigen::MatrixXd mu_points;  // atoms x 2, expected on grid points
    Eigen::VectorXd mu_weights;
};

struct PreissStep {
    double k = 0.0;
    double delta = 0.0;
    GridField g_k;
    GridField f_k;      // before mollification
    GridField f_smooth; // after mollification
    GridField d1;       // central-difference partial_1 of f_smooth
    double integral_det = 0.0;    // sum of mu_weights * d1(atom)
    double max_abs_d1_on_k = 0.0;
    double max_abs_d1_global = 0.0;
    double flatten_lip = 0.0;         // Lip of y -> (f_smooth(y), y2) over atom pairs
    double flatten_lip_global = 0.0;  // same map, worst slope over stencil edges
};

// delta below two grid cells cannot be resolved and raises NumericError.
PreissStep preiss_step(const PreissInput& in, double k, double delta);

// delta_k = max(2.5 h, 0.15 / k).
std::vector<PreissStep> preiss_sequence(const PreissInput& in, const std::vector<double>& ks);

// The standard witness: K the vertical segment {0} x [-0.6, 0.6] inside
// [-1, 1]^2, mu the restriction of arclength to K (one atom per grid point of
// K, weight h). identity_case drops K entirely, so the sequence must leave f
// untouched and the determinant integral must stay at full mass.
PreissInput make_preiss_input(Eigen::Index count, bool identity_case);

}  // namespace eidlab
