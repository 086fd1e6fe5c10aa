#pragma once

#include <Eigen/Core>

namespace eidlab {

// Max-min piecewise linear envelope of Lipschitz samples:
//   h(x) = max_{i<j} |<s_i - s_j, x>| / |s_i - s_j|   (0 with fewer than 2 points)
//   g(x) = min_j ( v_j + L * h(x - s_j) )
// h satisfies h(s_i - s_j) = |s_i - s_j|, which makes g interpolate the
// samples whenever L dominates every pair slope; LIP[g] <= L always. The
// evaluator touches only the stored samples and L, never the original
// function.
class PlMaxMin {
public:
    // points: k x n with the first row the origin; values: samples at the
    // points; lip: the Lipschitz constant L (must dominate the pair slopes).
    PlMaxMin(Eigen::MatrixXd points, Eigen::VectorXd values, double lip);

    Eigen::Index sample_count() const { return points_.rows(); }
    Eigen::Index dim() const { return points_.cols(); }
    double lip() const { return lip_; }

    double h(const Eigen::VectorXd& x) const;
    double operator()(const Eigen::VectorXd& x) const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd values_;
    double lip_;
    Eigen::MatrixXd pair_dirs_;  // unit (s_i - s_j), one row per pair
};

}  // namespace eidlab
