#pragma once

#include <Eigen/Core>
#include <functional>

#include "eidlab/grid.hpp"
#include "eidlab/rng.hpp"

namespace eidlab {

// Rectifiable curve as an ordered point list; consecutive duplicates allowed
// (zero-length segments contribute nothing).
struct Polyline {
    Eigen::MatrixXd points;  // k x n

    Eigen::Index segment_count() const { return points.rows() - 1; }
    Eigen::Index dim() const { return points.cols(); }
    double length() const;
    // Position at arclength t in [0, length()].
    Eigen::VectorXd at_arclength(double t) const;
    void validate() const;
};

// Arclength line integral of a pointwise density by composite trapezoid rule;
// each segment is subdivided so substeps never exceed h_quad. Density must be
// finite and nonnegative.
double line_integral(const Polyline& gamma,
                     const std::function<double(const Eigen::VectorXd&)>& density,
                     double h_quad);

// Upper-gradient slack sup over sampled subcurves of
// |f(gamma(a)) - f(gamma(b))| - int_a^b g ds; nonpositive when g is an upper
// gradient along the curve.
double upper_gradient_slack(const Polyline& gamma,
                            const std::function<double(const Eigen::VectorXd&)>& f,
                            const std::function<double(const Eigen::VectorXd&)>& g,
                            double h_quad, int subdivisions);

// Random lattice walk along stencil moves, staying inside the grid box.
Polyline random_stencil_polyline(const GridSpec& spec, Eigen::Index steps, CounterRng& rng);

}  // namespace eidlab
