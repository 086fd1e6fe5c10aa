#pragma once

#include <Eigen/Core>
#include <vector>

namespace eidlab {

// Deterministic direction set on S^{n-1} (n = 2 or 3) with a computable
// covering-angle bound. Always contains the signed standard basis vectors.
// refined() returns a strict superset, so sampled minima are monotone along a
// refinement ladder.
class SphereSampler {
public:
    SphereSampler(Eigen::Index dim, Eigen::Index count);

    Eigen::Index dim() const { return dim_; }
    const std::vector<Eigen::VectorXd>& directions() const { return dirs_; }
    // Upper bound on the angle from any unit vector to the nearest sample.
    double covering_angle() const { return covering_; }
    // Worst-case excess of a sampled directional-energy minimum over the true
    // infimum, in trace-normalized units: sin^2 of the covering angle.
    double resolution_bound() const;
    SphereSampler refined(Eigen::Index factor = 2) const;

private:
    SphereSampler() = default;
    void add_basis();

    Eigen::Index dim_ = 0;
    Eigen::Index count_ = 0;
    std::vector<Eigen::VectorXd> dirs_;
    double covering_ = 0.0;
};

}  // namespace eidlab
