#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "eidlab/error.hpp"

namespace eidlab {

// Half-open box index: point x lands in floor((x - origin) / h) per axis.
using BoxKey = std::array<std::int64_t, 4>;  // zero-padded beyond dim

// Atomic measure aggregated over a uniform box partition of R^n (n <= 4).
// Keys are ordered so iteration (and any CSV dump) is deterministic.
class BinnedMeasure {
public:
    BinnedMeasure() = default;
    BinnedMeasure(Eigen::Index dim, double h, Eigen::VectorXd origin);

    Eigen::Index dim() const { return dim_; }
    double box_side() const { return h_; }
    const Eigen::VectorXd& origin() const { return origin_; }

    BoxKey key_of(const Eigen::VectorXd& x) const;
    Eigen::VectorXd box_corner(const BoxKey& k) const;  // lower corner
    void add(const Eigen::VectorXd& x, double mass);
    void add_key(const BoxKey& k, double mass);

    double mass(const BoxKey& k) const;
    double total() const;
    Eigen::Index box_count() const { return static_cast<Eigen::Index>(mass_.size()); }
    const std::map<BoxKey, double>& boxes() const { return mass_; }

    // Excess over a uniform density cap: sum over boxes of
    // max(0, mass - cap * h^dim).
    double excess_over(double cap) const;

    bool same_partition(const BinnedMeasure& o) const;

private:
    Eigen::Index dim_ = 0;
    double h_ = 0.0;
    Eigen::VectorXd origin_;
    std::map<BoxKey, double> mass_;
};

// Bin weighted points (rows of `points`); negative weights rejected.
BinnedMeasure bin_points(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                         double h, const Eigen::VectorXd& origin = Eigen::VectorXd());

}  // namespace eidlab
