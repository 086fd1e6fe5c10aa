#pragma once

#include <utility>
#include <vector>

#include "eidlab/grid.hpp"

namespace eidlab {

// Finite union of closed intervals on the line, kept sorted and disjoint.
// Degenerate single-point intervals are allowed.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<std::pair<double, double>> intervals);

    // Level-n middle-thirds construction on [0,1]; level 0 is [0,1] itself.
    static IntervalUnion cantor(int level);
    // Union of closed eps-balls around the given points.
    static IntervalUnion around_points(const std::vector<double>& pts, double eps);

    const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }
    double length() const;
    bool contains(double x) const;
    // Distance to the set; +infinity for the empty union.
    double dist(double x) const;
    IntervalUnion fattened(double eps) const;

private:
    std::vector<std::pair<double, double>> iv_;
};

// The scalar flattening sequence on a 1D grid:
//   deriv(x) = min(1, k * dist(x, K)),  g = cumulative trapezoid, g(0) = 0.
// deriv vanishes on K exactly and g is 1-Lipschitz; empty K gives the
// identity. The grid must cover 0 so the anchor is interpolable.
struct ScalarEidSequence {
    GridField g;
    GridField deriv;
};

ScalarEidSequence scalar_eid_sequence(const IntervalUnion& k_set, double k,
                                      const GridSpec& spec);

}  // namespace eidlab
