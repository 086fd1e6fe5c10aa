#include "eidlab/scalar_eid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eidlab/error.hpp"

namespace eidlab {

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals) {
    for (auto& [a, b] : intervals) {
        require(std::isfinite(a) && std::isfinite(b), "IntervalUnion: endpoints must be finite");
        require(a <= b, "IntervalUnion: interval endpoints out of order");
    }
    std::sort(intervals.begin(), intervals.end());
    for (const auto& [a, b] : intervals) {
        if (!iv_.empty() && a <= iv_.back().second) {
            iv_.back().second = std::max(iv_.back().second, b);
        } else {
            iv_.emplace_back(a, b);
        }
    }
}

IntervalUnion IntervalUnion::cantor(int level) {
    require(level >= 0, "IntervalUnion::cantor: negative level");
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::pair<double, double>> next;
        next.reserve(iv.size() * 2);
        for (const auto& [a, b] : iv) {
            double third = (b - a) / 3.0;
            next.emplace_back(a, a + third);
            next.emplace_back(b - third, b);
        }
        iv = std::move(next);
    }
    return IntervalUnion(std::move(iv));
}

IntervalUnion IntervalUnion::around_points(const std::vector<double>& pts, double eps) {
    require(eps >= 0.0, "IntervalUnion::around_points: negative radius");
    std::vector<std::pair<double, double>> iv;
    iv.reserve(pts.size());
    for (double p : pts) iv.emplace_back(p - eps, p + eps);
    return IntervalUnion(std::move(iv));
}

double IntervalUnion::length() const {
    double s = 0.0;
    for (const auto& [a, b] : iv_) s += b - a;
    return s;
}

bool IntervalUnion::contains(double x) const {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), std::make_pair(x, std::numeric_limits<double>::infinity()));
    if (it == iv_.begin()) return false;
    --it;
    return x >= it->first && x <= it->second;
}

double IntervalUnion::dist(double x) const {
    if (iv_.empty()) return std::numeric_limits<double>::infinity();
    auto it = std::upper_bound(iv_.begin(), iv_.end(),
                               std::make_pair(x, std::numeric_limits<double>::infinity()));
    double d = std::numeric_limits<double>::infinity();
    if (it != iv_.end()) d = std::min(d, it->first - x);
    if (it != iv_.begin()) {
        --it;
        if (x <= it->second) return 0.0;
        d = std::min(d, x - it->second);
    }
    return d;
}

IntervalUnion IntervalUnion::fattened(double eps) const {
    require(eps >= 0.0, "IntervalUnion::fattened: negative radius");
    std::vector<std::pair<double, double>> iv;
    iv.reserve(iv_.size());
    for (const auto& [a, b] : iv_) iv.emplace_back(a - eps, b + eps);
    return IntervalUnion(std::move(iv));
}

ScalarEidSequence scalar_eid_sequence(const IntervalUnion& k_set, double k,
                                      const GridSpec& spec) {
    spec.validate();
    require(spec.dim() == 1, "scalar_eid_sequence: 1D grid required");
    require(k >= 1.0, "scalar_eid_sequence: k must be at least 1");
    require(spec.lo[0] <= 0.0 && spec.hi[0] >= 0.0,
            "scalar_eid_sequence: grid must cover the anchor point 0");

    const Eigen::Index n = spec.point_count();
    GridField deriv{spec, Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        double x = spec.point(i)[0];
        double d = k_set.dist(x);
        deriv.values[i] = std::isinf(d) ? 1.0 : std::min(1.0, k * d);
    }

    GridField g{spec, Eigen::VectorXd(n)};
    g.values[0] = 0.0;
    const double h = spec.spacing()[0];
    for (Eigen::Index i = 1; i < n; ++i)
        g.values[i] = g.values[i - 1] + 0.5 * h * (deriv.values[i - 1] + deriv.values[i]);

    // Shift so the interpolated value at 0 vanishes.
    double t = (0.0 - spec.lo[0]) / h;
    Eigen::Index j = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(t)), n - 2);
    if (j < 0) j = 0;
    double frac = t - static_cast<double>(j);
    double at0 = (1.0 - frac) * g.values[j] + frac * g.values[j + 1];
    g.values.array() -= at0;
    return {std::move(g), std::move(deriv)};
}

}  // namespace eidlab
