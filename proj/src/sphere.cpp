#include "eidlab/sphere.hpp"

#include <cmath>

#include "eidlab/error.hpp"

namespace eidlab {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

SphereSampler::SphereSampler(Eigen::Index dim, Eigen::Index count) : dim_(dim), count_(count) {
    require(dim == 2 || dim == 3, "SphereSampler supports dimensions 2 and 3");
    require(count >= 4, "SphereSampler needs at least 4 samples");
    dirs_.reserve(static_cast<std::size_t>(count) + 2 * static_cast<std::size_t>(dim));
    if (dim == 2) {
        for (Eigen::Index j = 0; j < count; ++j) {
            double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count);
            Eigen::VectorXd w(2);
            w << std::cos(a), std::sin(a);
            dirs_.push_back(w);
        }
        covering_ = kPi / static_cast<double>(count);
    } else {
        // Fibonacci sphere; covering angle from the per-point area with a
        // factor-2 safety margin.
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (Eigen::Index j = 0; j < count; ++j) {
            double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(count);
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = 2.0 * kPi * static_cast<double>(j) / golden;
            Eigen::VectorXd w(3);
            w << r * std::cos(a), r * std::sin(a), z;
            w.normalize();
            dirs_.push_back(w);
        }
        covering_ = 2.0 * std::sqrt(4.0 * kPi / static_cast<double>(count));
    }
    add_basis();
}

void SphereSampler::add_basis() {
    for (Eigen::Index a = 0; a < dim_; ++a)
        for (double s : {1.0, -1.0}) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(dim_);
            e[a] = s;
            dirs_.push_back(e);
        }
}

double SphereSampler::resolution_bound() const {
    double s = std::sin(std::min(covering_, kPi / 2.0));
    return s * s;
}

SphereSampler SphereSampler::refined(Eigen::Index factor) const {
    require(factor >= 2, "refinement factor must be at least 2");
    SphereSampler fine(dim_, count_ * factor);
    if (dim_ == 2) return fine;  // angle grids are nested when count doubles
    // Fibonacci point sets are not nested; keep the union so minima stay
    // monotone along the ladder.
    SphereSampler out;
    out.dim_ = dim_;
    out.count_ = fine.count_;
    out.covering_ = fine.covering_;
    out.dirs_ = dirs_;
    out.dirs_.insert(out.dirs_.end(), fine.dirs_.begin(), fine.dirs_.end());
    return out;
}

}  // namespace eidlab
