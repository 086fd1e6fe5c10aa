#include "eidlab/binning.hpp"

#include <cmath>

namespace eidlab {

BinnedMeasure::BinnedMeasure(Eigen::Index dim, double h, Eigen::VectorXd origin)
    : dim_(dim), h_(h), origin_(std::move(origin)) {
    require(dim >= 1 && dim <= 4, "binned measure supports dimensions 1..4");
    require(h > 0.0 && std::isfinite(h), "box side must be positive and finite");
    if (origin_.size() == 0) origin_ = Eigen::VectorXd::Zero(dim);
    require(origin_.size() == dim, "origin dimension mismatch");
    require(origin_.allFinite(), "origin must be finite");
}

BoxKey BinnedMeasure::key_of(const Eigen::VectorXd& x) const {
    require(x.size() == dim_, "point dimension mismatch");
    require(x.allFinite(), "point must be finite");
    BoxKey k{0, 0, 0, 0};
    for (Eigen::Index a = 0; a < dim_; ++a)
        k[static_cast<std::size_t>(a)] =
            static_cast<std::int64_t>(std::floor((x[a] - origin_[a]) / h_));
    return k;
}

Eigen::VectorXd BinnedMeasure::box_corner(const BoxKey& k) const {
    Eigen::VectorXd c(dim_);
    for (Eigen::Index a = 0; a < dim_; ++a)
        c[a] = origin_[a] + h_ * static_cast<double>(k[static_cast<std::size_t>(a)]);
    return c;
}

void BinnedMeasure::add(const Eigen::VectorXd& x, double mass) {
    add_key(key_of(x), mass);
}

void BinnedMeasure::add_key(const BoxKey& k, double mass) {
    require(mass >= 0.0 && std::isfinite(mass), "mass must be nonnegative and finite");
    if (mass == 0.0) return;
    mass_[k] += mass;
}

double BinnedMeasure::mass(const BoxKey& k) const {
    auto it = mass_.find(k);
    return it == mass_.end() ? 0.0 : it->second;
}

double BinnedMeasure::total() const {
    double s = 0.0;
    for (const auto& [k, m] : mass_) s += m;
    return s;
}

double BinnedMeasure::excess_over(double cap) const {
    require(cap >= 0.0 && std::isfinite(cap), "density cap must be nonnegative");
    double box_vol = 1.0;
    for (Eigen::Index a = 0; a < dim_; ++a) box_vol *= h_;
    const double per_box = cap * box_vol;
    double s = 0.0;
    for (const auto& [k, m] : mass_)
        if (m > per_box) s += m - per_box;
    return s;
}

bool BinnedMeasure::same_partition(const BinnedMeasure& o) const {
    if (dim_ != o.dim_ || h_ != o.h_) return false;
    return (origin_ - o.origin_).lpNorm<Eigen::Infinity>() == 0.0;
}

BinnedMeasure bin_points(const Eigen::MatrixXd& points, const Eigen::VectorXd& weights,
                         double h, const Eigen::VectorXd& origin) {
    require(points.rows() == weights.size(), "one weight per point required");
    BinnedMeasure bm(points.cols(), h,
                     origin.size() ? origin : Eigen::VectorXd::Zero(points.cols()));
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        bm.add(points.row(i).transpose(), weights[i]);
    return bm;
}

}  // namespace eidlab
