#include "eidlab/pl_maxmin.hpp"

#include <cmath>

#include "eidlab/error.hpp"

namespace eidlab {

PlMaxMin::PlMaxMin(Eigen::MatrixXd points, Eigen::VectorXd values, double lip)
    : points_(std::move(points)), values_(std::move(values)), lip_(lip) {
    require(points_.rows() >= 1, "PlMaxMin: at least one sample required");
    require(points_.rows() == values_.size(), "PlMaxMin: one value per point required");
    require(points_.row(0).norm() == 0.0, "PlMaxMin: first sample must be the origin");
    require(lip_ >= 0.0 && std::isfinite(lip_), "PlMaxMin: bad Lipschitz constant");

    const Eigen::Index k = points_.rows();
    pair_dirs_.resize(k * (k - 1) / 2, points_.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            Eigen::VectorXd d = points_.row(i) - points_.row(j);
            double len = d.norm();
            require(len > 0.0, "PlMaxMin: duplicate sample points");
            require(std::abs(values_[i] - values_[j]) <= lip_ * len * (1.0 + 1e-12),
                    "PlMaxMin: samples exceed the declared Lipschitz constant");
            pair_dirs_.row(r++) = d / len;
        }
}

double PlMaxMin::h(const Eigen::VectorXd& x) const {
    if (pair_dirs_.rows() == 0) return 0.0;
    return (pair_dirs_ * x).cwiseAbs().maxCoeff();
}

double PlMaxMin::operator()(const Eigen::VectorXd& x) const {
    double best = values_[0] + lip_ * h(x - points_.row(0).transpose());
    for (Eigen::Index j = 1; j < points_.rows(); ++j) {
        double v = values_[j] + lip_ * h(x - points_.row(j).transpose());
        if (v < best) best = v;
    }
    return best;
}

}  // namespace eidlab
