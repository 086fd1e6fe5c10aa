#pragma once

#include <Eigen/Core>
#include <vector>

#include "eidlab/error.hpp"

namespace eidlab {

// A function on vertices is just a dense vector; Eigen expressions compose.
using VertexFn = Eigen::VectorXd;

// Nonnegative atomic measure on vertices.
class Measure {
public:
    Measure() = default;
    explicit Measure(Eigen::VectorXd weights) : w_(std::move(weights)) {
        for (Eigen::Index i = 0; i < w_.size(); ++i)
            require(w_[i] >= 0.0, "Measure: negative weight at vertex " + std::to_string(i));
    }
    static Measure uniform(Eigen::Index n, double w = 1.0) {
        return Measure(Eigen::VectorXd::Constant(n, w));
    }

    Eigen::Index size() const { return w_.size(); }
    double operator[](Eigen::Index i) const { return w_[i]; }
    const Eigen::VectorXd& weights() const { return w_; }
    double total() const { return w_.sum(); }

private:
    Eigen::VectorXd w_;
};

// Finite vertex set as a boolean mask.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(Eigen::Array<bool, Eigen::Dynamic, 1> mask) : mask_(std::move(mask)) {}
    static VertexSet full(Eigen::Index n) {
        return VertexSet(Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, true));
    }
    static VertexSet empty(Eigen::Index n) {
        return VertexSet(Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false));
    }
    static VertexSet of(Eigen::Index n, const std::vector<Eigen::Index>& ids) {
        auto m = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n, false).eval();
        for (auto i : ids) {
            require(i >= 0 && i < n, "VertexSet: vertex id out of range");
            m[i] = true;
        }
        return VertexSet(m);
    }

    Eigen::Index size() const { return mask_.size(); }
    bool contains(Eigen::Index i) const { return mask_[i]; }
    Eigen::Index count() const { return mask_.count(); }
    const Eigen::Array<bool, Eigen::Dynamic, 1>& mask() const { return mask_; }

    VertexSet complement() const { return VertexSet(!mask_); }
    VertexSet unite(const VertexSet& o) const {
        require(o.size() == size(), "VertexSet: size mismatch");
        return VertexSet(mask_ || o.mask_);
    }
    VertexSet intersect(const VertexSet& o) const {
        require(o.size() == size(), "VertexSet: size mismatch");
        return VertexSet(mask_ && o.mask_);
    }
    std::vector<Eigen::Index> indices() const {
        std::vector<Eigen::Index> out;
        for (Eigen::Index i = 0; i < mask_.size(); ++i)
            if (mask_[i]) out.push_back(i);
        return out;
    }

private:
    Eigen::Array<bool, Eigen::Dynamic, 1> mask_;
};

// Mass of a set: sum of weights over members.
inline double measure_of(const Measure& mu, const VertexSet& a) {
    require(mu.size() == a.size(), "measure_of: size mismatch");
    double s = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        if (a.contains(i)) s += mu[i];
    return s;
}

}  // namespace eidlab
