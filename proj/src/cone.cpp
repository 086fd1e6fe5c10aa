#include "eidlab/cone.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <utility>

#include "eidlab/error.hpp"
#include "eidlab/sphere.hpp"

namespace eidlab {

Cone::Cone(Eigen::VectorXd v, double half_angle) : axis(std::move(v)), theta(half_angle) {
    require(axis.size() >= 2, "cone axis must live in dimension >= 2");
    require(std::abs(axis.norm() - 1.0) <= 1e-14, "cone axis must be a unit vector");
    require(theta > 0.0 && theta < std::acos(-1.0) / 2.0,
            "cone half-angle must lie in (0, pi/2)");
}

bool Cone::contains(const Eigen::VectorXd& w) const {
    require(w.size() == axis.size(), "cone membership: dimension mismatch");
    return axis.dot(w) >= std::cos(theta) * w.norm();
}

bool Cone::interior(const Eigen::VectorXd& w) const {
    require(w.size() == axis.size(), "cone membership: dimension mismatch");
    const double n = w.norm();
    return n > 0.0 && axis.dot(w) > std::cos(theta) * n;
}

bool Cone::double_open(const Eigen::VectorXd& w) const { return interior(w) || interior(-w); }

std::vector<double> cone_null_violation(const PointOracle& k_set, const Cone& cone,
                                        const std::vector<Polyline>& curves) {
    std::vector<double> out;
    out.reserve(curves.size());
    for (const Polyline& curve : curves) {
        curve.validate();
        double bad = 0.0;
        Eigen::Index rows = curve.points.rows();
        bool prev_in = rows > 0 && k_set(curve.points.row(0).transpose());
        for (Eigen::Index i = 0; i + 1 < rows; ++i) {
            const bool next_in = k_set(curve.points.row(i + 1).transpose());
            if (prev_in && next_in) {
                Eigen::VectorXd chord =
                    (curve.points.row(i + 1) - curve.points.row(i)).transpose();
                if (cone.double_open(chord)) bad += chord.norm();
            }
            prev_in = next_in;
        }
        out.push_back(bad);
    }
    return out;
}

namespace {

// Directions outside both open cones, including the exact boundary ring.
std::vector<Eigen::VectorXd> admissible_directions(const Cone& cone, Eigen::Index n_dirs) {
    const Eigen::Index dim = cone.axis.size();
    require(dim == 2 || dim == 3, "cone_upper_gradient supports dimensions 2 and 3");
    require(n_dirs >= 8, "cone_upper_gradient needs at least 8 directions");

    std::vector<Eigen::VectorXd> kept;
    SphereSampler sampler(dim, n_dirs);
    for (const Eigen::VectorXd& w : sampler.directions())
        if (!cone.double_open(w)) kept.push_back(w);

    const double c = std::cos(cone.theta);
    const double s = std::sin(cone.theta);
    if (dim == 2) {
        Eigen::Vector2d v = cone.axis;
        Eigen::Vector2d perp(-v.y(), v.x());
        for (int sv : {+1, -1})
            for (int sp : {+1, -1})
                kept.push_back(static_cast<double>(sv) * (c * v + sp * s * perp));
    } else {
        // Orthonormal frame {u1, u2} for the plane perpendicular to the axis.
        Eigen::Vector3d v = cone.axis;
        Eigen::Vector3d seed = std::abs(v.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                     : Eigen::Vector3d::UnitY();
        Eigen::Vector3d u1 = (seed - seed.dot(v) * v).normalized();
        Eigen::Vector3d u2 = v.cross(u1);
        const Eigen::Index ring = std::max<Eigen::Index>(n_dirs, 720);
        const double pi = std::acos(-1.0);
        for (Eigen::Index j = 0; j < ring; ++j) {
            const double psi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(ring);
            Eigen::Vector3d w = c * v + s * (std::cos(psi) * u1 + std::sin(psi) * u2);
            kept.push_back(w);
            kept.push_back(-w);
        }
    }
    return kept;
}

const double kPi = std::acos(-1.0);

}  // namespace

GridField cone_upper_gradient(const GridSpec& spec,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                              const PointOracle& k_set, const Cone& cone, Eigen::Index n_dirs) {
    spec.validate();
    require(spec.dim() == cone.axis.size(), "cone_upper_gradient: grid/cone dimension mismatch");
    const std::vector<Eigen::VectorXd> dirs = admissible_directions(cone, n_dirs);
    require(!dirs.empty(), "cone_upper_gradient: no admissible directions");

    GridField out{spec, Eigen::VectorXd::Zero(spec.point_count())};
    for (Eigen::Index i = 0; i < spec.point_count(); ++i) {
        const Eigen::VectorXd x = spec.point(i);
        const Eigen::VectorXd g = grad(x);
        require(g.size() == spec.dim(), "cone_upper_gradient: gradient dimension mismatch");
        if (!k_set(x)) {
            out.values[i] = g.norm();
            continue;
        }
        double best = 0.0;
        for (const Eigen::VectorXd& w : dirs) best = std::max(best, std::abs(g.dot(w)));
        out.values[i] = best;
    }
    return out;
}

ConeNullExample corpus_hyperplane() {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 101, Stencil::King);
    const double c = 0.5;
    PointOracle member = [c](const Eigen::VectorXd& x) { return std::abs(x[0] - c) <= 1e-12; };
    return ConeNullExample{"hyperplane", spec, member, Cone(Eigen::Vector2d::UnitX(), kPi / 3.0)};
}

ConeNullExample corpus_lipschitz_graph() {
    // 5:1 anisotropic lattice; the index diagonal j == i is the slope-1/5
    // graph x2 = x1 / 5, so membership reduces to integer arithmetic.
    GridSpec spec;
    spec.lo = Eigen::Vector2d(0.0, 0.0);
    spec.hi = Eigen::Vector2d(1.0, 0.2);
    spec.counts = Eigen::Vector2i(101, 101);
    spec.stencil = Stencil::King;
    spec.validate();
    PointOracle member = [spec](const Eigen::VectorXd& x) {
        Eigen::VectorXi idx = spec.nearest_index(x);
        if ((spec.point(spec.flatten(idx)) - x).norm() > 1e-9) return false;
        return idx[0] == idx[1];
    };
    return ConeNullExample{"lipschitz-graph", spec, member,
                           Cone(Eigen::Vector2d::UnitY(), kPi / 3.0)};
}

ConeNullExample corpus_cantor_lines() {
    const int level = 4;
    long scale = 1;  // 3^level
    for (int i = 0; i < level; ++i) scale *= 3;
    const Eigen::Index count = 3 * scale + 1;  // spacing 1 / (3 * 3^level)
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, count, Stencil::King);

    // Endpoints of the surviving level-4 intervals, in units of the fine
    // spacing h = 1/243; all are multiples of 3.
    std::vector<std::pair<long, long>> ivs{{0, scale}};
    for (int i = 0; i < level; ++i) {
        std::vector<std::pair<long, long>> next;
        for (auto [a, b] : ivs) {
            const long t = (b - a) / 3;
            next.emplace_back(a, a + t);
            next.emplace_back(b - t, b);
        }
        ivs = std::move(next);
    }
    auto ends = std::make_shared<std::set<long>>();
    for (auto [a, b] : ivs) {
        ends->insert(3 * a);
        ends->insert(3 * b);
    }
    PointOracle member = [spec, ends](const Eigen::VectorXd& x) {
        Eigen::VectorXi idx = spec.nearest_index(x);
        if ((spec.point(spec.flatten(idx)) - x).norm() > 1e-9) return false;
        return ends->count(static_cast<long>(idx[0])) > 0;
    };
    return ConeNullExample{"cantor-lines", spec, member,
                           Cone(Eigen::Vector2d::UnitX(), kPi / 3.0)};
}

std::vector<ConeNullExample> cone_null_corpus() {
    return {corpus_hyperplane(), corpus_lipschitz_graph(), corpus_cantor_lines()};
}

}  // namespace eidlab
