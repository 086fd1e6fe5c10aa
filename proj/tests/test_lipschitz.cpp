#include <doctest.h>

#include <cmath>
#include <vector>

#include "eidlab/error.hpp"
#include "eidlab/grid.hpp"
#include "eidlab/lipschitz.hpp"
#include "eidlab/pl_maxmin.hpp"
#include "eidlab/preiss.hpp"
#include "eidlab/rng.hpp"

using namespace eidlab;

namespace {

GridField random_positive_field(const GridSpec& spec, CounterRng& rng, double lo, double hi) {
    GridField f{spec, Eigen::VectorXd(spec.point_count())};
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(lo, hi);
    return f;
}

double slab_distance(const Eigen::VectorXd& x) {
    return std::max(0.0, std::abs(x[0] - 0.5) - 0.1);
}

}  // namespace

TEST_CASE("inf convolution matches the quadratic-scan oracle") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 9, Stencil::King);
    CounterRng rng(301);
    GridField g = random_positive_field(spec, rng, 0.2, 2.0);
    GridField out = inf_convolution(g, 1.7);
    for (Eigen::Index x = 0; x < spec.point_count(); ++x) {
        double best = 1e300;
        Eigen::VectorXd px = spec.point(x);
        for (Eigen::Index y = 0; y < spec.point_count(); ++y) {
            double cand = g[y] + 1.7 * (spec.point(y) - px).norm();
            best = std::min(best, cand);
        }
        CHECK(out[x] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("inf convolution never exceeds the input and is monotone in the slope") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 11, Stencil::Axis);
    CounterRng rng(302);
    GridField g = random_positive_field(spec, rng, 0.1, 3.0);
    GridField lo = inf_convolution(g, 0.5);
    GridField hi = inf_convolution(g, 5.0);
    for (Eigen::Index x = 0; x < spec.point_count(); ++x) {
        CHECK(lo[x] <= g[x] + 1e-15);
        CHECK(lo[x] <= hi[x] + 1e-15);
        CHECK(hi[x] <= g[x] + 1e-15);
    }
}

TEST_CASE("variational approximation matches the prefix-cost oracle on the line") {
    GridSpec spec = make_grid_1d(0.0, 1.0, 33);
    CounterRng rng(303);
    GridField g = random_positive_field(spec, rng, 0.3, 1.2);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0]; });
    GridField fi = variational_approx(f, g, 2.0);

    // Path costs on a line collapse to differences of one prefix sum.
    const Eigen::Index n = spec.point_count();
    double h = spec.spacing()[0];
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i < n; ++i)
        prefix[i] = prefix[i - 1] + h * 0.5 * (g[i - 1] + g[i]);
    for (Eigen::Index x = 0; x < n; ++x) {
        double best = f[x];
        for (Eigen::Index s = 0; s < n; ++s)
            best = std::min(best, f[s] + std::abs(prefix[x] - prefix[s]));
        CHECK(fi[x] == doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("saturated slowdown field returns the target exactly") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 65, Stencil::King);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0]; });
    GridField ones = make_grid_field(spec, [](const Eigen::VectorXd&) { return 1.0; });
    GridField fi = variational_approx(f, ones, std::sqrt(2.0) + spec.min_spacing());
    double worst = 0.0;
    for (Eigen::Index x = 0; x < spec.point_count(); ++x)
        worst = std::max(worst, std::abs(fi[x] - f[x]));
    CHECK(worst <= 1e-12);
    CHECK(edge_lipschitz_excess(fi, ones) <= 1e-12);
}

TEST_CASE("variational output obeys the edgewise lipschitz bound") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 33, Stencil::King);
    CounterRng rng(304);
    GridField g = random_positive_field(spec, rng, 0.05, 1.0);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0] + x[1]; });
    GridField fi = variational_approx(f, g, std::sqrt(2.0) + spec.min_spacing());
    CHECK(edge_lipschitz_excess(fi, g) <= 1e-9);
    for (Eigen::Index x = 0; x < spec.point_count(); ++x) CHECK(fi[x] <= f[x] + 1e-15);
}

TEST_CASE("gradient ladder closes the sup gap monotonically") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 65, Stencil::King);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0]; });
    std::vector<GridField> ladder;
    for (int i = 0; i < 4; ++i) {
        double scale = std::pow(2.0, i);
        ladder.push_back(make_grid_field(spec, [scale](const Eigen::VectorXd& x) {
            return std::min(1.0, 0.05 + scale * slab_distance(x));
        }));
    }
    auto rows = variational_ladder(f, ladder, std::sqrt(2.0) + spec.min_spacing());
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].sup_gap >= 0.0);
        CHECK(rows[i].lip_bound_slack <= 1e-9);
        if (i > 0) CHECK(rows[i].sup_gap <= rows[i - 1].sup_gap + 1e-12);
    }
    // The slab keeps the last rung from closing completely.
    CHECK(rows.back().sup_gap > 0.0);
}

TEST_CASE("asymptotic lipschitz constant of a coordinate is one") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 17, Stencil::Axis);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0]; });
    GridField al = asymptotic_lipschitz(f, 1.5 * spec.min_spacing());
    for (Eigen::Index x = 0; x < spec.point_count(); ++x)
        CHECK(al[x] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("asymptotic lipschitz constant tracks the local slope of a parabola") {
    GridSpec spec = make_grid_1d(0.0, 1.0, 101);
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0] * x[0]; });
    GridField al = asymptotic_lipschitz(f, 1.5 * spec.min_spacing());
    double h = spec.spacing()[0];
    for (Eigen::Index x = 5; x < spec.point_count() - 5; ++x) {
        double slope = 2.0 * spec.point(x)[0];
        CHECK(std::abs(al[x] - slope) <= 2.5 * h);
    }
}

TEST_CASE("max-min envelope interpolates dominated samples and keeps the cap") {
    Eigen::MatrixXd pts(5, 2);
    pts << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, -0.6, 0.4, 0.3, -0.8;
    Eigen::VectorXd vals(5);
    auto lin = [](double a, double b) { return 0.8 * a - 0.3 * b; };
    for (Eigen::Index i = 0; i < 5; ++i) vals[i] = lin(pts(i, 0), pts(i, 1));
    PlMaxMin env(pts, vals, 1.0);

    for (Eigen::Index i = 0; i < 5; ++i)
        CHECK(env(pts.row(i)) == doctest::Approx(vals[i]).epsilon(1e-12));

    CounterRng rng(305);
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd x(2), y(2);
        x << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        y << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        CHECK(std::abs(env(x) - env(y)) <= 1.0 * (x - y).norm() * (1.0 + 1e-10) + 1e-12);
        CHECK(env.h(x - y) <= (x - y).norm() * (1.0 + 1e-12));
    }
    // The gauge is exact along sample differences.
    Eigen::VectorXd d = (pts.row(1) - pts.row(3)).transpose();
    CHECK(env.h(d) == doctest::Approx(d.norm()).epsilon(1e-12));
}

TEST_CASE("flattening step caps the first partial on the target set") {
    PreissInput in = make_preiss_input(161, false);
    PreissStep st = preiss_step(in, 4.0, 0.08);
    CHECK(st.max_abs_d1_on_k <= 2.0 / 3.0 + 0.05);
    CHECK(st.max_abs_d1_global <= 1.0 + 1e-9);
    CHECK(st.flatten_lip_global <= std::sqrt(2.0) + 0.05);
    CHECK(st.integral_det <= st.max_abs_d1_on_k * in.mu_weights.sum() + 1e-9);
    CHECK(st.integral_det > 0.0);
}

TEST_CASE("flattening with no target set leaves the coordinate untouched") {
    PreissInput in = make_preiss_input(81, true);
    PreissStep st = preiss_step(in, 8.0, 0.1);
    double mu_total = in.mu_weights.sum();
    CHECK(st.integral_det >= 0.999 * mu_total);
    CHECK(st.integral_det <= 1.001 * mu_total);
    CHECK(st.max_abs_d1_global <= 1.0 + 1e-9);
}

TEST_CASE("unresolvable mollification radius raises a numeric error") {
    PreissInput in = make_preiss_input(41, false);
    // Spacing 2/40: delta below two cells cannot be resolved.
    CHECK_THROWS_AS(preiss_step(in, 4.0, 0.5 * (2.0 / 40.0)), NumericError);
}
