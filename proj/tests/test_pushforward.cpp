#include <doctest.h>

#include <cmath>
#include <vector>

#include "eidlab/energy_form.hpp"
#include "eidlab/error.hpp"
#include "eidlab/experiments.hpp"
#include "eidlab/pushforward.hpp"
#include "eidlab/scalar_eid.hpp"
#include "eidlab/sphere.hpp"

using namespace eidlab;

namespace {

// 1D lattice on [0,1) with k points and unit weights w per vertex.
struct LineSetup {
    GridSpec spec;
    MetricGraph graph;
    std::vector<VertexFn> phi;

    explicit LineSetup(Eigen::Index k, double lo = 0.0, double hi = 1.0)
        : spec(make_grid_1d(lo, hi, k)), graph(build_grid_graph(spec)) {
        phi.push_back(graph.coords().col(0));
    }
};

}  // namespace

TEST_CASE("pushforward of an injective embedding separates every vertex") {
    LineSetup s(16);
    Measure w = Measure::uniform(16, 0.25);
    BinnedMeasure out = pushforward(s.phi, w, VertexSet::full(16), 0.03);
    CHECK(out.box_count() == 16);
    CHECK(out.total() == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("pushforward of a constant map concentrates in one box") {
    LineSetup s(16);
    std::vector<VertexFn> constant{VertexFn::Constant(16, 0.37)};
    Measure w = Measure::uniform(16, 1.0);
    BinnedMeasure out = pushforward(constant, w, VertexSet::full(16), 0.1);
    CHECK(out.box_count() == 1);
    CHECK(out.total() == doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("pushforward restricted to a subset carries exactly that mass") {
    LineSetup s(12);
    Eigen::VectorXd vw(12);
    for (Eigen::Index i = 0; i < 12; ++i) vw[i] = 1.0 + double(i);
    Measure w{vw};
    VertexSet a = VertexSet::of(12, {0, 3, 7});
    BinnedMeasure out = pushforward(s.phi, w, a, 0.02);
    CHECK(out.total() == doctest::Approx(1.0 + 4.0 + 8.0).epsilon(1e-13));
    CHECK(out.box_count() == 3);
}

TEST_CASE("point mass singular profile equals total minus the envelope capacity") {
    // All vertices map to one point: s_C(h) = m - C h in one dimension.
    LineSetup s(8);
    std::vector<VertexFn> constant{VertexFn::Constant(8, 0.4)};
    Measure w = Measure::uniform(8, 0.25);  // m = 2
    auto prof = singular_mass_profile(constant, w, VertexSet::full(8), {0.5, 0.25}, 1.0);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0].first == 0.5);
    CHECK(prof[0].second == doctest::Approx(1.5).epsilon(1e-13));
    CHECK(prof[1].second == doctest::Approx(1.75).epsilon(1e-13));
}

TEST_CASE("mass at the uniform density is absorbed completely by the envelope") {
    // 64 points at k/64 with weight 1/64: every 1/8 box holds exactly its
    // allowance under cap 1, so the excess vanishes identically.
    GridSpec spec = make_grid_1d(0.0, 63.0 / 64.0, 64);
    MetricGraph g = build_grid_graph(spec);
    std::vector<VertexFn> phi{g.coords().col(0)};
    Measure w = Measure::uniform(64, 1.0 / 64.0);
    auto prof = singular_mass_profile(phi, w, VertexSet::full(64), {0.125}, 1.0);
    REQUIRE(prof.size() == 1);
    CHECK(prof[0].second == 0.0);
}

TEST_CASE("singular mass is nonincreasing in the density cap") {
    LineSetup s(32);
    std::vector<VertexFn> sq{s.phi[0].cwiseProduct(s.phi[0])};
    Measure w = Measure::uniform(32, 1.0 / 32.0);
    std::vector<double> ladder{0.25, 0.125, 0.0625};
    auto lo = singular_mass_profile(sq, w, VertexSet::full(32), ladder, 0.5);
    auto hi = singular_mass_profile(sq, w, VertexSet::full(32), ladder, 2.0);
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        CHECK(hi[i].second <= lo[i].second + 1e-15);
        CHECK(lo[i].second >= 0.0);
    }
}

TEST_CASE("singular profiles demand a strictly decreasing box ladder") {
    LineSetup s(8);
    Measure w = Measure::uniform(8);
    CHECK_THROWS_AS(
        singular_mass_profile(s.phi, w, VertexSet::full(8), {0.5, 0.5}, 1.0),
        ValidationError);
    CHECK_THROWS_AS(
        singular_mass_profile(s.phi, w, VertexSet::full(8), {0.25, 0.5}, 1.0),
        ValidationError);
}

TEST_CASE("smooth monotone scalar stages classify as consistent with the property") {
    const double cc = 2.6;
    std::vector<EidStage> stages;
    std::vector<MetricGraph> keep;
    keep.reserve(3);
    std::vector<GridSpec> specs;
    for (Eigen::Index k : {65, 129, 257}) {
        specs.push_back(make_grid_1d(0.0, 1.0, k));
        keep.emplace_back(build_grid_graph(specs.back(), grid_conductance(1, 2.0)));
    }
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const MetricGraph& g = keep[i];
        VertexFn x = g.coords().col(0);
        VertexFn f = x.array() + 0.15 * x.array() * (1.0 - x.array()) * (2.0 - x.array());
        PEnergyForm form(g, Measure::uniform(g.vertex_count(), specs[i].spacing()[0]), 2.0);
        stages.push_back(EidStage{form, {f}, VertexSet::full(g.vertex_count()),
                                  specs[i].spacing()[0], specs[i]});
    }
    EidConfig cfg;
    cfg.h_factor = 0.32;
    cfg.density_cap = cc;
    EidReport rep = eid_experiment(stages, cfg);
    CHECK(rep.verdict == "consistent-with-EID");
    CHECK(!rep.degenerate);
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) {
        CHECK(row.c == cc);
        CHECK(row.singular_mass <= row.total_mass);
    }
}

TEST_CASE("duplicated planar coordinates force the degenerate singular branch") {
    PlanarEidData data = make_planar_eid_data({17, 33}, true);
    SphereSampler sampler(2, 128);
    EidConfig cfg;
    cfg.h_factor = planar_bin_factor();
    cfg.density_cap = data.density_cap;
    cfg.sampler = &sampler;
    EidReport rep = eid_experiment(data.stages, cfg);
    CHECK(rep.degenerate);
    CHECK(rep.verdict == "singular");
    for (const auto& row : rep.rows)
        CHECK(row.singular_mass >= 0.5 * row.total_mass);
}

TEST_CASE("refinement stages with incompatible lattices are rejected") {
    std::vector<GridSpec> specs{make_grid_1d(0.0, 1.0, 9), make_grid_1d(0.1, 1.1, 17)};
    std::vector<MetricGraph> keep;
    std::vector<EidStage> stages;
    for (const auto& spec : specs) keep.emplace_back(build_grid_graph(spec));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        PEnergyForm form(keep[i], Measure::uniform(keep[i].vertex_count()), 2.0);
        stages.push_back(EidStage{form,
                                  {keep[i].coords().col(0)},
                                  VertexSet::full(keep[i].vertex_count()),
                                  specs[i].spacing()[0],
                                  specs[i]});
    }
    EidConfig cfg;
    CHECK_THROWS_AS(eid_experiment(stages, cfg), ValidationError);
}

TEST_CASE("flattening sequence on an aligned grid integrates exactly") {
    IntervalUnion k_origin({{0.0, 0.0}});
    GridSpec spec = make_grid_1d(-1.0, 1.0, 257);
    ScalarEidSequence seq = scalar_eid_sequence(k_origin, 8.0, spec);
    // deriv = min(1, 8 |x|) is piecewise linear with the kink on a lattice
    // point, so the cumulative trapezoid is exact: g(1) = 1 - 1/16.
    Eigen::VectorXd one(1), minus(1), zero(1);
    one << 1.0;
    minus << -1.0;
    zero << 0.0;
    CHECK(seq.g.at_point(one) == 0.9375);
    CHECK(seq.g.at_point(minus) == -0.9375);
    CHECK(seq.g.at_point(zero) == 0.0);
    CHECK(seq.deriv.at_point(zero) == 0.0);
    CHECK(seq.deriv.at_point(one) == 1.0);
}

TEST_CASE("empty flattening target reduces to the identity") {
    GridSpec spec = make_grid_1d(-1.0, 1.0, 65);
    ScalarEidSequence seq = scalar_eid_sequence(IntervalUnion(), 100.0, spec);
    for (Eigen::Index v = 0; v < spec.point_count(); ++v)
        CHECK(seq.g.values[v] == doctest::Approx(spec.point(v)[0]).epsilon(1e-14));
}

TEST_CASE("binwise change-of-variables agreement holds at modest resolution") {
    ScalarBinwise bw = scalar_binwise_check(1024);
    CHECK(bw.interior_bins >= 50);
    CHECK(bw.worst_rel_error <= 0.05);
}

TEST_CASE("cantor image mass scales with neighborhood length down the ladder") {
    CantorCheck cc = cantor_neighborhood_check(8);
    REQUIRE(cc.ratios.size() == 5);
    CHECK(cc.pass);
    for (double r : cc.ratios) {
        CHECK(r >= 0.9);
        CHECK(r <= 1.0);
    }
    CHECK(cc.spread <= 1.1);
}
