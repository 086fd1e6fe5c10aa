#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "eidlab/error.hpp"
#include "eidlab/gasket.hpp"
#include "eidlab/grid.hpp"
#include "eidlab/small_sym_eig.hpp"

using namespace eidlab;

namespace {

// Harmonic extension, cell by cell: the boundary values of cell i are A_i
// times the parent boundary values. Everything downstream of these three
// matrices is exact rational arithmetic evaluated in doubles.
Eigen::Matrix3d harmonic_cell_matrix(int i) {
    Eigen::Matrix3d a;
    switch (i) {
        case 0:
            a << 1.0, 0.0, 0.0, 0.4, 0.4, 0.2, 0.4, 0.2, 0.4;
            break;
        case 1:
            a << 0.4, 0.4, 0.2, 0.0, 1.0, 0.0, 0.2, 0.4, 0.4;
            break;
        default:
            a << 0.4, 0.2, 0.4, 0.2, 0.4, 0.4, 0.0, 0.0, 1.0;
            break;
    }
    return a;
}

Eigen::Matrix3d triangle_energy_form() {
    Eigen::Matrix3d l;
    l << 2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0;
    return l;
}

// Pair-energy matrix of the kusuoka seeds on one level-m cell with boundary
// map b: entries (5/3)^m (B s_j)^T L (B s_k).
Eigen::Matrix2d cell_pair_matrix(const Eigen::Matrix3d& b, int m) {
    Eigen::Vector3d s1(2.0, -1.0, -1.0), s2(0.0, 1.0, -1.0);
    s1 /= std::sqrt(18.0);
    s2 /= std::sqrt(6.0);
    const Eigen::Matrix3d l = triangle_energy_form();
    const double scale = std::pow(5.0 / 3.0, m);
    Eigen::Matrix2d out;
    out(0, 0) = scale * (b * s1).dot(l * (b * s1));
    out(0, 1) = scale * (b * s1).dot(l * (b * s2));
    out(1, 0) = out(0, 1);
    out(1, 1) = scale * (b * s2).dot(l * (b * s2));
    return out;
}

int rank_at(const Eigen::Matrix2d& m, double threshold) {
    Eigen::VectorXd ev = sym_eigenvalues(m);
    if (!(ev[1] > 0.0)) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < 2; ++i)
        if (ev[i] > threshold * ev[1]) ++r;
    return r;
}

}  // namespace

TEST_CASE("gasket graphs have the closed-form vertex and cell counts") {
    for (int m : {1, 2, 3}) {
        GasketLevel lvl = sg_graph(m);
        long expected = (static_cast<long>(std::pow(3.0, m + 1)) + 3) / 2;
        CHECK(lvl.graph.vertex_count() == expected);
        CHECK(lvl.cells.rows() == static_cast<long>(std::pow(3.0, m)));
        CHECK(lvl.midpoint_rules.size() ==
              static_cast<std::size_t>(lvl.graph.vertex_count() - 3));
    }
    CHECK_THROWS_AS(sg_graph(12), ValidationError);
}

TEST_CASE("harmonic extension follows the two-fifths midpoint rule") {
    GasketLevel lvl = sg_graph(2);
    VertexFn f = harmonic_extension(lvl, Eigen::Vector3d(1.0, 0.0, 0.0));
    for (const auto& rule : lvl.midpoint_rules) {
        double expected = (2.0 * f[rule[1]] + 2.0 * f[rule[2]] + f[rule[3]]) / 5.0;
        CHECK(f[rule[0]] == doctest::Approx(expected).epsilon(1e-14));
    }
    // Level-1 midpoints of the corner seed are 0.4, 0.4, 0.2.
    GasketLevel one = sg_graph(1);
    VertexFn g = harmonic_extension(one, Eigen::Vector3d(1.0, 0.0, 0.0));
    std::vector<double> mids{g[3], g[4], g[5]};
    std::sort(mids.begin(), mids.end());
    CHECK(mids[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(mids[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(mids[2] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("harmonic energy is independent of the approximation level") {
    for (int m : {1, 2, 3, 4}) {
        GasketLevel lvl = sg_graph(m);
        VertexFn f = harmonic_extension(lvl, Eigen::Vector3d(1.0, 0.0, 0.0));
        CHECK(sg_energy(lvl, f) == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("kusuoka pair is orthonormal in energy with total measure two") {
    for (int m : {1, 2, 4}) {
        GasketLevel lvl = sg_graph(m);
        auto [h1, h2] = kusuoka_pair(lvl);
        CHECK(sg_energy(lvl, h1) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(sg_energy(lvl, h2) == doctest::Approx(1.0).epsilon(1e-13));
        double cross = 0.0;
        for (Eigen::Index cell = 0; cell < lvl.cells.rows(); ++cell)
            cross += sg_cell_energy(lvl, cell, h1, h2);
        CHECK(std::abs(cross) <= 1e-13);
        CHECK(kusuoka_measure(lvl).total() == doctest::Approx(2.0).epsilon(1e-13));

        Eigen::VectorXd cm = cell_nu_masses(lvl, h1, h2);
        CHECK(cm.sum() == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(cm.minCoeff() > 0.0);
    }
}

TEST_CASE("level-one cells carry eigenvalues 3/5 and 1/15 with equal masses") {
    GasketLevel lvl = sg_graph(1);
    auto [h1, h2] = kusuoka_pair(lvl);
    for (Eigen::Index cell = 0; cell < 3; ++cell) {
        Eigen::Matrix2d m;
        m(0, 0) = sg_cell_energy(lvl, cell, h1, h1);
        m(0, 1) = sg_cell_energy(lvl, cell, h1, h2);
        m(1, 0) = m(0, 1);
        m(1, 1) = sg_cell_energy(lvl, cell, h2, h2);
        Eigen::VectorXd ev = sym_eigenvalues(m);
        CHECK(ev[0] == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
        CHECK(ev[1] == doctest::Approx(3.0 / 5.0).epsilon(1e-12));
        CHECK(m.trace() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    EigenratioProfile prof = eigenratio_profile(lvl);
    for (const auto& row : prof.cells) {
        CHECK(row.ratio == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        CHECK(row.nu_mass == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("graph cell energies match the harmonic matrix products at level one") {
    GasketLevel lvl = sg_graph(1);
    auto [h1, h2] = kusuoka_pair(lvl);
    std::vector<std::pair<double, double>> graph_eigs, oracle_eigs;
    for (Eigen::Index cell = 0; cell < 3; ++cell) {
        Eigen::Matrix2d m;
        m(0, 0) = sg_cell_energy(lvl, cell, h1, h1);
        m(0, 1) = sg_cell_energy(lvl, cell, h1, h2);
        m(1, 0) = m(0, 1);
        m(1, 1) = sg_cell_energy(lvl, cell, h2, h2);
        Eigen::VectorXd ev = sym_eigenvalues(m);
        graph_eigs.emplace_back(ev[0], ev[1]);
    }
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd ev = sym_eigenvalues(cell_pair_matrix(harmonic_cell_matrix(i), 1));
        oracle_eigs.emplace_back(ev[0], ev[1]);
    }
    std::sort(graph_eigs.begin(), graph_eigs.end());
    std::sort(oracle_eigs.begin(), oracle_eigs.end());
    for (int i = 0; i < 3; ++i) {
        CHECK(graph_eigs[i].first == doctest::Approx(oracle_eigs[i].first).epsilon(1e-12));
        CHECK(graph_eigs[i].second == doctest::Approx(oracle_eigs[i].second).epsilon(1e-12));
    }
}

TEST_CASE("rank statistics at shallow levels match the closed-form estimator") {
    // The matrix-product oracle enumerates cell words directly, so it never
    // touches the graph; agreement pins the estimator to the construction.
    for (int m : {1, 2}) {
        std::vector<Eigen::Matrix2d> cell_ms;
        if (m == 1) {
            for (int i = 0; i < 3; ++i)
                cell_ms.push_back(cell_pair_matrix(harmonic_cell_matrix(i), 1));
        } else {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    cell_ms.push_back(cell_pair_matrix(
                        harmonic_cell_matrix(j) * harmonic_cell_matrix(i), 2));
        }
        std::vector<double> rank_mass(3, 0.0);
        double total = 0.0;
        int esssup = 0;
        for (const auto& mm : cell_ms) {
            int r = rank_at(mm, 0.05);
            rank_mass[static_cast<std::size_t>(r)] += mm.trace();
            total += mm.trace();
            esssup = std::max(esssup, r);
        }
        int expected_dim = 0;
        double cum = 0.0;
        for (int r = 0; r <= 2; ++r) {
            cum += rank_mass[static_cast<std::size_t>(r)];
            if (cum >= 0.99 * total - 1e-12 * total) {
                expected_dim = r;
                break;
            }
        }

        GasketLevel lvl = sg_graph(m);
        auto [h1, h2] = kusuoka_pair(lvl);
        MdimResult res = estimate_martingale_dimension(lvl, {{h1, h2}}, 0.05, 0.99);
        CHECK(res.dimension == expected_dim);
        CHECK(res.esssup_rank == esssup);
        REQUIRE(res.rank_mass.size() == 3);
        for (int r = 0; r <= 2; ++r)
            CHECK(res.rank_mass[static_cast<std::size_t>(r)] ==
                  doctest::Approx(rank_mass[static_cast<std::size_t>(r)]).epsilon(1e-10));
    }
}

TEST_CASE("eigenratio mass fractions are monotone in the threshold and the level") {
    GasketLevel l3 = sg_graph(3);
    GasketLevel l4 = sg_graph(4);
    EigenratioProfile p3 = eigenratio_profile(l3, {0.01, 0.05, 0.2});
    EigenratioProfile p4 = eigenratio_profile(l4, {0.01, 0.05, 0.2});
    for (std::size_t t = 0; t < p3.taus.size(); ++t) {
        CHECK(p3.fraction_below[t] >= 0.0);
        CHECK(p3.fraction_below[t] <= 1.0);
        if (t > 0) CHECK(p3.fraction_below[t] >= p3.fraction_below[t - 1]);
        CHECK(p4.fraction_below[t] >= p3.fraction_below[t] - 1e-12);
    }
    double mass3 = 0.0;
    for (const auto& row : p3.cells) mass3 += row.nu_mass;
    CHECK(mass3 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("random singleton tuples never raise the rank above the pair") {
    GasketLevel lvl = sg_graph(4);
    CounterRng rng(501);
    auto tuples = mdim_tuples(lvl, 12, rng);
    REQUIRE(!tuples.empty());
    CHECK(tuples.front().size() == 2);  // the orthonormal pair leads
    for (std::size_t k = 1; k < tuples.size(); ++k) CHECK(tuples[k].size() == 1);
    MdimResult res = estimate_martingale_dimension(lvl, tuples, 0.05, 0.99);
    CHECK(res.esssup_rank <= 2);
    CHECK(res.dimension >= 1);
    CHECK(res.dimension <= 2);
}

TEST_CASE("vertex-basis estimator sees rank two on an isotropic planar control") {
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, 9, Stencil::King);
    MetricGraph g = build_grid_graph(spec, grid_conductance(2, 2.0));
    PEnergyForm form(g, Measure::uniform(g.vertex_count()), 2.0);
    std::vector<VertexFn> coords{g.coords().col(0), g.coords().col(1)};
    VertexFn lam = form.energy_measure_density(coords[0]) +
                   form.energy_measure_density(coords[1]);
    MdimResult res =
        estimate_martingale_dimension(form, Measure(lam), {coords}, 0.05, 0.99);
    CHECK(res.dimension == 2);
    CHECK(res.esssup_rank == 2);
}

TEST_CASE("holder exponent bound gates the dimension estimate") {
    const double d_h = std::log(3.0) / std::log(2.0);
    const double alpha = std::log(5.0 / 3.0) / std::log(2.0);
    HolderCheck ok = holder_bound_check(d_h, alpha, 1);
    CHECK(ok.pass);
    CHECK(ok.bound == doctest::Approx(d_h / alpha).epsilon(1e-14));
    CHECK(holder_bound_check(d_h, alpha, 2).pass);
    CHECK(!holder_bound_check(d_h, alpha, 3).pass);
    CHECK_THROWS_AS(holder_bound_check(d_h, 1.4, 1), ValidationError);
    CHECK_THROWS_AS(holder_bound_check(-1.0, alpha, 1), ValidationError);
}

TEST_CASE("light cell mass sums the smallest prescribed share of cells") {
    Eigen::VectorXd masses(4);
    masses << 0.5, 0.1, 0.3, 0.2;
    CHECK(light_cell_mass(masses, 0.5) == doctest::Approx(0.3));   // two lightest
    CHECK(light_cell_mass(masses, 0.26) == doctest::Approx(0.3));  // ceil rounds up
    CHECK(light_cell_mass(masses, 0.25) == doctest::Approx(0.1));
    GasketLevel l2 = sg_graph(2);
    GasketLevel l3 = sg_graph(3);
    auto [a1, a2] = kusuoka_pair(l2);
    auto [b1, b2] = kusuoka_pair(l3);
    double m2 = light_cell_mass(cell_nu_masses(l2, a1, a2));
    double m3 = light_cell_mass(cell_nu_masses(l3, b1, b2));
    CHECK(m2 > m3);  // the measure concentrates as the level grows
}
