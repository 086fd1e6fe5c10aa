#include "eidlab/gasket.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "eidlab/error.hpp"
#include "eidlab/small_sym_eig.hpp"

namespace eidlab {

GasketLevel sg_graph(int m, int level_cap) {
    require(m >= 0, "sg_graph: level must be nonnegative");
    require(level_cap >= 0, "sg_graph: level cap must be nonnegative");
    if (m > level_cap)
        throw ValidationError("sg_graph: level " + std::to_string(m) + " exceeds cap " +
                              std::to_string(level_cap));

    std::vector<Eigen::Vector2d> pts;
    auto add_pt = [&](const Eigen::Vector2d& p) {
        pts.push_back(p);
        return static_cast<Eigen::Index>(pts.size()) - 1;
    };
    const Eigen::Index i0 = add_pt({0.0, 0.0});
    const Eigen::Index i1 = add_pt({1.0, 0.0});
    const Eigen::Index i2 = add_pt({0.5, std::sqrt(3.0) / 2.0});

    std::vector<std::array<Eigen::Index, 4>> rules;
    std::vector<std::array<Eigen::Index, 3>> cell_list;
    // Midpoints are created exactly once: distinct cells share corners only,
    // and a shared corner is created by the common ancestor subdivision.
    std::function<void(std::array<Eigen::Index, 3>, int)> split =
        [&](std::array<Eigen::Index, 3> tri, int depth) {
            if (depth == 0) {
                cell_list.push_back(tri);
                return;
            }
            const auto [a, b, c] = tri;
            auto mid = [&](Eigen::Index u, Eigen::Index v, Eigen::Index w) {
                const Eigen::Index id = add_pt(0.5 * (pts[u] + pts[v]));
                rules.push_back({id, u, v, w});
                return id;
            };
            const Eigen::Index ab = mid(a, b, c);
            const Eigen::Index bc = mid(b, c, a);
            const Eigen::Index ca = mid(c, a, b);
            split({a, ab, ca}, depth - 1);
            split({ab, b, bc}, depth - 1);
            split({ca, bc, c}, depth - 1);
        };
    split({i0, i1, i2}, m);

    const double rho = std::pow(5.0 / 3.0, m);
    std::vector<Edge> edges;
    edges.reserve(3 * cell_list.size());
    for (const auto& t : cell_list) {
        edges.push_back({t[0], t[1], rho});
        edges.push_back({t[1], t[2], rho});
        edges.push_back({t[0], t[2], rho});
    }
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) coords.row(static_cast<Eigen::Index>(i)) = pts[i];

    MetricGraph graph(static_cast<Eigen::Index>(pts.size()), std::move(edges), std::move(coords),
                      MetricMode::EuclideanEmbedding);
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 3> cells(
        static_cast<Eigen::Index>(cell_list.size()), 3);
    for (std::size_t i = 0; i < cell_list.size(); ++i)
        for (int j = 0; j < 3; ++j) cells(static_cast<Eigen::Index>(i), j) = cell_list[i][j];

    return GasketLevel{m, std::move(graph), std::move(cells), {i0, i1, i2}, std::move(rules)};
}

VertexFn harmonic_extension(const GasketLevel& lvl, const Eigen::Vector3d& boundary_values) {
    VertexFn f = VertexFn::Zero(lvl.graph.vertex_count());
    for (int i = 0; i < 3; ++i) f[lvl.boundary[static_cast<std::size_t>(i)]] = boundary_values[i];
    for (const auto& [w, a, b, c] : lvl.midpoint_rules)
        f[w] = (2.0 * f[a] + 2.0 * f[b] + f[c]) / 5.0;
    return f;
}

double sg_energy(const GasketLevel& lvl, const VertexFn& f) {
    require(f.size() == lvl.graph.vertex_count(), "sg_energy: function has wrong length");
    double e = 0.0;
    for (const Edge& ed : lvl.graph.edges()) {
        const double d = f[ed.u] - f[ed.v];
        e += ed.c * d * d;
    }
    return e;
}

double sg_cell_energy(const GasketLevel& lvl, Eigen::Index cell, const VertexFn& f,
                      const VertexFn& g) {
    require(cell >= 0 && cell < lvl.cells.rows(), "sg_cell_energy: cell out of range");
    const double rho = std::pow(5.0 / 3.0, lvl.m);
    const Eigen::Index a = lvl.cells(cell, 0), b = lvl.cells(cell, 1), c = lvl.cells(cell, 2);
    return rho * ((f[a] - f[b]) * (g[a] - g[b]) + (f[b] - f[c]) * (g[b] - g[c]) +
                  (f[a] - f[c]) * (g[a] - g[c]));
}

std::pair<VertexFn, VertexFn> kusuoka_pair(const GasketLevel& lvl) {
    const Eigen::Vector3d b1 = Eigen::Vector3d(2.0, -1.0, -1.0) / std::sqrt(18.0);
    const Eigen::Vector3d b2 = Eigen::Vector3d(0.0, 1.0, -1.0) / std::sqrt(6.0);
    return {harmonic_extension(lvl, b1), harmonic_extension(lvl, b2)};
}

Measure kusuoka_measure(const GasketLevel& lvl) {
    const auto [h1, h2] = kusuoka_pair(lvl);
    VertexFn w = VertexFn::Zero(lvl.graph.vertex_count());
    for (const Edge& ed : lvl.graph.edges()) {
        const double d1 = h1[ed.u] - h1[ed.v];
        const double d2 = h2[ed.u] - h2[ed.v];
        const double half = 0.5 * ed.c * (d1 * d1 + d2 * d2);
        w[ed.u] += half;
        w[ed.v] += half;
    }
    return Measure(std::move(w));
}

Eigen::VectorXd cell_nu_masses(const GasketLevel& lvl, const VertexFn& h1, const VertexFn& h2) {
    Eigen::VectorXd out(lvl.cells.rows());
    for (Eigen::Index cell = 0; cell < lvl.cells.rows(); ++cell)
        out[cell] = sg_cell_energy(lvl, cell, h1, h1) + sg_cell_energy(lvl, cell, h2, h2);
    return out;
}

namespace {

// lambda_min / lambda_max of [[a11, a12], [a12, a22]], clamped to [0, 1];
// -1 when the matrix vanishes.
double pair_ratio(double a11, double a12, double a22) {
    const double tr = a11 + a22;
    const double rad = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    const double hi = 0.5 * (tr + rad);
    if (hi <= 0.0) return -1.0;
    const double lo = 0.5 * (tr - rad);
    return std::clamp(lo / hi, 0.0, 1.0);
}

int thresholded_rank(const Eigen::MatrixXd& m, double threshold) {
    const Eigen::VectorXd ev = sym_eigenvalues(m);
    const double top = ev[ev.size() - 1];
    if (!(top > 0.0)) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] > threshold * top) ++rank;
    return rank;
}

MdimResult summarize_ranks(const std::vector<int>& ranks, const std::vector<double>& masses,
                           int max_rank, double quantile) {
    MdimResult res;
    res.rank_mass.assign(static_cast<std::size_t>(max_rank) + 1, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        res.rank_mass[static_cast<std::size_t>(ranks[i])] += masses[i];
        total += masses[i];
    }
    if (total <= 0.0) return res;
    double cum = 0.0;
    bool set = false;
    for (int r = 0; r <= max_rank; ++r) {
        cum += res.rank_mass[static_cast<std::size_t>(r)];
        if (res.rank_mass[static_cast<std::size_t>(r)] > 0.0) res.esssup_rank = r;
        if (!set && cum >= quantile * total - 1e-12 * total) {
            res.dimension = r;
            set = true;
        }
    }
    return res;
}

}  // namespace

EigenratioProfile eigenratio_profile(const GasketLevel& lvl, const std::vector<double>& taus) {
    const auto [h1, h2] = kusuoka_pair(lvl);
    const Eigen::Index nv = lvl.graph.vertex_count();
    VertexFn a11 = VertexFn::Zero(nv), a12 = VertexFn::Zero(nv), a22 = VertexFn::Zero(nv);
    for (const Edge& ed : lvl.graph.edges()) {
        const double d1 = h1[ed.u] - h1[ed.v];
        const double d2 = h2[ed.u] - h2[ed.v];
        const double hc = 0.5 * ed.c;
        a11[ed.u] += hc * d1 * d1;
        a11[ed.v] += hc * d1 * d1;
        a12[ed.u] += hc * d1 * d2;
        a12[ed.v] += hc * d1 * d2;
        a22[ed.u] += hc * d2 * d2;
        a22[ed.v] += hc * d2 * d2;
    }

    EigenratioProfile prof;
    prof.taus = taus;
    double total = 0.0;
    std::vector<double> below(taus.size(), 0.0);
    for (Eigen::Index v = 0; v < nv; ++v) {
        const double nu_v = a11[v] + a22[v];
        if (nu_v <= 0.0) continue;
        total += nu_v;
        const double ratio = pair_ratio(a11[v], a12[v], a22[v]);
        for (std::size_t t = 0; t < taus.size(); ++t)
            if (ratio < taus[t]) below[t] += nu_v;
    }
    for (double b : below) prof.fraction_below.push_back(total > 0.0 ? b / total : 0.0);

    for (Eigen::Index cell = 0; cell < lvl.cells.rows(); ++cell) {
        const double e11 = sg_cell_energy(lvl, cell, h1, h1);
        const double e12 = sg_cell_energy(lvl, cell, h1, h2);
        const double e22 = sg_cell_energy(lvl, cell, h2, h2);
        prof.cells.push_back({lvl.m, cell, pair_ratio(e11, e12, e22), e11 + e22});
    }
    return prof;
}

MdimResult estimate_martingale_dimension(const GasketLevel& lvl,
                                         const std::vector<std::vector<VertexFn>>& tuples,
                                         double threshold, double quantile) {
    require(!tuples.empty(), "martingale dimension estimate needs at least one tuple");
    const auto [h1, h2] = kusuoka_pair(lvl);
    const Eigen::VectorXd nu_cell = cell_nu_masses(lvl, h1, h2);

    int max_rank = 0;
    for (const auto& tup : tuples)
        max_rank = std::max(max_rank, static_cast<int>(tup.size()));

    std::vector<int> ranks(static_cast<std::size_t>(lvl.cells.rows()), 0);
    std::vector<double> masses(static_cast<std::size_t>(lvl.cells.rows()), 0.0);
    for (Eigen::Index cell = 0; cell < lvl.cells.rows(); ++cell) {
        masses[static_cast<std::size_t>(cell)] = nu_cell[cell];
        int best = 0;
        for (const auto& tup : tuples) {
            const Eigen::Index q = static_cast<Eigen::Index>(tup.size());
            Eigen::MatrixXd m(q, q);
            for (Eigen::Index i = 0; i < q; ++i)
                for (Eigen::Index j = i; j < q; ++j) {
                    const double e = sg_cell_energy(lvl, cell, tup[static_cast<std::size_t>(i)],
                                                   tup[static_cast<std::size_t>(j)]);
                    m(i, j) = e;
                    m(j, i) = e;
                }
            best = std::max(best, thresholded_rank(m, threshold));
        }
        ranks[static_cast<std::size_t>(cell)] = best;
    }
    return summarize_ranks(ranks, masses, max_rank, quantile);
}

MdimResult estimate_martingale_dimension(const PEnergyForm& form, const Measure& nu,
                                         const std::vector<std::vector<VertexFn>>& tuples,
                                         double threshold, double quantile) {
    require(!tuples.empty(), "martingale dimension estimate needs at least one tuple");
    const Eigen::Index nv = form.graph().vertex_count();
    require(nu.size() == nv, "martingale dimension estimate: measure has wrong length");

    int max_rank = 0;
    for (const auto& tup : tuples)
        max_rank = std::max(max_rank, static_cast<int>(tup.size()));

    std::vector<int> ranks(static_cast<std::size_t>(nv), 0);
    std::vector<double> masses(static_cast<std::size_t>(nv), 0.0);
    for (const auto& tup : tuples) {
        const Eigen::Index q = static_cast<Eigen::Index>(tup.size());
        std::vector<VertexFn> pol(static_cast<std::size_t>(q * q));
        for (Eigen::Index i = 0; i < q; ++i)
            for (Eigen::Index j = i; j < q; ++j)
                pol[static_cast<std::size_t>(i * q + j)] = form.polarized_energy_measure(
                    tup[static_cast<std::size_t>(i)], tup[static_cast<std::size_t>(j)]);
        for (Eigen::Index v = 0; v < nv; ++v) {
            Eigen::MatrixXd m(q, q);
            for (Eigen::Index i = 0; i < q; ++i)
                for (Eigen::Index j = i; j < q; ++j) {
                    const double e = pol[static_cast<std::size_t>(i * q + j)][v];
                    m(i, j) = e;
                    m(j, i) = e;
                }
            ranks[static_cast<std::size_t>(v)] =
                std::max(ranks[static_cast<std::size_t>(v)], thresholded_rank(m, threshold));
        }
    }
    for (Eigen::Index v = 0; v < nv; ++v) masses[static_cast<std::size_t>(v)] = nu[v];
    return summarize_ranks(ranks, masses, max_rank, quantile);
}

std::vector<std::vector<VertexFn>> mdim_tuples(const GasketLevel& lvl, Eigen::Index singletons,
                                               CounterRng& rng) {
    const auto [h1, h2] = kusuoka_pair(lvl);
    std::vector<std::vector<VertexFn>> tuples;
    tuples.push_back({h1, h2});
    const double two_pi = 2.0 * std::acos(-1.0);
    for (Eigen::Index s = 0; s < singletons; ++s) {
        const double phi = two_pi * rng.next_double();
        tuples.push_back({std::cos(phi) * h1 + std::sin(phi) * h2});
    }
    return tuples;
}

HolderCheck holder_bound_check(double d_h, double alpha, int estimate) {
    require(d_h > 0.0, "holder_bound_check: Hausdorff dimension must be positive");
    require(alpha > 0.0 && alpha <= 1.0, "holder_bound_check: exponent must lie in (0, 1]");
    HolderCheck out{d_h, alpha, estimate, d_h / alpha, false};
    out.pass = static_cast<double>(estimate) <= out.bound + 1e-12;
    return out;
}

double light_cell_mass(const Eigen::VectorXd& cell_masses, double fraction) {
    require(cell_masses.size() > 0, "light_cell_mass: no cells");
    require(fraction > 0.0 && fraction <= 1.0, "light_cell_mass: fraction must lie in (0, 1]");
    std::vector<double> sorted(cell_masses.data(), cell_masses.data() + cell_masses.size());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t take = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(sorted.size())));
    double light = 0.0, total = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        total += sorted[i];
        if (i < take) light += sorted[i];
    }
    require(total > 0.0, "light_cell_mass: zero total mass");
    return light / total;
}

}  // namespace eidlab
