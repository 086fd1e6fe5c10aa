#include "eidlab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "eidlab/error.hpp"
#include "eidlab/pl_maxmin.hpp"
#include "eidlab/random_inputs.hpp"

namespace eidlab {

namespace {

constexpr double kIneqTol = 1e-9;

// lambda values whose kernel scaling commutes with rounding for this
// exponent; |lambda| = 1 and 0 are exact for every p.
std::vector<double> exact_lambdas(double p) {
    if (p == 2.0 || p == 3.0) return {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
    if (p == 1.5) return {0.0, 1.0, -1.0, 4.0, -4.0, 0.25, -0.25};
    return {0.0, 1.0, -1.0};
}

double rel_excess(double lhs, double rhs) {
    const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return (lhs - rhs) / denom;
}

double set_sum(const VertexFn& density, const VertexSet& a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < density.size(); ++i)
        if (a.contains(i)) s += density[i];
    return s;
}

// Random piecewise-linear scalar function, anchored so g(0) = 0, with exact
// per-window Lipschitz constants.
struct Pl1D {
    std::vector<double> knots;
    std::vector<double> vals;

    static Pl1D random(double lo, double hi, CounterRng& rng) {
        lo = std::min(lo, 0.0) - 0.1;
        hi = std::max(hi, 0.0) + 0.1;
        const int nseg = 6;
        Pl1D g;
        for (int j = 0; j <= nseg; ++j)
            g.knots.push_back(lo + (hi - lo) * static_cast<double>(j) / nseg);
        g.vals.assign(g.knots.size(), 0.0);
        for (int j = 0; j < nseg; ++j) {
            const double slope = rng.uniform(-2.0, 2.0);
            g.vals[static_cast<std::size_t>(j) + 1] =
                g.vals[static_cast<std::size_t>(j)] +
                slope * (g.knots[static_cast<std::size_t>(j) + 1] -
                         g.knots[static_cast<std::size_t>(j)]);
        }
        const double at0 = g.eval_raw(0.0);
        for (double& v : g.vals) v -= at0;
        return g;
    }

    double eval_raw(double t) const {
        std::size_t j = 0;
        while (j + 2 < knots.size() && t > knots[j + 1]) ++j;
        const double w = (t - knots[j]) / (knots[j + 1] - knots[j]);
        return vals[j] + w * (vals[j + 1] - vals[j]);
    }
    double operator()(double t) const { return eval_raw(t); }

    // Largest |slope| over segments meeting [lo, hi] (closed overlap).
    double window_lip(double lo, double hi) const {
        double best = 0.0;
        for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
            if (knots[j + 1] < lo || knots[j] > hi) continue;
            best = std::max(best, std::abs((vals[j + 1] - vals[j]) / (knots[j + 1] - knots[j])));
        }
        return best;
    }
};

// Per-vertex window of f over the closed one-step neighborhood.
void vertex_windows(const MetricGraph& g, const VertexFn& f, VertexFn& lo, VertexFn& hi) {
    lo = f;
    hi = f;
    for (Eigen::Index v = 0; v < g.vertex_count(); ++v) {
        const auto [s, e] = g.arc_range(v);
        for (Eigen::Index k = s; k < e; ++k) {
            lo[v] = std::min(lo[v], f[g.arcs()[static_cast<std::size_t>(k)].to]);
            hi[v] = std::max(hi[v], f[g.arcs()[static_cast<std::size_t>(k)].to]);
        }
    }
}

AxiomRow row_homogeneity(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"homogeneity", trials, 0.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    const std::vector<double> exact = exact_lambdas(form.exponent());
    bool exact_ok = true;
    for (long t = 0; t < trials; ++t) {
        const VertexFn f = random_vertex_fn(nv, rng);
        const VertexFn base = form.energy_measure_density(f);
        const double lam_exact = exact[static_cast<std::size_t>(
            rng.next_below(static_cast<std::uint64_t>(exact.size())))];
        const double scale = power_kernel(lam_exact, form.exponent());
        const VertexFn lhs = form.energy_measure_density(lam_exact * f);
        for (Eigen::Index i = 0; i < nv; ++i)
            if (lhs[i] != scale * base[i]) exact_ok = false;

        const double lam = rng.uniform(-3.0, 3.0);
        const VertexFn lhs2 = form.energy_measure_density(lam * f);
        const double s2 = power_kernel(lam, form.exponent());
        for (Eigen::Index i = 0; i < nv; ++i)
            row.worst_slack = std::max(row.worst_slack,
                                       std::abs(rel_excess(lhs2[i], s2 * base[i])));
    }
    row.pass = exact_ok && row.worst_slack <= kIneqTol;
    if (!exact_ok) row.worst_slack = std::max(row.worst_slack, 1.0);
    return row;
}

AxiomRow row_total_mass(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"total-mass", trials, 0.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    bool ok = true;
    for (long t = 0; t < trials; ++t) {
        const VertexFn f = random_vertex_fn(nv, rng);
        const double total = form.energy_measure_density(f).sum();
        if (total != form.p_energy(f)) {
            ok = false;
            row.worst_slack = std::max(row.worst_slack,
                                       std::abs(rel_excess(total, form.p_energy(f))));
        }
    }
    row.pass = ok;
    return row;
}

AxiomRow row_sublinearity(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"sublinearity", trials, -1.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    const double inv_p = 1.0 / form.exponent();
    for (long t = 0; t < trials; ++t) {
        const VertexFn f = random_vertex_fn(nv, rng);
        const VertexFn g = random_vertex_fn(nv, rng);
        const VertexSet a = random_subset(nv, rng);
        const double lhs = std::pow(set_sum(form.energy_measure_density(f + g), a), inv_p);
        const double rhs = std::pow(set_sum(form.energy_measure_density(f), a), inv_p) +
                           std::pow(set_sum(form.energy_measure_density(g), a), inv_p);
        row.worst_slack = std::max(row.worst_slack, rel_excess(lhs, rhs));
    }
    row.pass = row.worst_slack <= kIneqTol;
    return row;
}

AxiomRow row_chain_rule(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"chain-rule", trials, -1.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    const double p = form.exponent();
    for (long t = 0; t < trials; ++t) {
        const VertexFn f = random_vertex_fn(nv, rng);
        const Pl1D g = Pl1D::random(f.minCoeff(), f.maxCoeff(), rng);
        VertexFn gf(nv);
        for (Eigen::Index i = 0; i < nv; ++i) gf[i] = g(f[i]);
        const VertexFn lhs = form.energy_measure_density(gf);
        const VertexFn base = form.energy_measure_density(f);
        VertexFn wlo, whi;
        vertex_windows(form.graph(), f, wlo, whi);
        for (Eigen::Index i = 0; i < nv; ++i) {
            const double lip = g.window_lip(wlo[i], whi[i]);
            row.worst_slack =
                std::max(row.worst_slack, rel_excess(lhs[i], power_kernel(lip, p) * base[i]));
        }
    }
    row.pass = row.worst_slack <= kIneqTol;
    return row;
}

AxiomRow row_contraction(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"contraction", trials, -1.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    const double p = form.exponent();
    for (long t = 0; t < trials; ++t) {
        const int n = (t % 2 == 0) ? 2 : 3;
        const double cn = std::max(1.0, std::pow(static_cast<double>(n), (p - 2.0) / 2.0));
        std::vector<VertexFn> f;
        VertexFn gamma_sum = VertexFn::Zero(nv);
        for (int i = 0; i < n; ++i) {
            f.push_back(random_vertex_fn(nv, rng));
            gamma_sum += form.energy_measure_density(f.back());
        }

        // Max-min contraction with Lipschitz constant 1.7.
        const double lip = 1.7;
        const int samples = 5;
        Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(samples, n);
        for (int j = 1; j < samples; ++j)
            for (int i = 0; i < n; ++i) pts(j, i) = rng.uniform(-2.0, 2.0);
        Eigen::VectorXd anchor(n);
        for (int i = 0; i < n; ++i) anchor[i] = rng.uniform(-1.0, 1.0);
        Eigen::VectorXd vals(samples);
        for (int j = 0; j < samples; ++j)
            vals[j] = lip * (pts.row(j).transpose() - anchor).norm();
        const PlMaxMin g(pts, vals, lip);
        VertexFn gf(nv);
        Eigen::VectorXd arg(n);
        for (Eigen::Index x = 0; x < nv; ++x) {
            for (int i = 0; i < n; ++i) arg[i] = f[static_cast<std::size_t>(i)][x];
            gf[x] = g(arg);
        }
        const VertexFn lhs = form.energy_measure_density(gf);
        for (Eigen::Index x = 0; x < nv; ++x)
            row.worst_slack = std::max(
                row.worst_slack, rel_excess(lhs[x], cn * power_kernel(lip, p) * gamma_sum[x]));

        // Linear contraction via the conjugate-exponent bound.
        Eigen::VectorXd lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-1.5, 1.5);
        const double q = p / (p - 1.0);
        double lam_q = 0.0;
        for (int i = 0; i < n; ++i) lam_q += std::pow(std::abs(lam[i]), q);
        lam_q = std::pow(lam_q, 1.0 / q);
        VertexFn lin = VertexFn::Zero(nv);
        for (int i = 0; i < n; ++i) lin += lam[i] * f[static_cast<std::size_t>(i)];
        const VertexFn lhs2 = form.energy_measure_density(lin);
        for (Eigen::Index x = 0; x < nv; ++x)
            row.worst_slack = std::max(
                row.worst_slack, rel_excess(lhs2[x], power_kernel(lam_q, p) * gamma_sum[x]));
    }
    row.pass = row.worst_slack <= kIneqTol;
    return row;
}

AxiomRow row_locality(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"locality", trials, 0.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    bool ok = true;
    for (long t = 0; t < trials; ++t) {
        const VertexSet a = random_nonempty_subset(nv, rng);
        const std::vector<Eigen::Index> nb = form.graph().closed_neighborhood(a.indices());

        VertexFn f = random_vertex_fn(nv, rng);
        const double c = rng.uniform(-2.0, 2.0);
        for (Eigen::Index v : nb) f[v] = c;
        const double on_a = set_sum(form.energy_measure_density(f), a);
        if (on_a != 0.0) {
            ok = false;
            row.worst_slack = std::max(row.worst_slack, std::abs(on_a));
        }

        VertexFn u = random_vertex_fn(nv, rng);
        VertexFn w = random_vertex_fn(nv, rng);
        for (Eigen::Index v : nb) w[v] = u[v];
        const VertexFn du = form.energy_measure_density(u);
        const VertexFn dw = form.energy_measure_density(w);
        for (Eigen::Index v = 0; v < nv; ++v)
            if (a.contains(v) && du[v] != dw[v]) {
                ok = false;
                row.worst_slack = std::max(row.worst_slack, std::abs(rel_excess(du[v], dw[v])));
            }
    }
    row.pass = ok;
    return row;
}

AxiomRow row_lsc(const PEnergyForm& form, long trials, CounterRng& rng) {
    AxiomRow row{"lower-semicontinuity", trials, -1.0, false};
    const Eigen::Index nv = form.graph().vertex_count();
    for (long t = 0; t < trials; ++t) {
        const VertexFn f = random_vertex_fn(nv, rng);
        const VertexFn g = random_vertex_fn(nv, rng);
        const VertexSet a = random_nonempty_subset(nv, rng);
        const double target = set_sum(form.energy_measure_density(f), a);
        const double scale = 1e-4 * (1.0 + f.cwiseAbs().maxCoeff());
        double liminf = std::numeric_limits<double>::infinity();
        for (int i = 13; i <= 16; ++i) {
            const VertexFn fi = f + scale * std::ldexp(1.0, -2 * i) * g;
            liminf = std::min(liminf, set_sum(form.energy_measure_density(fi), a));
        }
        row.worst_slack = std::max(row.worst_slack, rel_excess(target, liminf));
    }
    row.pass = row.worst_slack <= kIneqTol;
    return row;
}

}  // namespace

AxiomReport check_axioms(const PEnergyForm& form, long trials, CounterRng& rng) {
    require(trials >= 1, "check_axioms: trials must be positive");
    AxiomReport rep;
    rep.rows.push_back(row_homogeneity(form, trials, rng));
    rep.rows.push_back(row_total_mass(form, trials, rng));
    rep.rows.push_back(row_sublinearity(form, trials, rng));
    rep.rows.push_back(row_chain_rule(form, trials, rng));
    rep.rows.push_back(row_contraction(form, trials, rng));
    rep.rows.push_back(row_locality(form, trials, rng));
    rep.rows.push_back(row_lsc(form, trials, rng));
    rep.all_pass = true;
    for (const AxiomRow& r : rep.rows) rep.all_pass = rep.all_pass && r.pass;
    return rep;
}

AxiomReport merge_reports(const std::vector<AxiomReport>& parts) {
    require(!parts.empty(), "merge_reports: nothing to merge");
    std::vector<std::string> order;
    std::map<std::string, AxiomRow> pooled;
    for (const AxiomReport& part : parts)
        for (const AxiomRow& r : part.rows) {
            auto it = pooled.find(r.axiom);
            if (it == pooled.end()) {
                pooled[r.axiom] = r;
                order.push_back(r.axiom);
            } else {
                it->second.trials += r.trials;
                it->second.worst_slack = std::max(it->second.worst_slack, r.worst_slack);
                it->second.pass = it->second.pass && r.pass;
            }
        }
    AxiomReport out;
    out.all_pass = true;
    for (const std::string& name : order) {
        out.rows.push_back(pooled[name]);
        out.all_pass = out.all_pass && pooled[name].pass;
    }
    return out;
}

}  // namespace eidlab
