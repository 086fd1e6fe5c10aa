#include "eidlab/energy_form.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>

namespace eidlab {

double power_kernel(double d, double p) {
    d = std::abs(d);
    if (p == 2.0) return d * d;
    if (p == 3.0) return d * d * d;
    if (p == 1.5) return d * std::sqrt(d);
    return std::pow(d, p);
}

PEnergyForm::PEnergyForm(const MetricGraph& g, Measure mu, double p)
    : PEnergyForm(g, std::move(mu), p, EnergyVariant::Edgewise, std::nullopt) {}

PEnergyForm PEnergyForm::grid_max(const MetricGraph& g, Measure mu, double p, GridSpec spec) {
    spec.validate();
    require(g.has_coords(), "grid-max variant requires an embedded grid graph");
    require(spec.point_count() == g.vertex_count(),
            "grid spec does not match the graph's vertex count");
    return PEnergyForm(g, std::move(mu), p, EnergyVariant::GridMaxCoordinate, std::move(spec));
}

PEnergyForm::PEnergyForm(const MetricGraph& g, Measure mu, double p, EnergyVariant v,
                         std::optional<GridSpec> spec)
    : g_(&g), mu_(std::move(mu)), p_(p), variant_(v), spec_(std::move(spec)) {
    require(p_ > 1.0, "exponent p must exceed 1");
    require(mu_.size() == g.vertex_count(), "reference measure size mismatch");
    if (variant_ == EnergyVariant::GridMaxCoordinate) {
        const GridSpec& sp = *spec_;
        forward_.assign(static_cast<std::size_t>(g.vertex_count()), {});
        for (Eigen::Index v0 = 0; v0 < g.vertex_count(); ++v0) {
            Eigen::VectorXi idx = sp.unflatten(v0);
            auto& fwd = forward_[static_cast<std::size_t>(v0)];
            for (Eigen::Index a = 0; a < sp.dim(); ++a) {
                if (idx[a] + 1 >= sp.counts[a]) {
                    fwd.push_back(-1);
                    continue;
                }
                Eigen::VectorXi nb = idx;
                nb[a] += 1;
                fwd.push_back(sp.flatten(nb));
            }
        }
    }
}

const GridSpec& PEnergyForm::grid_spec() const {
    require(spec_.has_value(), "not a grid-max form");
    return *spec_;
}

VertexFn PEnergyForm::energy_measure_density(const VertexFn& f) const {
    require(f.size() == g_->vertex_count(), "function size mismatch");
    VertexFn out = VertexFn::Zero(g_->vertex_count());
    if (variant_ == EnergyVariant::Edgewise) {
        for (Eigen::Index x = 0; x < g_->vertex_count(); ++x) {
            auto [lo, hi] = g_->arc_range(x);
            double s = 0.0;
            for (Eigen::Index k = lo; k < hi; ++k) {
                const auto& arc = g_->arcs()[static_cast<std::size_t>(k)];
                s += 0.5 * arc.c * power_kernel(f[x] - f[arc.to], p_);
            }
            out[x] = s;
        }
        return out;
    }
    const Eigen::VectorXd h = spec_->spacing();
    for (Eigen::Index x = 0; x < g_->vertex_count(); ++x) {
        double m = 0.0;
        const auto& fwd = forward_[static_cast<std::size_t>(x)];
        for (Eigen::Index a = 0; a < spec_->dim(); ++a) {
            if (fwd[static_cast<std::size_t>(a)] < 0) continue;
            double d = std::abs(f[fwd[static_cast<std::size_t>(a)]] - f[x]) / h[a];
            if (d > m) m = d;
        }
        out[x] = mu_[x] * power_kernel(m, p_);
    }
    return out;
}

Measure PEnergyForm::energy_measure(const VertexFn& f) const {
    return Measure(energy_measure_density(f));
}

double PEnergyForm::p_energy(const VertexFn& f) const {
    return energy_measure_density(f).sum();
}

void PEnergyForm::require_bilinear(const char* op) const {
    if (p_ != 2.0)
        throw ValidationError(std::string(op) + ": unsupported exponent, p = 2 required");
    if (variant_ != EnergyVariant::Edgewise)
        throw ValidationError(std::string(op) + ": edgewise variant required");
}

VertexFn PEnergyForm::polarized_energy_measure(const VertexFn& f, const VertexFn& g) const {
    require_bilinear("polarized_energy_measure");
    require(f.size() == g.size() && f.size() == g_->vertex_count(), "function size mismatch");
    return (energy_measure_density(f + g) - energy_measure_density(f - g)) / 4.0;
}

double PEnergyForm::energy_inner(const VertexFn& f, const VertexFn& g) const {
    require_bilinear("energy_inner");
    require(f.size() == g.size() && f.size() == g_->vertex_count(), "function size mismatch");
    double s = 0.0;
    for (const Edge& e : g_->edges())
        s += e.c * (f[e.u] - f[e.v]) * (g[e.u] - g[e.v]);
    return s;
}

VertexFn PEnergyForm::generator_apply(const VertexFn& g) const {
    require_bilinear("generator_apply");
    require(g.size() == g_->vertex_count(), "function size mismatch");
    VertexFn out(g_->vertex_count());
    for (Eigen::Index x = 0; x < g_->vertex_count(); ++x) {
        if (mu_[x] <= 0.0)
            throw ValidationError("generator_apply: zero reference weight at vertex " +
                                  std::to_string(x));
        auto [lo, hi] = g_->arc_range(x);
        double s = 0.0;
        for (Eigen::Index k = lo; k < hi; ++k) {
            const auto& arc = g_->arcs()[static_cast<std::size_t>(k)];
            s += arc.c * (g[arc.to] - g[x]);
        }
        out[x] = s / mu_[x];
    }
    return out;
}

double lp_norm_p(const VertexFn& f, const Measure& mu, double p) {
    require(f.size() == mu.size(), "lp_norm_p: size mismatch");
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) s += mu[i] * power_kernel(f[i], p);
    return s;
}

namespace {

// Objective ||f||_p^p + E_p(f) with f pinned to 1 on the clamped set.
struct CapacityProblem {
    const PEnergyForm& form;
    const std::vector<Eigen::Index>& free_ids;   // position in reduced vector
    const std::vector<Eigen::Index>& vertex_pos;  // -1 when clamped

    VertexFn expand(const Eigen::VectorXd& x) const {
        VertexFn f = VertexFn::Ones(form.graph().vertex_count());
        for (std::size_t i = 0; i < free_ids.size(); ++i) f[free_ids[i]] = x[static_cast<Eigen::Index>(i)];
        return f;
    }

    double value(const Eigen::VectorXd& x) const {
        VertexFn f = expand(x);
        return lp_norm_p(f, form.reference_measure(), form.exponent()) + form.p_energy(f);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
        const double p = form.exponent();
        VertexFn f = expand(x);
        VertexFn g = VertexFn::Zero(f.size());
        const Measure& mu = form.reference_measure();
        for (Eigen::Index i = 0; i < f.size(); ++i)
            g[i] = p * mu[i] * power_kernel(f[i], p - 1.0) * (f[i] >= 0.0 ? 1.0 : -1.0);
        for (const Edge& e : form.graph().edges()) {
            double d = f[e.u] - f[e.v];
            double t = p * e.c * power_kernel(d, p - 1.0) * (d >= 0.0 ? 1.0 : -1.0);
            g[e.u] += t;
            g[e.v] -= t;
        }
        Eigen::VectorXd out(static_cast<Eigen::Index>(free_ids.size()));
        for (std::size_t i = 0; i < free_ids.size(); ++i) out[static_cast<Eigen::Index>(i)] = g[free_ids[i]];
        return out;
    }
};

double capacity_p2(const PEnergyForm& form, const std::vector<Eigen::Index>& free_ids,
                   const std::vector<Eigen::Index>& vertex_pos) {
    const Measure& mu = form.reference_measure();
    const Eigen::Index nf = static_cast<Eigen::Index>(free_ids.size());
    Eigen::SparseMatrix<double> m(nf, nf);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < nf; ++i) {
        Eigen::Index x = free_ids[static_cast<std::size_t>(i)];
        double diag = mu[x];
        auto [lo, hi] = form.graph().arc_range(x);
        for (Eigen::Index k = lo; k < hi; ++k) {
            const auto& arc = form.graph().arcs()[static_cast<std::size_t>(k)];
            diag += arc.c;
            Eigen::Index j = vertex_pos[static_cast<std::size_t>(arc.to)];
            if (j >= 0)
                trips.emplace_back(i, j, -arc.c);
            else
                rhs[i] += arc.c;  // clamped neighbor, f = 1
        }
        trips.emplace_back(i, i, diag);
    }
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericError("capacity: stationarity system factorization failed");
    Eigen::VectorXd x = solver.solve(rhs);
    CapacityProblem prob{form, free_ids, vertex_pos};
    return prob.value(x);
}

double capacity_descent(const PEnergyForm& form, const std::vector<Eigen::Index>& free_ids,
                        const std::vector<Eigen::Index>& vertex_pos, double grad_tol) {
    // Exact cyclic coordinate minimization. Each section of the objective in
    // one free coordinate is strictly convex with a monotone derivative
    //   p mu_v psi(f_v) + sum_u p c_vu psi(f_v - f_u),  psi(t) = |t|^{p-1} sgn t,
    // so bisection finds the 1d minimum to machine precision; this stays
    // robust at p < 2 where the curvature degenerates and plain gradient
    // steps stall.
    CapacityProblem prob{form, free_ids, vertex_pos};
    const MetricGraph& g = form.graph();
    const Measure& mu = form.reference_measure();
    const double p = form.exponent();
    auto psi = [p](double t) {
        return power_kernel(t, p - 1.0) * (t >= 0.0 ? 1.0 : -1.0);
    };

    VertexFn f = prob.expand(Eigen::VectorXd::Constant(
        static_cast<Eigen::Index>(free_ids.size()), 0.5));
    const long max_sweeps = 20000;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        for (Eigen::Index v : free_ids) {
            auto [lo_arc, hi_arc] = g.arc_range(v);
            double lo = 0.0, hi = 0.0;
            for (Eigen::Index k = lo_arc; k < hi_arc; ++k) {
                double fu = f[g.arcs()[static_cast<std::size_t>(k)].to];
                lo = std::min(lo, fu);
                hi = std::max(hi, fu);
            }
            auto slope = [&](double t) {
                double s = mu[v] * psi(t);
                for (Eigen::Index k = lo_arc; k < hi_arc; ++k) {
                    const auto& arc = g.arcs()[static_cast<std::size_t>(k)];
                    s += arc.c * psi(t - f[arc.to]);
                }
                return s;
            };
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                if (slope(mid) >= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            f[v] = 0.5 * (lo + hi);
        }
        Eigen::VectorXd x(static_cast<Eigen::Index>(free_ids.size()));
        for (std::size_t i = 0; i < free_ids.size(); ++i)
            x[static_cast<Eigen::Index>(i)] = f[free_ids[i]];
        if (prob.gradient(x).norm() <= grad_tol) return prob.value(x);
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(free_ids.size()));
    for (std::size_t i = 0; i < free_ids.size(); ++i)
        x[static_cast<Eigen::Index>(i)] = f[free_ids[i]];
    double residual = prob.gradient(x).norm();
    if (residual <= grad_tol) return prob.value(x);
    throw NumericError("capacity: descent did not converge, gradient norm " +
                       std::to_string(residual));
}

}  // namespace

double capacity(const PEnergyForm& form, const VertexSet& a, double grad_tol) {
    require(a.size() == form.graph().vertex_count(), "capacity: set size mismatch");
    require(a.count() > 0, "capacity: set must be nonempty");
    std::vector<Eigen::Index> clamped = form.graph().closed_neighborhood(a.indices());
    std::vector<Eigen::Index> vertex_pos(
        static_cast<std::size_t>(form.graph().vertex_count()), 0);
    for (Eigen::Index v : clamped) vertex_pos[static_cast<std::size_t>(v)] = -1;
    std::vector<Eigen::Index> free_ids;
    for (Eigen::Index v = 0; v < form.graph().vertex_count(); ++v)
        if (vertex_pos[static_cast<std::size_t>(v)] == 0) {
            vertex_pos[static_cast<std::size_t>(v)] =
                static_cast<Eigen::Index>(free_ids.size());
            free_ids.push_back(v);
        }
    if (free_ids.empty()) return form.reference_measure().total();
    if (form.exponent() == 2.0 && form.variant() == EnergyVariant::Edgewise)
        return capacity_p2(form, free_ids, vertex_pos);
    return capacity_descent(form, free_ids, vertex_pos, grad_tol);
}

Measure minimal_energy_dominant(const PEnergyForm& form, const std::vector<VertexFn>& basis) {
    require(!basis.empty(), "minimal_energy_dominant: empty basis");
    VertexFn nu = VertexFn::Zero(form.graph().vertex_count());
    double w = 1.0;
    for (const VertexFn& b : basis) {
        w *= 0.5;
        VertexFn gb = form.energy_measure_density(b);
        nu += (w / (1.0 + gb.sum())) * gb;
    }
    return Measure(nu);
}

}  // namespace eidlab
