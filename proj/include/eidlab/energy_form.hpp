#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "eidlab/grid.hpp"
#include "eidlab/measure.hpp"
#include "eidlab/metric_graph.hpp"

namespace eidlab {

// |d|^p. Multiplication for p = 2 and 3, x*sqrt(x) for p = 1.5, pow otherwise.
// The direct kernels make scaling by powers of two commute with rounding, so
// homogeneity can be asserted bit-exactly for those exponents.
double power_kernel(double d, double p);

enum class EnergyVariant { Edgewise, GridMaxCoordinate };

// p-Dirichlet energy on a metric graph with its reference measure.
// Edgewise: E_p(f) = sum_edges c_uv |f(u)-f(v)|^p.
// GridMaxCoordinate (grid graphs only): E_p(f) = sum_x mu(x) * (max_axis
// |forward difference| / h_axis)^p; axes without a forward neighbor are
// skipped in the max.
class PEnergyForm {
public:
    PEnergyForm(const MetricGraph& g, Measure mu, double p);
    static PEnergyForm grid_max(const MetricGraph& g, Measure mu, double p, GridSpec spec);

    const MetricGraph& graph() const { return *g_; }
    const Measure& reference_measure() const { return mu_; }
    double exponent() const { return p_; }
    EnergyVariant variant() const { return variant_; }
    const GridSpec& grid_spec() const;

    // Gamma_p<f> vertexwise; edgewise splits each edge half to each endpoint.
    VertexFn energy_measure_density(const VertexFn& f) const;
    Measure energy_measure(const VertexFn& f) const;
    // Total mass of the energy measure, computed as exactly that sum, so the
    // total-mass identity Gamma_p<f>(X) = E_p(f) carries zero slack.
    double p_energy(const VertexFn& f) const;

    // Signed vertex measure Gamma(f,g) = (Gamma<f+g> - Gamma<f-g>)/4.
    // Edgewise p = 2 only.
    VertexFn polarized_energy_measure(const VertexFn& f, const VertexFn& g) const;
    // Dirichlet inner product E(f,g) = sum_edges c_uv (f(u)-f(v))(g(u)-g(v)).
    // Edgewise p = 2 only.
    double energy_inner(const VertexFn& f, const VertexFn& g) const;
    // (A g)(x) = mu(x)^{-1} sum_{y~x} c_xy (g(y)-g(x)); requires mu > 0
    // everywhere. Edgewise p = 2 only.
    VertexFn generator_apply(const VertexFn& g) const;

private:
    PEnergyForm(const MetricGraph& g, Measure mu, double p, EnergyVariant v,
                std::optional<GridSpec> spec);
    void require_bilinear(const char* op) const;

    const MetricGraph* g_;
    Measure mu_;
    double p_;
    EnergyVariant variant_;
    std::optional<GridSpec> spec_;
    std::vector<std::vector<Eigen::Index>> forward_;  // grid-max: flat ids of +e_a neighbors
};

// sum_x mu(x) |f(x)|^p with the same power kernel as the energies.
double lp_norm_p(const VertexFn& f, const Measure& mu, double p);

// Cap(A) = inf { ||f||_p^p + E_p(f) : f = 1 on A and its one-step
// neighborhood }. p = 2 solves the linear stationarity system; other p run
// damped descent with backtracking to gradient norm <= grad_tol.
double capacity(const PEnergyForm& form, const VertexSet& a, double grad_tol = 1e-8);

// nu = sum_k 2^{-k} Gamma_p<b_k> / (1 + E_p(b_k)), k = 1..len(basis). Any
// choice of spanning basis yields a mutually absolutely continuous
// representative; verdicts downstream may only depend on null sets.
Measure minimal_energy_dominant(const PEnergyForm& form, const std::vector<VertexFn>& basis);

}  // namespace eidlab
