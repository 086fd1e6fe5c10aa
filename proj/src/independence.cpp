#include "eidlab/independence.hpp"

#include <cmath>

namespace eidlab {

LatticeInfimum lattice_infimum(const PEnergyForm& form, const std::vector<VertexFn>& phi,
                               const SphereSampler& sampler) {
    const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
    const Eigen::Index nv = form.graph().vertex_count();
    require(n >= 1, "lattice_infimum: empty tuple");
    require(sampler.dim() == n || n == 1, "lattice_infimum: sampler dimension mismatch");

    VertexFn lambda = VertexFn::Zero(nv);
    for (const VertexFn& c : phi) lambda += form.energy_measure_density(c);

    auto mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(nv, false).eval();
    for (Eigen::Index v = 0; v < nv; ++v) mask[v] = lambda[v] > 0.0;

    VertexFn value = VertexFn::Zero(nv);
    if (n == 1) {
        // Lambda_phi = Gamma<phi_1>, so the density ratio is identically 1.
        for (Eigen::Index v = 0; v < nv; ++v)
            if (mask[v]) value[v] = 1.0;
        return {value, VertexSet(mask), lambda};
    }

    bool first = true;
    for (const Eigen::VectorXd& lam : sampler.directions()) {
        VertexFn f = VertexFn::Zero(nv);
        for (Eigen::Index i = 0; i < n; ++i) f += lam[i] * phi[static_cast<std::size_t>(i)];
        VertexFn dens = form.energy_measure_density(f);
        for (Eigen::Index v = 0; v < nv; ++v) {
            if (!mask[v]) continue;
            double r = dens[v] / lambda[v];
            if (first || r < value[v]) value[v] = r;
        }
        first = false;
    }
    return {value, VertexSet(mask), lambda};
}

IndependenceDecomposition independence_decomposition(const PEnergyForm& form,
                                                     const std::vector<VertexFn>& phi,
                                                     const VertexSet& a,
                                                     const SphereSampler& sampler, long i_max) {
    const Eigen::Index nv = form.graph().vertex_count();
    require(a.size() == nv, "independence_decomposition: set size mismatch");
    require(i_max >= 1, "independence_decomposition: i_max must be positive");

    LatticeInfimum inf = lattice_infimum(form, phi, sampler);
    const double floor = sampler.resolution_bound();

    IndependenceDecomposition out;
    out.covered = VertexSet::empty(nv);
    auto covered = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(nv, false).eval();
    for (long i = 1; i <= i_max; ++i) {
        auto m = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(nv, false).eval();
        bool grew = false;
        for (Eigen::Index v = 0; v < nv; ++v) {
            if (!a.contains(v) || !inf.domain.contains(v)) continue;
            double g = inf.value[v] <= floor ? 0.0 : inf.value[v];
            if (g > 1.0 / static_cast<double>(i)) {
                m[v] = true;
                if (!covered[v]) grew = true;
            }
        }
        if (grew) {
            out.parts.push_back({i, VertexSet(m)});
            covered = covered || m;
        }
    }
    out.covered = VertexSet(covered);
    double residual = 0.0;
    for (Eigen::Index v = 0; v < nv; ++v)
        if (a.contains(v) && !covered[v]) residual += inf.lambda_density[v];
    out.residual_mass = residual;
    out.independent = residual == 0.0;
    return out;
}

DetEquivalenceReport det_equivalence_check(const PEnergyForm& form,
                                           const std::vector<VertexFn>& phi, const Measure& nu,
                                           const VertexSet& a, const SphereSampler& sampler) {
    const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
    const Eigen::Index nv = form.graph().vertex_count();
    require(a.size() == nv, "det_equivalence_check: set size mismatch");

    CdcMatrixField field = cdc_matrix(form, phi, nu);
    LatticeInfimum inf = lattice_infimum(form, phi, sampler);
    const double res = sampler.resolution_bound();

    DetEquivalenceReport rep;
    auto ind = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(nv, false).eval();
    rep.routes_agree = true;
    rep.null_sets_match = true;

    for (Eigen::Index v = 0; v < nv; ++v) {
        if (!a.contains(v)) continue;
        DetEquivalenceRow row;
        row.vertex = v;
        if (!field.domain.contains(v) || field.trace(v) <= 0.0) {
            row.trace = field.domain.contains(v) ? field.trace(v) : 0.0;
            row.det = 0.0;
            row.sigma1 = 0.0;
            row.lattice_inf = 0.0;
            row.verdict = "excluded";
            rep.rows.push_back(row);
            continue;
        }
        row.trace = field.trace(v);
        row.det = field.det(v);
        row.sigma1 = field.sigma1(v);
        row.lattice_inf = inf.domain.contains(v) ? inf.value[v] : 0.0;

        bool by_det = row.det > 1e-10 * std::pow(row.trace, static_cast<double>(n));
        bool by_inf = row.lattice_inf > res;
        if (by_det != by_inf) {
            // The normalized smallest eigenvalue decides whether the vertex is
            // genuinely borderline: between the determinant threshold and the
            // sampler resolution the two routes may legitimately differ.
            double s = row.sigma1 / row.trace;
            bool borderline = s >= 0.5e-10 && s <= 2.0 * res;
            if (!borderline) {
                rep.routes_agree = false;
                throw NumericError(
                    "det_equivalence_check: route disagreement at vertex " + std::to_string(v) +
                    " (det route " + (by_det ? "independent" : "degenerate") + ", sampled route " +
                    (by_inf ? "independent" : "degenerate") + ", sigma1/trace " +
                    std::to_string(s) + ")");
            }
        }
        if (by_det) ind[v] = true;
        row.verdict = by_det ? "independent" : "degenerate";
        rep.rows.push_back(row);
    }
    rep.independence_set = VertexSet(ind);

    // On I_phi both nu and Lambda_phi must charge every vertex: the matrix is
    // only defined where nu > 0 and a positive trace forces Lambda_phi > 0.
    for (Eigen::Index v = 0; v < nv; ++v)
        if (ind[v] && !(nu[v] > 0.0 && inf.lambda_density[v] > 0.0)) rep.null_sets_match = false;
    return rep;
}

}  // namespace eidlab
