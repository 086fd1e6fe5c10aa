#include "eidlab/pushforward.hpp"

#include <cmath>

#include "eidlab/independence.hpp"

namespace eidlab {

BinnedMeasure pushforward(const std::vector<VertexFn>& phi, const Measure& w,
                          const VertexSet& a, double h, const Eigen::VectorXd& origin) {
    const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
    require(n >= 1, "pushforward: empty tuple");
    const Eigen::Index nv = phi.front().size();
    require(w.size() == nv && a.size() == nv, "pushforward: size mismatch");
    for (const VertexFn& c : phi) require(c.size() == nv, "pushforward: tuple size mismatch");

    BinnedMeasure bm(n, h, origin.size() ? origin : Eigen::VectorXd::Zero(n));
    Eigen::VectorXd y(n);
    for (Eigen::Index v = 0; v < nv; ++v) {
        if (!a.contains(v) || w[v] == 0.0) continue;
        for (Eigen::Index i = 0; i < n; ++i) y[i] = phi[static_cast<std::size_t>(i)][v];
        bm.add(y, w[v]);
    }
    return bm;
}

std::vector<std::pair<double, double>> singular_mass_profile(
    const std::vector<VertexFn>& phi, const Measure& w, const VertexSet& a,
    const std::vector<double>& ladder, double density_cap, const Eigen::VectorXd& origin) {
    require(!ladder.empty(), "singular_mass_profile: empty ladder");
    require(density_cap > 0.0, "singular_mass_profile: density cap must be positive");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        require(ladder[i] < ladder[i - 1], "singular_mass_profile: ladder must strictly decrease");
    std::vector<std::pair<double, double>> out;
    out.reserve(ladder.size());
    for (double h : ladder) {
        BinnedMeasure bm = pushforward(phi, w, a, h, origin);
        out.emplace_back(h, bm.excess_over(density_cap));
    }
    return out;
}

EidReport eid_experiment(const std::vector<EidStage>& stages, const EidConfig& config) {
    require(!stages.empty(), "eid_experiment: no stages");
    bool all_specs = true;
    for (const EidStage& st : stages) all_specs = all_specs && st.spec.has_value();
    for (std::size_t i = 1; i < stages.size(); ++i) {
        require(stages[i].mesh < stages[i - 1].mesh,
                "eid_experiment: meshes must strictly decrease");
        if (all_specs)
            require(is_nested_refinement(*stages[i - 1].spec, *stages[i].spec),
                    "eid_experiment: refinement sequence is not nested");
    }

    EidReport rep;
    rep.degenerate = false;
    std::vector<double> s_vals, totals;
    for (const EidStage& st : stages) {
        Measure lambda = Measure([&] {
            VertexFn d = VertexFn::Zero(st.form.graph().vertex_count());
            for (const VertexFn& c : st.phi) d += st.form.energy_measure_density(c);
            return d;
        }());

        VertexSet used = st.a;
        if (config.sampler) {
            IndependenceDecomposition dec = independence_decomposition(
                st.form, st.phi, st.a, *config.sampler, config.i_max);
            if (dec.covered.count() == 0)
                rep.degenerate = true;
            else
                used = dec.covered;
        }

        double h = config.h_factor * std::sqrt(st.mesh);
        BinnedMeasure bm = pushforward(st.phi, lambda, used, h);
        double total = bm.total();
        double s = bm.excess_over(config.density_cap);
        s_vals.push_back(s);
        totals.push_back(total);
        rep.rows.push_back({st.mesh, h, config.density_cap, s, total, ""});
    }

    bool decreasing = s_vals.size() >= 2;
    for (std::size_t i = 1; i < s_vals.size(); ++i) {
        double prev = s_vals[i - 1], cur = s_vals[i];
        double tiny = 1e-12 * std::max(totals[i - 1], totals[i]);
        bool step_ok = (prev <= tiny && cur <= tiny) ||
                       (prev > tiny && cur <= (1.0 - config.min_decrease) * prev);
        decreasing = decreasing && step_ok;
    }
    bool floored = true;
    for (std::size_t i = 0; i < s_vals.size(); ++i)
        floored = floored && s_vals[i] >= config.singular_floor * totals[i];

    if (floored)
        rep.verdict = "singular";
    else if (decreasing && !rep.degenerate)
        rep.verdict = "consistent-with-EID";
    else
        rep.verdict = "inconclusive";
    for (auto& row : rep.rows) row.verdict = rep.verdict;
    return rep;
}

}  // namespace eidlab
