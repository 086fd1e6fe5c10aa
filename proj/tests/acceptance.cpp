// Acceptance gate: one criterion per line, exit code = number of failures.
// Run with no arguments for the full battery or with a single criterion
// number (1..9) to run just that one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eidlab/cone.hpp"
#include "eidlab/csv.hpp"
#include "eidlab/error.hpp"
#include "eidlab/experiments.hpp"
#include "eidlab/gasket.hpp"
#include "eidlab/grid.hpp"
#include "eidlab/lipschitz.hpp"
#include "eidlab/preiss.hpp"
#include "eidlab/pushforward.hpp"
#include "eidlab/rng.hpp"
#include "eidlab/small_sym_eig.hpp"
#include "eidlab/sphere.hpp"

using namespace eidlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

// --- criterion 1: axiom battery ---------------------------------------------

Outcome criterion_axioms() {
    AxiomReport rep = axioms_sweep(1000, 12, 40, 25, 1);
    double worst = 0.0;
    long min_trials = -1;
    for (const auto& row : rep.rows) {
        worst = std::max(worst, row.worst_slack);
        min_trials = min_trials < 0 ? row.trials : std::min(min_trials, row.trials);
    }
    Outcome out;
    out.pass = rep.all_pass && min_trials >= 1000;
    out.detail = std::to_string(rep.rows.size()) + " axioms, >=" +
                 std::to_string(min_trials) + " trials each, worst slack " +
                 fmt("%.1e", worst);
    return out;
}

// --- criterion 2: generator and boundary identities -------------------------

Outcome criterion_identities() {
    double gap = currents_identity_worst_gap(100, 50, 2);
    Outcome out;
    out.pass = gap <= 1e-8;
    out.detail = "worst relative gap " + fmt("%.1e", gap) + " over 100 graphs";
    return out;
}

// --- criterion 3: scalar pushforward diagnostics -----------------------------

Outcome criterion_scalar() {
    ScalarBinwise bw = scalar_binwise_check(4096);
    CantorCheck cc = cantor_neighborhood_check(8);
    Outcome out;
    out.pass = bw.worst_rel_error <= 0.05 && cc.pass;
    out.detail = "binwise " + fmt("%.2f%%", 100.0 * bw.worst_rel_error) + ", cantor ratios " +
                 fmt("%.3f", *std::min_element(cc.ratios.begin(), cc.ratios.end())) + ".." +
                 fmt("%.3f", *std::max_element(cc.ratios.begin(), cc.ratios.end())) +
                 ", spread " + fmt("%.3f", cc.spread);
    return out;
}

// --- criterion 4: planar refinement verdicts --------------------------------

Outcome criterion_planar() {
    const std::vector<Eigen::Index> counts{65, 129, 257};
    SphereSampler sampler(2, 256);

    PlanarEidData clean = make_planar_eid_data(counts, false);
    EidConfig ec;
    ec.h_factor = planar_bin_factor();
    ec.density_cap = clean.density_cap;
    ec.sampler = &sampler;
    EidReport good = eid_experiment(clean.stages, ec);

    PlanarEidData dup = make_planar_eid_data(counts, true);
    ec.density_cap = dup.density_cap;
    EidReport degen = eid_experiment(dup.stages, ec);

    bool floor_ok = true;
    double min_frac = 1.0;
    for (const auto& row : degen.rows) {
        double frac = row.total_mass > 0.0 ? row.singular_mass / row.total_mass : 0.0;
        min_frac = std::min(min_frac, frac);
        floor_ok = floor_ok && row.singular_mass >= 0.5 * row.total_mass;
    }

    Outcome out;
    out.pass = good.verdict == "consistent-with-EID" && !good.degenerate &&
               degen.verdict == "singular" && degen.degenerate && floor_ok;
    out.detail = "independent " + good.verdict + ", duplicated " + degen.verdict +
                 " with floor " + fmt("%.3f", min_frac);
    return out;
}

// --- criterion 5: lipschitz approximation on the big grid -------------------

double slab_distance(const Eigen::VectorXd& x) {
    return std::max(0.0, std::abs(x[0] - 0.5) - 0.1);
}

Outcome criterion_approx() {
    const Eigen::Index n = 513;
    GridSpec spec = make_grid_cube(2, 0.0, 1.0, n, Stencil::King);
    const double radius = std::sqrt(2.0) + spec.min_spacing();
    GridField f = make_grid_field(spec, [](const Eigen::VectorXd& x) { return x[0]; });

    // Saturated slowdown returns the target itself.
    GridField ones = make_grid_field(spec, [](const Eigen::VectorXd&) { return 1.0; });
    GridField sat = variational_approx(f, ones, radius);
    double sat_err = 0.0;
    for (Eigen::Index v = 0; v < spec.point_count(); ++v)
        sat_err = std::max(sat_err, std::abs(sat[v] - f[v]));

    // Independent one-dimensional oracle.
    GridSpec line = make_grid_1d(0.0, 1.0, n);
    CounterRng rng(3);
    GridField gl{line, Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) gl.values[i] = rng.uniform(0.3, 1.2);
    GridField fl = make_grid_field(line, [](const Eigen::VectorXd& x) { return x[0]; });
    GridField fil = variational_approx(fl, gl, 2.0);
    double h1d = line.spacing()[0];
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 1; i < n; ++i)
        prefix[i] = prefix[i - 1] + h1d * 0.5 * (gl[i - 1] + gl[i]);
    double oracle_err = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
        double best = fl[x];
        for (Eigen::Index s = 0; s < n; ++s)
            best = std::min(best, fl[s] + std::abs(prefix[x] - prefix[s]));
        oracle_err = std::max(oracle_err, std::abs(fil[x] - best));
    }

    // Slab cap: the approximation is eps-slow inside the slab up to the
    // stencil anisotropy of the path metric.
    const double eps = 0.05;
    GridField g0 = make_grid_field(spec, [eps](const Eigen::VectorXd& x) {
        return std::min(1.0, eps + slab_distance(x));
    });
    GridField f0 = variational_approx(f, g0, radius);
    const double cap = eps * (1.0 + stencil_anisotropy(Stencil::King, 2));
    double slab_lip = 0.0;
    std::vector<Eigen::Index> slab_pts;
    for (Eigen::Index v = 0; v < spec.point_count(); v += 1) {
        Eigen::VectorXi idx = spec.unflatten(v);
        if (idx[0] % 8 != 0 || idx[1] % 8 != 0) continue;
        if (slab_distance(spec.point(v)) == 0.0) slab_pts.push_back(v);
    }
    for (std::size_t a = 0; a < slab_pts.size(); ++a) {
        Eigen::VectorXd pa = spec.point(slab_pts[a]);
        for (std::size_t b = a + 1; b < slab_pts.size(); ++b) {
            Eigen::VectorXd pb = spec.point(slab_pts[b]);
            double d = (pa - pb).norm();
            if (d > 0.0)
                slab_lip = std::max(slab_lip, std::abs(f0[slab_pts[a]] - f0[slab_pts[b]]) / d);
        }
    }

    // Monotone five-rung ladder.
    std::vector<GridField> ladder;
    for (int i = 0; i < 5; ++i) {
        double scale = std::pow(2.0, i);
        ladder.push_back(make_grid_field(spec, [eps, scale](const Eigen::VectorXd& x) {
            return std::min(1.0, eps + scale * slab_distance(x));
        }));
    }
    auto rows = variational_ladder(f, ladder, radius);
    bool ladder_ok = rows.size() == 5;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ladder_ok = ladder_ok && rows[i].lip_bound_slack <= 1e-9;
        if (i > 0) ladder_ok = ladder_ok && rows[i].sup_gap <= rows[i - 1].sup_gap + 1e-12;
    }

    Outcome out;
    out.pass = sat_err <= 1e-12 && oracle_err <= 1e-10 && slab_lip <= cap && ladder_ok;
    out.detail = "saturated err " + fmt("%.1e", sat_err) + ", 1d oracle err " +
                 fmt("%.1e", oracle_err) + ", slab lip " + fmt("%.4f", slab_lip) + " vs cap " +
                 fmt("%.4f", cap) + ", ladder gap " + fmt("%.4f", rows.front().sup_gap) + "->" +
                 fmt("%.4f", rows.back().sup_gap);
    return out;
}

// --- criterion 6: cone-null corpus ------------------------------------------

Outcome criterion_cones() {
    CounterRng rng(6);
    double total_bad = 0.0;
    long curves_run = 0;
    for (const ConeNullExample& ex : cone_null_corpus()) {
        std::vector<Polyline> curves;
        CounterRng sub = rng.fork(static_cast<std::uint64_t>(curves_run + 17));
        for (long t = 0; t < 1000; ++t)
            curves.push_back(random_stencil_polyline(ex.spec, 200, sub));
        for (double b : cone_null_violation(ex.membership, ex.cone, curves)) total_bad += b;
        curves_run += 1000;
    }

    ConeNullExample lip = corpus_lipschitz_graph();
    auto grad = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd g(x.size());
        g.setZero();
        g[1] = 1.0;
        return g;
    };
    GridField ug = cone_upper_gradient(lip.spec, grad, lip.membership, lip.cone, 720);
    const double predicted = std::cos(lip.cone.theta);
    double ug_err = 0.0;
    for (Eigen::Index v = 0; v < lip.spec.point_count(); ++v) {
        double expected = lip.membership(lip.spec.point(v)) ? predicted : 1.0;
        ug_err = std::max(ug_err, std::abs(ug[v] - expected));
    }

    Outcome out;
    out.pass = total_bad == 0.0 && ug_err <= 1e-3;
    out.detail = std::to_string(curves_run) + " curves, violation " + fmt("%.1f", total_bad) +
                 ", upper-gradient err " + fmt("%.1e", ug_err);
    return out;
}

// --- criterion 7: flattening caps -------------------------------------------

Outcome criterion_preiss() {
    const Eigen::Index count = 321;
    const double slope_cap = 2.0 / 3.0 + 0.05;
    const double lip_cap = std::sqrt(2.0) + 0.05;

    PreissInput in = make_preiss_input(count, false);
    std::vector<PreissStep> steps = preiss_sequence(in, {2.0, 4.0, 8.0});
    double mu_total = in.mu_weights.sum();
    bool caps = true;
    double worst_d1 = 0.0, worst_lip = 0.0;
    for (const PreissStep& st : steps) {
        caps = caps && st.max_abs_d1_on_k <= slope_cap && st.flatten_lip_global <= lip_cap;
        worst_d1 = std::max(worst_d1, st.max_abs_d1_on_k);
        worst_lip = std::max(worst_lip, st.flatten_lip_global);
    }
    const double final_det = steps.back().integral_det;
    caps = caps && final_det <= slope_cap * mu_total;

    PreissInput id_in = make_preiss_input(count, true);
    PreissStep id_step = preiss_sequence(id_in, {8.0}).front();
    double id_total = id_in.mu_weights.sum();
    bool identity_ok =
        id_step.integral_det >= 0.999 * id_total && id_step.integral_det <= 1.001 * id_total;

    Outcome out;
    out.pass = caps && identity_ok;
    out.detail = "slope " + fmt("%.4f", worst_d1) + "<=" + fmt("%.4f", slope_cap) + ", lip " +
                 fmt("%.4f", worst_lip) + ", det integral " + fmt("%.4f", final_det) + "/" +
                 fmt("%.4f", slope_cap * mu_total) + ", identity " +
                 fmt("%.4f", id_step.integral_det / id_total);
    return out;
}

// --- criterion 8: gasket martingale dimension -------------------------------

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

Eigen::Matrix2d cell_pair_matrix(const Eigen::Matrix3d& b, int m) {
    Eigen::Vector3d s1(2.0, -1.0, -1.0), s2(0.0, 1.0, -1.0);
    s1 /= std::sqrt(18.0);
    s2 /= std::sqrt(6.0);
    Eigen::Matrix3d l;
    l << 2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0;
    const double scale = std::pow(5.0 / 3.0, m);
    Eigen::Matrix2d out;
    out(0, 0) = scale * (b * s1).dot(l * (b * s1));
    out(0, 1) = scale * (b * s1).dot(l * (b * s2));
    out(1, 0) = out(0, 1);
    out(1, 1) = scale * (b * s2).dot(l * (b * s2));
    return out;
}

bool shallow_oracle_agrees(std::string& note) {
    for (int m : {1, 2}) {
        std::vector<Eigen::Matrix2d> mats;
        if (m == 1) {
            for (int i = 0; i < 3; ++i) mats.push_back(cell_pair_matrix(harmonic_cell_matrix(i), 1));
        } else {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    mats.push_back(
                        cell_pair_matrix(harmonic_cell_matrix(j) * harmonic_cell_matrix(i), 2));
        }
        std::vector<double> rank_mass(3, 0.0);
        double total = 0.0;
        int esssup = 0;
        for (const auto& mm : mats) {
            Eigen::VectorXd ev = sym_eigenvalues(mm);
            int r = 0;
            if (ev[1] > 0.0)
                for (Eigen::Index k = 0; k < 2; ++k)
                    if (ev[k] > 0.05 * ev[1]) ++r;
            rank_mass[static_cast<std::size_t>(r)] += mm.trace();
            total += mm.trace();
            esssup = std::max(esssup, r);
        }
        int dim = 0;
        double cum = 0.0;
        for (int r = 0; r <= 2; ++r) {
            cum += rank_mass[static_cast<std::size_t>(r)];
            if (cum >= 0.99 * total - 1e-12 * total) {
                dim = r;
                break;
            }
        }
        GasketLevel lvl = sg_graph(m);
        auto [h1, h2] = kusuoka_pair(lvl);
        MdimResult res = estimate_martingale_dimension(lvl, {{h1, h2}}, 0.05, 0.99);
        if (res.dimension != dim || res.esssup_rank != esssup) {
            note = "shallow oracle mismatch at m=" + std::to_string(m);
            return false;
        }
        if (m == 2) note = "shallow oracle dim " + std::to_string(dim);
    }
    return true;
}

Outcome criterion_gasket() {
    Outcome out;
    std::string oracle_note;
    if (!shallow_oracle_agrees(oracle_note)) {
        out.pass = false;
        out.detail = oracle_note;
        return out;
    }

    double worst_energy_gap = 0.0;
    for (int m = 1; m <= 8; ++m) {
        GasketLevel lvl = sg_graph(m);
        VertexFn f = harmonic_extension(lvl, Eigen::Vector3d(1.0, 0.0, 0.0));
        worst_energy_gap = std::max(worst_energy_gap, std::abs(sg_energy(lvl, f) - 2.0));
    }
    bool invariant = worst_energy_gap <= 1e-10;

    std::vector<double> fractions;
    for (int m = 3; m <= 8; ++m) {
        GasketLevel lvl = sg_graph(m);
        EigenratioProfile prof = eigenratio_profile(lvl, {0.05});
        fractions.push_back(prof.fraction_below[0]);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < fractions.size(); ++i)
        monotone = monotone && fractions[i] >= fractions[i - 1];

    CounterRng rng(8);
    bool unit_dim = true;
    int final_dim = 0;
    for (int m : {6, 7, 8}) {
        GasketLevel lvl = sg_graph(m);
        auto tuples = mdim_tuples(lvl, 50, rng);
        MdimResult res = estimate_martingale_dimension(lvl, tuples, 0.05, 0.99);
        unit_dim = unit_dim && res.dimension == 1;
        if (m == 8) final_dim = res.dimension;
    }

    HolderCheck hc = holder_bound_check(std::log(3.0) / std::log(2.0),
                                        std::log(5.0 / 3.0) / std::log(2.0), final_dim);

    out.pass = invariant && monotone && unit_dim && hc.pass;
    out.detail = oracle_note + ", energy gap " + fmt("%.1e", worst_energy_gap) +
                 ", tau fractions " + fmt("%.3f", fractions.front()) + "->" +
                 fmt("%.3f", fractions.back()) + ", mdim " + std::to_string(final_dim) +
                 " at m=8, holder bound " + fmt("%.3f", hc.bound);
    return out;
}

// --- criterion 9: reproducibility -------------------------------------------

std::string write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
    return p.string();
}

bool identical_csvs(const std::string& dir_a, const std::string& dir_b, long& compared) {
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        if (entry.path().extension() != ".csv") continue;
        fs::path other = fs::path(dir_b) / entry.path().filename();
        if (!fs::exists(other)) return false;
        if (read_text_file(entry.path().string()) != read_text_file(other.string())) return false;
        ++compared;
    }
    return compared > 0;
}

Outcome criterion_reproducibility() {
    fs::path base = fs::temp_directory_path() / "eidlab_acceptance_repro";
    fs::remove_all(base);
    fs::create_directories(base);
    std::string ax_cfg = write_file(base / "ax.cfg",
                                    "experiment = axioms\n[axioms]\ntrials = 60\ngraphs = 4\n"
                                    "vertices = 14\nextra_edges = 8\n");
    std::string sg_cfg = write_file(base / "sg.cfg", "experiment = gasket-mdim\n[gasket]\nlevel = 5\n");

    long compared = 0;
    bool ok = true;
    int runs = 0;
    for (const auto& [cfg, name] :
         std::vector<std::pair<std::string, std::string>>{{ax_cfg, "axioms-check"},
                                                          {sg_cfg, "gasket-mdim"}}) {
        RunOptions a;
        a.experiment = name;
        a.config_path = cfg;
        a.seed = 42;
        a.out_dir = (base / (name + "_a")).string();
        RunOptions b = a;
        b.out_dir = (base / (name + "_b")).string();
        int ra = run_experiment(a);
        int rb = run_experiment(b);
        runs += 2;
        ok = ok && ra == 0 && rb == 0 && identical_csvs(a.out_dir, b.out_dir, compared);
    }
    fs::remove_all(base);

    Outcome out;
    out.pass = ok;
    out.detail = std::to_string(compared) + " tables byte-identical across " +
                 std::to_string(runs) + " runs";
    return out;
}

// --- driver -----------------------------------------------------------------

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*fn)();
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "energy measure axioms", 30.0, criterion_axioms},
        {2, "boundary identities", 20.0, criterion_identities},
        {3, "scalar pushforward", 30.0, criterion_scalar},
        {4, "planar refinement verdicts", 120.0, criterion_planar},
        {5, "lipschitz approximation", 60.0, criterion_approx},
        {6, "cone-null corpus", 20.0, criterion_cones},
        {7, "flattening caps", 90.0, criterion_preiss},
        {8, "martingale dimension", 120.0, criterion_gasket},
        {9, "reproducibility", 60.0, criterion_reproducibility},
    };
    return all;
}

bool run_criterion(const Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs <= c.budget_seconds;
    bool pass = out.pass && in_budget;
    std::printf("criterion %d: %s (%s; %s, %.2f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs, in_budget ? "" : ", over budget");
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    int failures = 0;
    if (argc > 1) {
        int want = std::atoi(argv[1]);
        bool found = false;
        for (const auto& c : criteria()) {
            if (c.id != want) continue;
            found = true;
            if (!run_criterion(c)) ++failures;
        }
        if (!found) {
            std::fprintf(stderr, "unknown criterion %s (expected 1..9)\n", argv[1]);
            return 64;
        }
        return failures;
    }
    for (const auto& c : criteria()) {
        if (!run_criterion(c)) ++failures;
    }
    return failures;
}
