#include "eidlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <utility>

#include "eidlab/cone.hpp"
#include "eidlab/csv.hpp"
#include "eidlab/error.hpp"
#include "eidlab/gasket.hpp"
#include "eidlab/grid.hpp"
#include "eidlab/independence.hpp"
#include "eidlab/lipschitz.hpp"
#include "eidlab/parallel.hpp"
#include "eidlab/polyline.hpp"
#include "eidlab/preiss.hpp"
#include "eidlab/random_inputs.hpp"
#include "eidlab/scalar_eid.hpp"

namespace eidlab {
namespace {

namespace fs = std::filesystem;

const char* kVersion = "0.1.0";

std::string bool_word(bool b) { return b ? "pass" : "fail"; }

// Staged output directory: every table is written to <name>.tmp first and
// renamed into place only after the whole experiment ran to completion, so an
// exception mid-run leaves no partial tables behind.
class OutputStager {
public:
    explicit OutputStager(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error("cannot create output directory " + dir);
    }

    OutputStager(const OutputStager&) = delete;
    OutputStager& operator=(const OutputStager&) = delete;

    ~OutputStager() {
        if (committed_) return;
        for (const auto& f : staged_) {
            std::error_code ec;
            fs::remove(dir_ / (f.name + ".tmp"), ec);
        }
    }

    void add(const std::string& name, const std::string& content) {
        write_text_file((dir_ / (name + ".tmp")).string(), content);
        staged_.push_back({name, fnv1a64(content)});
    }

    void commit() {
        for (const auto& f : staged_) {
            std::error_code ec;
            fs::rename(dir_ / (f.name + ".tmp"), dir_ / f.name, ec);
            if (ec) throw Error("cannot finalize output " + f.name);
        }
        committed_ = true;
    }

    struct Entry {
        std::string name;
        std::uint64_t digest;
    };
    const std::vector<Entry>& entries() const { return staged_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<Entry> staged_;
    bool committed_ = false;
};

void write_manifest(const OutputStager& stager, const RunOptions& opt, bool pass,
                    double wall_seconds) {
    std::string m;
    m += "experiment: " + opt.experiment + "\n";
    m += "seed: " + std::to_string(opt.seed) + "\n";
    m += "eidlab_version: " + std::string(kVersion) + "\n";
    m += "eigen_version: " + std::to_string(EIGEN_WORLD_VERSION) + "." +
         std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION) + "\n";
    m += "compiler: " + std::string(__VERSION__) + "\n";
    m += "threads: " + std::to_string(thread_count()) + "\n";
    if (opt.config_path.empty()) {
        m += "config: (defaults)\n";
    } else {
        m += "config: " + opt.config_path + " fnv1a64:" + hex64(fnv1a64_file(opt.config_path)) +
             "\n";
    }
    for (const auto& e : stager.entries())
        m += "output: " + e.name + " fnv1a64:" + hex64(e.digest) + "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", wall_seconds);
    m += "wall_seconds: " + std::string(buf) + "\n";
    m += "status: " + bool_word(pass) + "\n";
    write_text_file((stager.dir() / "manifest.txt").string(), m);
}

// ---------------------------------------------------------------------------
// planar map: identity plus a small smooth perturbation, diffeomorphic on
// [0,1]^2 (both Jacobian diagonal entries stay above 0.9, the off-diagonal
// ones below 0.08, so det > 0.8 everywhere).

double planar_phi1(double x, double y) {
    return x + 0.015 * std::sin(2.0 * M_PI * x) + 0.08 * (y - 0.5) * (y - 0.5);
}
double planar_phi2(double x, double y) {
    return y + 0.012 * std::sin(2.0 * M_PI * y) + 0.06 * (x - 0.5) * (x - 0.5);
}
double planar_d1phi1(double x) { return 1.0 + 0.03 * M_PI * std::cos(2.0 * M_PI * x); }
double planar_d2phi1(double y) { return 0.16 * (y - 0.5); }
double planar_d1phi2(double x) { return 0.12 * (x - 0.5); }
double planar_d2phi2(double y) { return 1.0 + 0.024 * M_PI * std::cos(2.0 * M_PI * y); }

}  // namespace

double planar_bin_factor() { return 0.32; }

double planar_density_cap() {
    // 2 * sup of (|grad phi1|^2 + |grad phi2|^2) / |det Dphi| over a 200^2
    // closed-form sample; the factor 2 absorbs the discretization error of the
    // density itself.
    double worst = 0.0;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        double x = double(i) / n;
        for (int j = 0; j <= n; ++j) {
            double y = double(j) / n;
            double a = planar_d1phi1(x), b = planar_d2phi1(y);
            double c = planar_d1phi2(x), d = planar_d2phi2(y);
            double det = std::abs(a * d - b * c);
            double rho = (a * a + b * b + c * c + d * d) / det;
            worst = std::max(worst, rho);
        }
    }
    return 2.0 * worst;
}

PlanarEidData make_planar_eid_data(const std::vector<Eigen::Index>& counts, bool degenerate) {
    require(!counts.empty(), "planar sequence needs at least one grid");
    PlanarEidData data;
    data.density_cap = planar_density_cap();
    for (Eigen::Index count : counts) {
        GridSpec spec = make_grid_cube(2, 0.0, 1.0, count, Stencil::Axis);
        data.graphs.push_back(
            std::make_unique<MetricGraph>(build_grid_graph(spec, grid_conductance(2, 2.0))));
        const MetricGraph& g = *data.graphs.back();
        double h = spec.spacing()[0];
        Measure mu = Measure::uniform(g.vertex_count(), h * h);
        VertexFn f1(g.vertex_count()), f2(g.vertex_count());
        for (Eigen::Index v = 0; v < g.vertex_count(); ++v) {
            Eigen::VectorXd pt = spec.point(v);
            f1[v] = planar_phi1(pt[0], pt[1]);
            f2[v] = degenerate ? f1[v] : planar_phi2(pt[0], pt[1]);
        }
        EidStage stage{PEnergyForm(g, std::move(mu), 2.0),
                       {std::move(f1), std::move(f2)},
                       VertexSet::full(g.vertex_count()),
                       h,
                       spec};
        data.stages.push_back(std::move(stage));
    }
    return data;
}

AxiomReport axioms_sweep(long trials, long graphs, Eigen::Index vertices,
                         Eigen::Index extra_edges, std::uint64_t seed) {
    require(trials > 0 && graphs > 0 && vertices >= 5, "axioms sweep needs a real corpus");
    long per_form = std::max(1L, trials / graphs);
    const double ps[3] = {1.5, 2.0, 3.0};
    CounterRng root(seed);
    std::vector<AxiomReport> reports;
    for (int pi = 0; pi < 3; ++pi) {
        for (long gi = 0; gi < graphs; ++gi) {
            CounterRng rng = root.fork(1000u * pi + std::uint64_t(gi));
            Eigen::Index nv = 5 + Eigen::Index(rng.next_below(std::uint64_t(vertices - 4)));
            Eigen::Index chords = Eigen::Index(rng.next_below(std::uint64_t(extra_edges) + 1));
            MetricGraph g = random_connected_graph(nv, chords, rng);
            Measure mu = random_positive_measure(nv, rng);
            PEnergyForm form(g, std::move(mu), ps[pi]);
            reports.push_back(check_axioms(form, per_form, rng));
        }
        // One grid-max form per p so both energy variants face every axiom.
        CounterRng rng = root.fork(5000u + std::uint64_t(pi));
        GridSpec spec = make_grid_cube(2, 0.0, 1.0, 9, Stencil::King);
        MetricGraph g = build_grid_graph(spec, grid_conductance(2, ps[pi]));
        Measure mu = random_positive_measure(g.vertex_count(), rng);
        PEnergyForm form = PEnergyForm::grid_max(g, std::move(mu), ps[pi], spec);
        reports.push_back(check_axioms(form, per_form, rng));
    }
    return merge_reports(reports);
}

ScalarBinwise scalar_binwise_check(Eigen::Index points) {
    require(points >= 64, "binwise check needs a fine grid");
    GridSpec spec = make_grid_1d(0.0, 1.0, points);
    MetricGraph g = build_grid_graph(spec, grid_conductance(1, 2.0));
    double h = spec.spacing()[0];
    PEnergyForm form(g, Measure::uniform(points, h), 2.0);

    auto f = [](double x) { return x + 0.15 * x * (1.0 - x) * (2.0 - x); };
    auto fp = [](double x) { return 1.3 - 0.9 * x + 0.45 * x * x; };
    VertexFn fv(points);
    for (Eigen::Index i = 0; i < points; ++i) fv[i] = f(spec.point(i)[0]);

    const double bin = 1.0 / 64.0;
    BinnedMeasure push =
        pushforward({fv}, form.energy_measure(fv), VertexSet::full(points), bin);

    // Change-of-variables oracle: integrate f'(x)^2 dx over the preimage of
    // each bin with a midpoint rule 16x finer than the grid.
    std::vector<double> oracle(64, 0.0);
    Eigen::Index sub = (points - 1) * 16;
    double dx = 1.0 / double(sub);
    for (Eigen::Index i = 0; i < sub; ++i) {
        double x = (double(i) + 0.5) * dx;
        int b = int(std::floor(f(x) / bin));
        if (b >= 0 && b < 64) oracle[std::size_t(b)] += fp(x) * fp(x) * dx;
    }

    ScalarBinwise out;
    for (int b = 1; b < 63; ++b) {
        double got = push.mass({b, 0, 0, 0});
        double rel = std::abs(got - oracle[std::size_t(b)]) / oracle[std::size_t(b)];
        out.worst_rel_error = std::max(out.worst_rel_error, rel);
        ++out.interior_bins;
    }
    return out;
}

CantorCheck cantor_neighborhood_check(int level, int grid_mult) {
    require(level >= 2 && level <= 10, "cantor level out of range");
    require(grid_mult >= 3, "grid must refine the triadic lattice");
    double scale3 = std::pow(3.0, level);
    Eigen::Index points = Eigen::Index(scale3) * grid_mult + 1;
    GridSpec spec = make_grid_1d(0.0, 1.0, points);
    double h = spec.spacing()[0];
    IntervalUnion k_set = IntervalUnion::cantor(level);
    double steep = std::pow(3.0, level + 2);
    ScalarEidSequence seq = scalar_eid_sequence(k_set, steep, spec);

    MetricGraph g = build_grid_graph(spec, grid_conductance(1, 2.0));
    PEnergyForm form(g, Measure::uniform(points, h), 2.0);
    VertexFn w = form.energy_measure_density(seq.g.values);

    // Image points: g is constant on each removed-middle-thirds complement
    // gap's flanking intervals; the image of K is the finite set of values g
    // takes on the surviving intervals.
    std::vector<double> images;
    for (const auto& iv : k_set.intervals()) {
        Eigen::VectorXd mid(1);
        mid[0] = 0.5 * (iv.first + iv.second);
        images.push_back(seq.g[spec.flatten(spec.nearest_index(mid))]);
    }

    CantorCheck out;
    for (int e = 4; e <= 8; ++e) {
        double eps = std::pow(3.0, -e);
        IntervalUnion u = IntervalUnion::around_points(images, eps);
        double mass = 0.0;
        for (Eigen::Index i = 0; i < points; ++i)
            if (u.contains(seq.g[i])) mass += w[i];
        out.eps.push_back(eps);
        out.mass.push_back(mass);
        out.length.push_back(u.length());
        out.ratios.push_back(mass / u.length());
    }
    double lo = *std::min_element(out.ratios.begin(), out.ratios.end());
    double hi = *std::max_element(out.ratios.begin(), out.ratios.end());
    out.spread = hi / lo;
    out.pass = lo >= 0.9 && hi <= 1.0 && out.spread <= 1.1;
    return out;
}

double currents_identity_worst_gap(long graphs, Eigen::Index max_vertices, std::uint64_t seed) {
    require(graphs > 0 && max_vertices >= 3, "identity sweep needs a corpus");
    CounterRng root(seed);
    double worst = 0.0;
    for (long gi = 0; gi < graphs; ++gi) {
        CounterRng rng = root.fork(std::uint64_t(gi));
        Eigen::Index nv = 3 + Eigen::Index(rng.next_below(std::uint64_t(max_vertices - 2)));
        MetricGraph g = random_connected_graph(nv, nv / 2, rng);
        PEnergyForm form(g, random_positive_measure(nv, rng), 2.0);
        VertexFn f1 = random_vertex_fn(nv, rng);
        VertexFn f2 = random_vertex_fn(nv, rng);
        VertexFn gw = random_vertex_fn(nv, rng);

        // E(f, g) + <A f, g>_mu = 0.
        double inner = form.energy_inner(f1, gw);
        double gen = (form.generator_apply(f1).array() * gw.array() *
                      form.reference_measure().weights().array())
                         .sum();
        double gap = std::abs(inner + gen) / std::max({std::abs(inner), std::abs(gen), 1.0});
        worst = std::max(worst, gap);

        // Three boundary routes on the induced current with an affine test
        // function; current_boundary throws if its internal gate fails.
        Current1 t = build_current(form, {f1, f2}, gw);
        Eigen::VectorXd a(2);
        a[0] = rng.uniform(-1.0, 1.0);
        a[1] = rng.uniform(-1.0, 1.0);
        double b = rng.uniform(-1.0, 1.0);
        TestFunction phi{[&](const Eigen::VectorXd& y) { return a.dot(y) + b; },
                         [&](const Eigen::VectorXd&) { return a; }};
        BoundaryCheck bc = current_boundary(t, phi, true, 1e-8);
        worst = std::max({worst, bc.chain_generator_gap, bc.atom_chain_gap});
    }
    return worst;
}

DrReport planar_dr_check(Eigen::Index count, double bin_side) {
    PlanarEidData data = make_planar_eid_data({count}, false);
    const EidStage& st = data.stages[0];
    Current1 t1 = build_current(st.form, st.phi, st.phi[0]);
    Current1 t2 = build_current(st.form, st.phi, st.phi[1]);
    VertexFn lam = st.form.energy_measure_density(st.phi[0]) +
                   st.form.energy_measure_density(st.phi[1]);
    Measure nu_src(lam.cwiseProduct(st.form.reference_measure().weights()));
    BinnedMeasure nu = pushforward(st.phi, nu_src, st.a, bin_side);
    return dr_hypothesis_check({t1, t2}, nu);
}

// ---------------------------------------------------------------------------
// experiment runners

namespace {

long cfg_long(const ExperimentConfig& cfg, const std::string& key, long fallback) {
    return cfg.get_long(key, fallback);
}

bool run_axioms(const ExperimentConfig& cfg, std::uint64_t seed, OutputStager& out) {
    long trials = cfg_long(cfg, "axioms.trials", 1000);
    long graphs = cfg_long(cfg, "axioms.graphs", 12);
    long vertices = cfg_long(cfg, "axioms.vertices", 40);
    long extra = cfg_long(cfg, "axioms.extra_edges", 25);
    // A p override narrows the sweep to that exponent for quick runs.
    AxiomReport rep;
    if (cfg.has("axioms.p")) {
        double p = cfg.get_double("axioms.p", 2.0);
        CounterRng root(seed);
        std::vector<AxiomReport> reports;
        for (long gi = 0; gi < graphs; ++gi) {
            CounterRng rng = root.fork(std::uint64_t(gi));
            Eigen::Index nv = 5 + Eigen::Index(rng.next_below(std::uint64_t(vertices - 4)));
            MetricGraph g = random_connected_graph(nv, Eigen::Index(rng.next_below(extra + 1)), rng);
            PEnergyForm form(g, random_positive_measure(nv, rng), p);
            reports.push_back(check_axioms(form, std::max(1L, trials / graphs), rng));
        }
        rep = merge_reports(reports);
    } else {
        rep = axioms_sweep(trials, graphs, vertices, extra, seed);
    }
    Csv csv("axiom,trials,worst_slack,pass");
    for (const auto& row : rep.rows)
        csv.add_row({row.axiom, std::to_string(row.trials), fmt_g17(row.worst_slack),
                     bool_word(row.pass)});
    out.add("axioms.csv", csv.text());
    return rep.all_pass;
}

void append_eid_rows(Csv& csv, const EidReport& rep) {
    for (const auto& r : rep.rows)
        csv.add_row({fmt_g17(r.graph_mesh), fmt_g17(r.h), fmt_g17(r.c),
                     fmt_g17(r.singular_mass), fmt_g17(r.total_mass), r.verdict});
}

bool run_eid_scalar(const ExperimentConfig& cfg, std::uint64_t, OutputStager& out) {
    Eigen::Index points = cfg_long(cfg, "scalar.points", 4096);
    int cantor_level = int(cfg_long(cfg, "scalar.cantor_level", 8));

    ScalarBinwise bw = scalar_binwise_check(points);
    CantorCheck cc = cantor_neighborhood_check(cantor_level);

    // Smooth strictly monotone map on a refining sequence of interval grids;
    // the image density is f' <= 1.3, so C doubles that bound.
    auto f = [](double x) { return x + 0.15 * x * (1.0 - x) * (2.0 - x); };
    std::vector<std::unique_ptr<MetricGraph>> graphs;
    std::vector<EidStage> stages;
    for (Eigen::Index n : {points / 4 + 1, points / 2 + 1, points + 1}) {
        GridSpec spec = make_grid_1d(0.0, 1.0, n);
        graphs.push_back(
            std::make_unique<MetricGraph>(build_grid_graph(spec, grid_conductance(1, 2.0))));
        double h = spec.spacing()[0];
        VertexFn fv(n);
        for (Eigen::Index i = 0; i < n; ++i) fv[i] = f(spec.point(i)[0]);
        stages.push_back(EidStage{PEnergyForm(*graphs.back(), Measure::uniform(n, h), 2.0),
                                  {std::move(fv)},
                                  VertexSet::full(n),
                                  h,
                                  spec});
    }
    EidConfig ec;
    ec.h_factor = planar_bin_factor();
    ec.density_cap = 2.6;
    EidReport rep = eid_experiment(stages, ec);

    Csv csv("graph_mesh,h,C,singular_mass,total_mass,verdict");
    append_eid_rows(csv, rep);
    out.add("eid_scalar.csv", csv.text());

    Csv bwcsv("points,interior_bins,worst_rel_error,pass");
    bwcsv.add_row({std::to_string(points), std::to_string(bw.interior_bins),
                   fmt_g17(bw.worst_rel_error), bool_word(bw.worst_rel_error <= 0.05)});
    out.add("binwise.csv", bwcsv.text());

    Csv cccsv("eps,mass,length,ratio");
    for (std::size_t i = 0; i < cc.eps.size(); ++i)
        cccsv.add_row({fmt_g17(cc.eps[i]), fmt_g17(cc.mass[i]), fmt_g17(cc.length[i]),
                       fmt_g17(cc.ratios[i])});
    out.add("cantor_neighborhood.csv", cccsv.text());

    return bw.worst_rel_error <= 0.05 && cc.pass && rep.verdict == "consistent-with-EID";
}

bool run_eid_planar(const ExperimentConfig& cfg, std::uint64_t, OutputStager& out) {
    Eigen::Index base = cfg_long(cfg, "planar.base", 65);
    long levels = cfg_long(cfg, "planar.levels", 3);
    require(base >= 9 && levels >= 2, "planar sequence needs nested refinements");
    std::vector<Eigen::Index> counts{base};
    for (long i = 1; i < levels; ++i) counts.push_back(2 * counts.back() - 1);

    SphereSampler sampler(2, 256);
    EidConfig ec;
    ec.h_factor = planar_bin_factor();
    ec.density_cap = planar_density_cap();
    ec.sampler = &sampler;

    PlanarEidData indep = make_planar_eid_data(counts, false);
    EidReport rep = eid_experiment(indep.stages, ec);
    PlanarEidData degen = make_planar_eid_data(counts, true);
    EidReport rep2 = eid_experiment(degen.stages, ec);

    Csv csv("graph_mesh,h,C,singular_mass,total_mass,verdict");
    append_eid_rows(csv, rep);
    out.add("eid_planar.csv", csv.text());
    Csv csv2("graph_mesh,h,C,singular_mass,total_mass,verdict");
    append_eid_rows(csv2, rep2);
    out.add("eid_planar_degenerate.csv", csv2.text());

    // Both p = 2 degeneracy routes on the coarse grid, full vertex table.
    const EidStage& st = indep.stages[0];
    VertexFn lam = st.form.energy_measure_density(st.phi[0]) +
                   st.form.energy_measure_density(st.phi[1]);
    Measure nu(lam.cwiseProduct(st.form.reference_measure().weights()));
    DetEquivalenceReport det = det_equivalence_check(st.form, st.phi, nu, st.a, sampler);
    Csv dcsv("vertex,trace,det,sigma1,lattice_inf,verdict");
    for (const auto& r : det.rows)
        dcsv.add_row({std::to_string(r.vertex), fmt_g17(r.trace), fmt_g17(r.det),
                      fmt_g17(r.sigma1), fmt_g17(r.lattice_inf), r.verdict});
    out.add("det_equivalence.csv", dcsv.text());

    return rep.verdict == "consistent-with-EID" && !rep.degenerate &&
           rep2.verdict == "singular" && rep2.degenerate && det.routes_agree &&
           det.null_sets_match;
}

// Slab geometry shared by the demo and the acceptance gate: distance to the
// vertical slab |x1 - 1/2| <= 1/10 on a king-stencil square grid.
GridField slab_distance_field(const GridSpec& spec) {
    return make_grid_field(
        spec, [](const Eigen::VectorXd& x) { return std::max(0.0, std::abs(x[0] - 0.5) - 0.1); });
}

bool run_approx_demo(const ExperimentConfig& cfg, std::uint64_t, OutputStager& out) {
    Eigen::Index count = cfg_long(cfg, "approx.count", 129);
    long rungs = cfg_long(cfg, "approx.rungs", 5);
    require(count >= 17 && rungs >= 2, "ladder needs a real grid and several rungs");

    GridSpec spec = make_grid_cube(2, 0.0, 1.0, count, Stencil::King);
    GridField f = slab_distance_field(spec);
    const double eps = 0.05;
    std::vector<GridField> ladder;
    for (long i = 1; i <= rungs; ++i) {
        double k = std::pow(2.0, double(i));
        ladder.push_back(make_grid_field(spec, [&](const Eigen::VectorXd& x) {
            double d = std::max(0.0, std::abs(x[0] - 0.5) - 0.1);
            return std::min(1.0, eps + k * d);
        }));
    }
    double radius = std::sqrt(2.0) + spec.min_spacing();
    std::vector<LadderLogRow> rows = variational_ladder(f, ladder, radius);

    Csv csv("i,sup_gap,lip_bound_slack");
    bool monotone = true;
    double scale = f.values.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv.add_row({std::to_string(rows[i].i), fmt_g17(rows[i].sup_gap),
                     fmt_g17(rows[i].lip_bound_slack)});
        if (i > 0 && rows[i].sup_gap > rows[i - 1].sup_gap + 1e-12 * (1.0 + scale))
            monotone = false;
    }
    out.add("approx_ladder.csv", csv.text());
    bool slack_ok = true;
    for (const auto& r : rows)
        if (r.lip_bound_slack > 1e-9 * (1.0 + scale)) slack_ok = false;
    return monotone && slack_ok;
}

bool run_cones_demo(const ExperimentConfig& cfg, std::uint64_t seed, OutputStager& out) {
    long curves = cfg_long(cfg, "cones.curves", 1000);
    long steps = cfg_long(cfg, "cones.steps", 200);
    Eigen::Index dirs = cfg_long(cfg, "cones.directions", 720);

    CounterRng root(seed);
    Csv csv("example,curves,total_violation,max_violation");
    bool all_zero = true;
    std::vector<ConeNullExample> corpus = cone_null_corpus();
    for (std::size_t ei = 0; ei < corpus.size(); ++ei) {
        const ConeNullExample& ex = corpus[ei];
        CounterRng rng = root.fork(std::uint64_t(ei));
        std::vector<Polyline> polys;
        for (long c = 0; c < curves; ++c)
            polys.push_back(random_stencil_polyline(ex.spec, steps, rng));
        std::vector<double> viol = cone_null_violation(ex.membership, ex.cone, polys);
        double total = 0.0, worst = 0.0;
        for (double v : viol) {
            total += v;
            worst = std::max(worst, v);
        }
        if (total != 0.0) all_zero = false;
        csv.add_row({ex.name, std::to_string(curves), fmt_g17(total), fmt_g17(worst)});
    }

    // Positive control: the full square is not cone-null, so an axis-directed
    // chord inside it is charged and the detector is not vacuously zero.
    {
        ConeNullExample hp = corpus_hyperplane();
        Eigen::MatrixXd pts(2, 2);
        pts << 0.25, 0.5, 0.75, 0.5;
        PointOracle everything = [](const Eigen::VectorXd&) { return true; };
        std::vector<double> viol = cone_null_violation(everything, hp.cone, {Polyline{pts}});
        double got = viol[0];
        csv.add_row({"full-square-control", "1", fmt_g17(got), fmt_g17(got)});
        all_zero = all_zero && got > 0.45;
    }
    out.add("cones.csv", csv.text());

    // Cone-restricted upper gradient of f(y) = y2 on the Lipschitz-graph set:
    // on K the admissible directions exclude the open double cone about e2, so
    // the sup is attained on the cone boundary at cos(theta) = sin(pi/2 -
    // theta).
    ConeNullExample lg = corpus_lipschitz_graph();
    auto grad = [](const Eigen::VectorXd&) {
        Eigen::VectorXd g(2);
        g << 0.0, 1.0;
        return g;
    };
    GridField ug = cone_upper_gradient(lg.spec, grad, lg.membership, lg.cone, dirs);
    double predicted = std::cos(lg.cone.theta);
    double worst_on_k = 0.0, worst_off_k = 0.0;
    for (Eigen::Index v = 0; v < lg.spec.point_count(); ++v) {
        if (lg.membership(lg.spec.point(v)))
            worst_on_k = std::max(worst_on_k, std::abs(ug.values[v] - predicted));
        else
            worst_off_k = std::max(worst_off_k, std::abs(ug.values[v] - 1.0));
    }
    Csv ucsv("case,predicted,max_abs_error");
    ucsv.add_row({"on-set", fmt_g17(predicted), fmt_g17(worst_on_k)});
    ucsv.add_row({"off-set", fmt_g17(1.0), fmt_g17(worst_off_k)});
    out.add("cone_upper_gradient.csv", ucsv.text());

    return all_zero && worst_on_k <= 1e-3 && worst_off_k <= 1e-12;
}

bool run_currents_check(const ExperimentConfig& cfg, std::uint64_t seed, OutputStager& out) {
    long graphs = cfg_long(cfg, "currents.graphs", 100);
    Eigen::Index vertices = cfg_long(cfg, "currents.vertices", 50);

    double worst = currents_identity_worst_gap(graphs, vertices, seed);
    DrReport dr = planar_dr_check(33, 0.25);

    Csv csv("check,value,threshold,pass");
    csv.add_row({"generator-identity", fmt_g17(worst), fmt_g17(1e-8),
                 bool_word(worst <= 1e-8)});
    csv.add_row({"dr-hypothesis", dr.all_pass ? "1" : "0", "1", bool_word(dr.all_pass)});
    out.add("currents.csv", csv.text());

    Csv drcsv("bin,det,min_mass,pass");
    for (const auto& r : dr.rows) {
        std::string key;
        for (int d = 0; d < dr.dim; ++d)
            key += (d ? ":" : "") + std::to_string(r.key[std::size_t(d)]);
        drcsv.add_row({key, fmt_g17(r.det), fmt_g17(r.min_mass), bool_word(r.pass)});
    }
    out.add("dr_hypothesis.csv", drcsv.text());

    // One concrete current dump so the atom table format is exercised.
    PlanarEidData data = make_planar_eid_data({17}, false);
    const EidStage& st = data.stages[0];
    Current1 t = build_current(st.form, st.phi, st.phi[0]);
    out.add("current_atoms.csv", current_dump_csv(t));

    return worst <= 1e-8 && dr.all_pass;
}

bool run_preiss(const ExperimentConfig& cfg, std::uint64_t, OutputStager& out) {
    Eigen::Index count = cfg_long(cfg, "preiss.count", 321);
    require(count >= 41, "flattening grid too coarse");

    PreissInput in = make_preiss_input(count, false);
    std::vector<PreissStep> steps = preiss_sequence(in, {2.0, 4.0, 8.0});
    double mu_total = in.mu_weights.sum();
    const double slope_cap = 2.0 / 3.0 + 0.05;
    const double lip_cap = std::sqrt(2.0) + 0.05;

    Csv csv("k,delta,max_d1_on_k,max_d1_global,flatten_lip,flatten_lip_global,integral_det,"
            "mu_total");
    bool pass = true;
    for (const auto& s : steps) {
        csv.add_row({fmt_g17(s.k), fmt_g17(s.delta), fmt_g17(s.max_abs_d1_on_k),
                     fmt_g17(s.max_abs_d1_global), fmt_g17(s.flatten_lip),
                     fmt_g17(s.flatten_lip_global), fmt_g17(s.integral_det), fmt_g17(mu_total)});
        if (s.max_abs_d1_on_k > slope_cap) pass = false;
        if (s.flatten_lip_global > lip_cap) pass = false;
    }
    if (steps.back().integral_det > slope_cap * mu_total) pass = false;
    out.add("preiss.csv", csv.text());

    // Identity control: with K empty nothing is flattened and the determinant
    // integral recovers the full mass.
    PreissInput idin = make_preiss_input(count, true);
    std::vector<PreissStep> idsteps = preiss_sequence(idin, {8.0});
    double id_total = idin.mu_weights.sum();
    Csv icsv("k,delta,max_d1_on_k,max_d1_global,flatten_lip,flatten_lip_global,integral_det,"
             "mu_total");
    for (const auto& s : idsteps)
        icsv.add_row({fmt_g17(s.k), fmt_g17(s.delta), fmt_g17(s.max_abs_d1_on_k),
                      fmt_g17(s.max_abs_d1_global), fmt_g17(s.flatten_lip),
                      fmt_g17(s.flatten_lip_global), fmt_g17(s.integral_det), fmt_g17(id_total)});
    out.add("preiss_identity.csv", icsv.text());
    if (idsteps.back().integral_det < 0.999 * id_total ||
        idsteps.back().integral_det > 1.001 * id_total)
        pass = false;
    return pass;
}

bool run_gasket_mdim(const ExperimentConfig& cfg, std::uint64_t seed, OutputStager& out) {
    int level = int(cfg_long(cfg, "gasket.level", 8));
    double alpha = cfg.get_double("gasket.alpha", std::log(5.0 / 3.0) / std::log(2.0));
    double d_h = cfg.get_double("gasket.d_h", std::log(3.0) / std::log(2.0));
    long singletons = cfg_long(cfg, "gasket.singletons", 50);
    double threshold = cfg.get_double("gasket.threshold", 0.05);
    require(level >= 3, "profile needs level 3 at least");

    bool pass = true;

    // Energy level-independence of the harmonic pair.
    Csv ecsv("m,energy_h1,energy_h2,cross_energy");
    for (int m = 1; m <= level; ++m) {
        GasketLevel lvl = sg_graph(m);
        auto [h1, h2] = kusuoka_pair(lvl);
        double e1 = sg_energy(lvl, h1);
        double e2 = sg_energy(lvl, h2);
        double cross = 0.0;
        for (const Edge& e : lvl.graph.edges())
            cross += e.c * (h1[e.u] - h1[e.v]) * (h2[e.u] - h2[e.v]);
        ecsv.add_row({std::to_string(m), fmt_g17(e1), fmt_g17(e2), fmt_g17(cross)});
        if (std::abs(e1 - 1.0) > 1e-10 || std::abs(e2 - 1.0) > 1e-10 ||
            std::abs(cross) > 1e-10)
            pass = false;
    }
    out.add("sg_energy.csv", ecsv.text());

    // Eigenvalue-ratio profile per level, plus the per-cell detail table.
    const double tau_probe = 0.05;
    Csv pcsv("m,tau,mass_fraction_below_tau");
    Csv ccsv("m,cell,ratio,nu_mass");
    std::vector<double> probe_fracs;
    for (int m = 3; m <= level; ++m) {
        GasketLevel lvl = sg_graph(m);
        EigenratioProfile prof = eigenratio_profile(lvl);
        for (std::size_t t = 0; t < prof.taus.size(); ++t) {
            pcsv.add_row({std::to_string(m), fmt_g17(prof.taus[t]),
                          fmt_g17(prof.fraction_below[t])});
            if (prof.taus[t] == tau_probe) probe_fracs.push_back(prof.fraction_below[t]);
        }
        for (const auto& c : prof.cells)
            ccsv.add_row({std::to_string(c.m), std::to_string(c.cell), fmt_g17(c.ratio),
                          fmt_g17(c.nu_mass)});
    }
    for (std::size_t i = 1; i < probe_fracs.size(); ++i)
        if (probe_fracs[i] < probe_fracs[i - 1]) pass = false;
    out.add("eigenratio.csv", pcsv.text());
    out.add("eigenratio_cells.csv", ccsv.text());

    // Martingale dimension per level, with a flat 2d control geometry.
    CounterRng rng(seed);
    Csv mcsv("m,dimension,esssup_rank");
    for (int m = std::min(5, level); m <= level; ++m) {
        GasketLevel lvl = sg_graph(m);
        MdimResult res = estimate_martingale_dimension(lvl, mdim_tuples(lvl, singletons, rng),
                                                       threshold, 0.99);
        mcsv.add_row({std::to_string(m), std::to_string(res.dimension),
                      std::to_string(res.esssup_rank)});
        if (m >= 6 && res.dimension != 1) pass = false;
        if (m == level) {
            HolderCheck hc = holder_bound_check(d_h, alpha, res.dimension);
            Csv hcsv("d_h,alpha,estimate,bound,pass");
            hcsv.add_row({fmt_g17(hc.d_h), fmt_g17(hc.alpha), std::to_string(hc.estimate),
                          fmt_g17(hc.bound), bool_word(hc.pass)});
            out.add("holder.csv", hcsv.text());
            if (!hc.pass) pass = false;
        }
    }
    {
        GridSpec spec = make_grid_cube(2, 0.0, 1.0, 17, Stencil::King);
        MetricGraph g = build_grid_graph(spec, grid_conductance(2, 2.0));
        double h = spec.spacing()[0];
        PEnergyForm form(g, Measure::uniform(g.vertex_count(), h * h), 2.0);
        VertexFn c1(g.vertex_count()), c2(g.vertex_count());
        for (Eigen::Index v = 0; v < g.vertex_count(); ++v) {
            c1[v] = spec.point(v)[0];
            c2[v] = spec.point(v)[1];
        }
        VertexFn lam = form.energy_measure_density(c1) + form.energy_measure_density(c2);
        Measure nu(lam.cwiseProduct(form.reference_measure().weights()));
        MdimResult ctrl =
            estimate_martingale_dimension(form, nu, {{c1, c2}}, threshold, 0.99);
        mcsv.add_row({"flat-control", std::to_string(ctrl.dimension),
                      std::to_string(ctrl.esssup_rank)});
        if (ctrl.dimension != 2) pass = false;
    }
    out.add("mdim.csv", mcsv.text());

    // Kusuoka-vs-uniform witness: the nu-mass of the lightest tenth of the
    // cells collapses with depth.
    Csv wcsv("m,light_cell_mass");
    std::vector<double> light;
    for (int m = 2; m <= std::min(level, 6); ++m) {
        GasketLevel lvl = sg_graph(m);
        auto [h1, h2] = kusuoka_pair(lvl);
        light.push_back(light_cell_mass(cell_nu_masses(lvl, h1, h2)));
        wcsv.add_row({std::to_string(m), fmt_g17(light.back())});
    }
    for (std::size_t i = 1; i < light.size(); ++i)
        if (light[i] >= light[i - 1]) pass = false;
    out.add("light_cells.csv", wcsv.text());

    return pass;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"axioms-check",   "eid-scalar", "eid-planar",
                                                "approx-demo",    "cones-demo", "currents-check",
                                                "preiss",         "gasket-mdim"};
    return names;
}

void emit_plotdata(const std::string& path, const std::string& header,
                   const std::vector<std::vector<std::string>>& rows) {
    Csv csv(header);
    for (const auto& r : rows) csv.add_row(r);
    write_text_file(path, csv.text());
}

int run_experiment(const RunOptions& opt) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), opt.experiment) == names.end())
        throw ValidationError("unknown experiment " + opt.experiment);

    ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = parse_config(opt.config_path);
        // The config may pin the experiment; "axioms" style short names match
        // the leading token of the experiment id.
        if (!cfg.experiment().empty() && cfg.experiment() != opt.experiment &&
            opt.experiment.rfind(cfg.experiment() + "-", 0) != 0)
            throw ValidationError("config names experiment " + cfg.experiment() +
                                  " but the command line asks for " + opt.experiment);
    }

    auto t0 = std::chrono::steady_clock::now();
    OutputStager stager(opt.out_dir);
    bool pass = false;
    try {
        if (opt.experiment == "axioms-check")
            pass = run_axioms(cfg, opt.seed, stager);
        else if (opt.experiment == "eid-scalar")
            pass = run_eid_scalar(cfg, opt.seed, stager);
        else if (opt.experiment == "eid-planar")
            pass = run_eid_planar(cfg, opt.seed, stager);
        else if (opt.experiment == "approx-demo")
            pass = run_approx_demo(cfg, opt.seed, stager);
        else if (opt.experiment == "cones-demo")
            pass = run_cones_demo(cfg, opt.seed, stager);
        else if (opt.experiment == "currents-check")
            pass = run_currents_check(cfg, opt.seed, stager);
        else if (opt.experiment == "preiss")
            pass = run_preiss(cfg, opt.seed, stager);
        else if (opt.experiment == "gasket-mdim")
            pass = run_gasket_mdim(cfg, opt.seed, stager);
    } catch (const ValidationError& e) {
        throw ValidationError(opt.experiment + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(opt.experiment + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(opt.experiment + ": " + e.what());
    } catch (const Error& e) {
        throw Error(opt.experiment + ": " + e.what());
    }
    stager.commit();
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(stager, opt, pass, wall);
    return pass ? 0 : 1;
}

}  // namespace eidlab
