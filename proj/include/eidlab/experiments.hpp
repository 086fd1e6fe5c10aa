#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eidlab/axioms.hpp"
#include "eidlab/config.hpp"
#include "eidlab/currents.hpp"
#include "eidlab/pushforward.hpp"

namespace eidlab {

// The named experiments behind the CLI. Exit semantics: 0 when every
// assertion of the experiment holds, 1 otherwise; configuration and usage
// problems throw (the CLI maps them to exit 2). Output CSVs are staged under
// temporary names and renamed only on success, so failed runs leave no
// partial tables behind; a manifest with input digests, seed, versions and
// wall time is written last.
struct RunOptions {
    std::string experiment;
    std::string config_path;  // empty = all defaults
    std::uint64_t seed = 0;
    std::string out_dir = "out";
};

int run_experiment(const RunOptions& opt);

const std::vector<std::string>& experiment_names();

// Long-format plot table; header-only file when rows is empty.
void emit_plotdata(const std::string& path, const std::string& header,
                   const std::vector<std::vector<std::string>>& rows);

// Shared experiment cores. The acceptance suite calls these directly so the
// gate and the CLI exercise identical inputs.

// Per p in {1.5, 2, 3}: edgewise forms on `graphs` random graphs plus one
// grid-max form, `trials` draws per axiom per form family.
AxiomReport axioms_sweep(long trials, long graphs, Eigen::Index vertices,
                         Eigen::Index extra_edges, std::uint64_t seed);

// Identity-plus-smooth-perturbation map on nested axis-stencil grids over
// [0,1]^2; degenerate swaps the second coordinate for a copy of the first.
struct PlanarEidData {
    std::vector<std::unique_ptr<MetricGraph>> graphs;  // stages keep references
    std::vector<EidStage> stages;
    double density_cap = 0.0;
};
PlanarEidData make_planar_eid_data(const std::vector<Eigen::Index>& counts, bool degenerate);
double planar_density_cap();
double planar_bin_factor();

// Worst interior-bin relative error of the pushforward of Gamma<f> against
// the x-space change-of-variables quadrature, f(x) = x + 0.15 x(1-x)(2-x).
struct ScalarBinwise {
    double worst_rel_error = 0.0;
    long interior_bins = 0;
};
ScalarBinwise scalar_binwise_check(Eigen::Index points);

// Energy mass of the flattening sequence near the image of the Cantor set:
// mass(U_eps) / length(U_eps) for eps = 3^{-4}..3^{-8}.
struct CantorCheck {
    std::vector<double> eps;
    std::vector<double> mass;
    std::vector<double> length;
    std::vector<double> ratios;
    double spread = 0.0;  // max ratio / min ratio
    bool pass = false;    // ratios in [0.9, 1.0] and spread <= 1.1
};
CantorCheck cantor_neighborhood_check(int level = 8, int grid_mult = 24);

// Worst relative gap across random graphs for E(f,g) + <Af,g>_mu = 0 and the
// three-route boundary agreement with an affine test function.
double currents_identity_worst_gap(long graphs, Eigen::Index max_vertices, std::uint64_t seed);

// n = 2 currents from the planar map on one grid, probed against the binned
// pushforward of Lambda_phi.
DrReport planar_dr_check(Eigen::Index count, double bin_side);

}  // namespace eidlab
