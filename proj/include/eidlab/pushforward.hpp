#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eidlab/binning.hpp"
#include "eidlab/energy_form.hpp"
#include "eidlab/grid.hpp"
#include "eidlab/measure.hpp"
#include "eidlab/sphere.hpp"

namespace eidlab {

// phi_*(1_A . w): box mass = sum of w over vertices of A mapped into the box.
BinnedMeasure pushforward(const std::vector<VertexFn>& phi, const Measure& w,
                          const VertexSet& a, double h,
                          const Eigen::VectorXd& origin = Eigen::VectorXd());

// s_C(h) per ladder entry: mass exceeding an absolutely continuous envelope
// of density C. Ladder must be strictly decreasing.
std::vector<std::pair<double, double>> singular_mass_profile(
    const std::vector<VertexFn>& phi, const Measure& w, const VertexSet& a,
    const std::vector<double>& ladder, double density_cap,
    const Eigen::VectorXd& origin = Eigen::VectorXd());

// One graph discretization in a refinement sequence. The pushed measure is
// always Lambda_phi computed from the stage's form. `spec` is optional; when
// every stage carries one, nesting is validated.
struct EidStage {
    PEnergyForm form;
    std::vector<VertexFn> phi;
    VertexSet a;
    double mesh;
    std::optional<GridSpec> spec;
};

struct EidConfig {
    double h_factor = 0.16;      // box side = h_factor * sqrt(mesh)
    double density_cap = 1.0;    // C, from the experiment's density oracle
    double singular_floor = 0.5; // "singular" needs s >= floor * total at every stage
    double min_decrease = 0.4;   // "consistent-with-EID" needs this relative drop per step
    const SphereSampler* sampler = nullptr;  // enables the independence restriction
    long i_max = 64;
};

struct EidReportRow {
    double graph_mesh, h, c, singular_mass, total_mass;
    std::string verdict;  // the experiment-level verdict, repeated per row
};

struct EidReport {
    std::vector<EidReportRow> rows;
    std::string verdict;  // consistent-with-EID | singular | inconclusive
    bool degenerate;      // independence restriction came up empty somewhere
};

// Restricts A to the sampled independence set (when a sampler is configured),
// runs the singular-mass profile at matched box sides across the refinement
// sequence, and classifies the trend. When the restriction is empty the
// profile runs on the raw A and the verdict can only be "singular" or
// "inconclusive": with the independence hypothesis void, no statement about
// absolute continuity is available.
EidReport eid_experiment(const std::vector<EidStage>& stages, const EidConfig& config);

}  // namespace eidlab
