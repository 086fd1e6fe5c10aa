#pragma once

#include <Eigen/Core>
#include <array>
#include <utility>
#include <vector>

#include "eidlab/energy_form.hpp"
#include "eidlab/measure.hpp"
#include "eidlab/metric_graph.hpp"
#include "eidlab/rng.hpp"

namespace eidlab {

// Level-m Sierpinski gasket approximation. Cell edges carry conductance
// (5/3)^m, so the energy of a harmonic function is level-independent.
// midpoint_rules replays the construction: entry (w, a, b, c) says vertex w
// is the midpoint of (a, b) opposite c and takes value (2va + 2vb + vc)/5
// under harmonic extension. Rules are ordered so parents precede children.
struct GasketLevel {
    int m;
    MetricGraph graph;
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 3> cells;  // 3^m rows, corner ids
    std::array<Eigen::Index, 3> boundary;
    std::vector<std::array<Eigen::Index, 4>> midpoint_rules;
};

// Throws when m exceeds level_cap; the cap guards desk-scale memory.
GasketLevel sg_graph(int m, int level_cap = 9);

VertexFn harmonic_extension(const GasketLevel& lvl, const Eigen::Vector3d& boundary_values);

// sum_edges (5/3)^m (f(u)-f(v)) (g(u)-g(v)), whole graph or one cell.
double sg_energy(const GasketLevel& lvl, const VertexFn& f);
double sg_cell_energy(const GasketLevel& lvl, Eigen::Index cell, const VertexFn& f,
                      const VertexFn& g);

// Harmonic pair with unit energies and zero cross-energy, extended from the
// boundary seeds (2,-1,-1)/sqrt(18) and (0,1,-1)/sqrt(6).
std::pair<VertexFn, VertexFn> kusuoka_pair(const GasketLevel& lvl);
// nu = Gamma<h1> + Gamma<h2> vertexwise (edge halves split to endpoints);
// total mass 2 by construction.
Measure kusuoka_measure(const GasketLevel& lvl);
// Per-cell nu mass (each edge lies in exactly one cell, so these sum to 2).
Eigen::VectorXd cell_nu_masses(const GasketLevel& lvl, const VertexFn& h1, const VertexFn& h2);

// Small/large eigenvalue ratio of the 2x2 carre du champ of (h1, h2).
// Vertexwise rows feed the tau summary; cellwise rows are the detail table.
struct EigenratioProfile {
    std::vector<double> taus;
    std::vector<double> fraction_below;  // nu-mass fraction with vertex ratio < tau
    struct CellRow {
        int m;
        Eigen::Index cell;
        double ratio;
        double nu_mass;
    };
    std::vector<CellRow> cells;
};

EigenratioProfile eigenratio_profile(const GasketLevel& lvl,
                                     const std::vector<double>& taus = {0.2, 0.1, 0.05, 0.01});

// Rank statistic of tuple carre du champ matrices: per site, the maximal
// thresholded rank over tuples (eigenvalues above threshold * lambda_max
// count); the estimate is the smallest rank whose nu-sublevel set carries at
// least `quantile` of the mass. esssup_rank ignores the quantile.
struct MdimResult {
    int dimension = 0;
    int esssup_rank = 0;
    std::vector<double> rank_mass;  // nu mass per rank value 0..tuple_size
};

// Cell-basis estimator on the gasket.
MdimResult estimate_martingale_dimension(const GasketLevel& lvl,
                                         const std::vector<std::vector<VertexFn>>& tuples,
                                         double threshold = 0.05, double quantile = 0.99);
// Vertex-basis estimator for arbitrary bilinear forms (control geometries).
MdimResult estimate_martingale_dimension(const PEnergyForm& form, const Measure& nu,
                                         const std::vector<std::vector<VertexFn>>& tuples,
                                         double threshold = 0.05, double quantile = 0.99);

// The orthonormal pair plus random unit singletons a h1 + b h2.
std::vector<std::vector<VertexFn>> mdim_tuples(const GasketLevel& lvl, Eigen::Index singletons,
                                               CounterRng& rng);

// dim <= d_H / alpha for alpha-Holder martingale coordinates.
struct HolderCheck {
    double d_h;
    double alpha;
    int estimate;
    double bound;
    bool pass;
};
HolderCheck holder_bound_check(double d_h, double alpha, int estimate);

// nu-mass of the lightest ceil(fraction * cells) cells; decay in m witnesses
// that nu sees the cells very unevenly, unlike the self-similar measure.
double light_cell_mass(const Eigen::VectorXd& cell_masses, double fraction = 0.1);

}  // namespace eidlab
