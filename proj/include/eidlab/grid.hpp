#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "eidlab/metric_graph.hpp"

namespace eidlab {

enum class Stencil { Axis, King, KnightExtended };

// Axis-aligned point lattice: counts[a] points on [lo[a], hi[a]] per axis,
// row-major flattening with the last axis fastest.
struct GridSpec {
    Eigen::VectorXd lo, hi;
    Eigen::VectorXi counts;
    Stencil stencil = Stencil::Axis;

    Eigen::Index dim() const { return counts.size(); }
    Eigen::Index point_count() const;
    Eigen::VectorXd spacing() const;
    double min_spacing() const { return spacing().minCoeff(); }
    Eigen::Index flatten(const Eigen::VectorXi& idx) const;
    Eigen::VectorXi unflatten(Eigen::Index flat) const;
    Eigen::VectorXd point(Eigen::Index flat) const;
    Eigen::VectorXi nearest_index(const Eigen::VectorXd& x) const;
    void validate() const;
};

// Uniform 1D helper.
GridSpec make_grid_1d(double lo, double hi, Eigen::Index count);
// Uniform nD cube helper with equal counts per axis.
GridSpec make_grid_cube(Eigen::Index dim, double lo, double hi, Eigen::Index count,
                        Stencil stencil);

// Integer neighbor offsets of the stencil (both signs).
std::vector<Eigen::VectorXi> stencil_offsets(Stencil s, Eigen::Index dim);

// Exact worst-case ratio of stencil path metric to Euclidean distance for the
// given spacings: the chamfer norm is the support function of the polytope
// {y : <y, w_i> <= |w_i|}, so the factor is the largest vertex norm of that
// polytope (enumerated over n-subsets of active constraints).
double stencil_anisotropy(Stencil s, const Eigen::VectorXd& spacing);
double stencil_anisotropy(Stencil s, Eigen::Index dim);  // unit spacing

using ConductanceFn =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&, double)>;

// Stencil graph over the lattice; conductances come from the callback
// (stored verbatim) or default to 1.
MetricGraph build_grid_graph(const GridSpec& spec, const ConductanceFn& conductance = {});

// The h^{n-p} conductance scaling used by the grid energy forms.
ConductanceFn grid_conductance(Eigen::Index dim, double p);

// Scalar samples over a grid.
struct GridField {
    GridSpec spec;
    Eigen::VectorXd values;

    double operator[](Eigen::Index flat) const { return values[flat]; }
    double at(const Eigen::VectorXi& idx) const { return values[spec.flatten(idx)]; }
    double at_point(const Eigen::VectorXd& x) const {  // nearest sample
        return values[spec.flatten(spec.nearest_index(x))];
    }
    void validate() const;
};

GridField make_grid_field(const GridSpec& spec,
                          const std::function<double(const Eigen::VectorXd&)>& f);

// Text format: one header line "n lo_1..lo_n hi_1..hi_n count_1..count_n",
// then row-major values, one per line.
void save_grid_field(const GridField& f, const std::string& path);
GridField load_grid_field(const std::string& path);

// True when fine refines coarse in place: same box, same stencil, and each
// coarse lattice point is a fine lattice point.
bool is_nested_refinement(const GridSpec& coarse, const GridSpec& fine);

}  // namespace eidlab
