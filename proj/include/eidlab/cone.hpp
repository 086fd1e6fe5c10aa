#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "eidlab/grid.hpp"
#include "eidlab/polyline.hpp"

namespace eidlab {

// C(v, theta) = { w : <v, w> >= cos(theta) |w| }. The origin belongs to the
// closed cone and never to the interior.
struct Cone {
    Eigen::VectorXd axis;
    double theta;

    Cone(Eigen::VectorXd v, double half_angle);
    bool contains(const Eigen::VectorXd& w) const;
    bool interior(const Eigen::VectorXd& w) const;
    // w in C(interior) or -w in C(interior).
    bool double_open(const Eigen::VectorXd& w) const;
};

using PointOracle = std::function<bool(const Eigen::VectorXd&)>;

// Per-curve violation length: the arclength of sampled chords whose BOTH
// endpoints lie in K and whose direction falls inside the open double cone.
// A single transversal crossing therefore contributes nothing, while a
// subcurve running inside K along the cone axis is charged in full.
std::vector<double> cone_null_violation(const PointOracle& k_set, const Cone& cone,
                                        const std::vector<Polyline>& curves);

// g = |grad f| off K; on K the sup of |<grad f, w>| over sampled directions
// outside both open cones. The sample set always contains the exact
// cone-boundary ring, so the aligned linear case reproduces sin(eps) at
// rounding accuracy rather than first order in the angular spacing.
GridField cone_upper_gradient(const GridSpec& spec,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                              const PointOracle& k_set, const Cone& cone,
                              Eigen::Index n_dirs = 720);

// Certified cone-null examples: the set, a grid it is aligned with, and the
// cone it is null for. Alignment makes membership of grid points exact, so a
// zero violation count is a hard assertion, not a tolerance.
struct ConeNullExample {
    std::string name;
    GridSpec spec;
    PointOracle membership;
    Cone cone;
};

// {x1 = c} inside the unit square, cone about e1.
ConeNullExample corpus_hyperplane();
// Graph of a slope-1/5 line on a 5:1 anisotropic lattice, cone about e2.
ConeNullExample corpus_lipschitz_graph();
// Vertical lines over the endpoints of the level-4 middle-thirds intervals,
// sampled on a 3x-refined triadic lattice, cone about e1. Stencil steps span
// at most 2 cells while distinct lines are 3 cells apart, so no chord ever
// joins two lines.
ConeNullExample corpus_cantor_lines();

std::vector<ConeNullExample> cone_null_corpus();

}  // namespace eidlab
