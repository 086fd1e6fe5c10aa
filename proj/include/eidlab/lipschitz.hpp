#pragma once

#include <vector>

#include "eidlab/grid.hpp"

namespace eidlab {

// At each grid point, the largest pairwise slope |f(p)-f(q)|/|p-q| over
// sample pairs inside the Euclidean ball B(x, r). r must reach at least one
// neighbor per axis.
GridField asymptotic_lipschitz(const GridField& f, double r);

// f_i(x) = min( f(x), min over sources s of f(s) + shortest stencil-path cost
// from s to x ), sources = grid points in the closed ball B(0,R), edge cost =
// |u - v| * (g(u) + g(v)) / 2. Deterministic tie-break on (cost, index).
// Requires g > 0 everywhere; on edges the result never oscillates faster than
// the larger endpoint of g (checked by edge_lipschitz_excess).
GridField variational_approx(const GridField& f, const GridField& g, double radius);

// max over stencil edges of |df_i| / |u-v| - max(g(u), g(v)); nonpositive up
// to rounding for fields produced by variational_approx.
double edge_lipschitz_excess(const GridField& fi, const GridField& g);

// Exact discrete inf-convolution: out(x) = min_y ( g(y) + k * |x - y| ) over
// all grid points. Offsets are scanned in increasing distance and the scan
// stops once k * |offset| can no longer beat the incumbent, so the result is
// the exact minimum, not a sweep approximation.
GridField inf_convolution(const GridField& g, double k);

// Convergence log for a monotone gradient ladder: per rung, the sup of f - f_i
// and the (nonnegative part of the) edge Lipschitz excess relative to g_i.
struct LadderLogRow {
    int i;
    double sup_gap;
    double lip_bound_slack;
};

std::vector<LadderLogRow> variational_ladder(const GridField& f,
                                             const std::vector<GridField>& ladder,
                                             double radius);

}  // namespace eidlab
