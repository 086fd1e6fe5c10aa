#pragma once

#include <string>

#include "eidlab/measure.hpp"
#include "eidlab/metric_graph.hpp"

namespace eidlab {

struct GraphBundle {
    MetricGraph graph;
    Measure mu;
};

// Text format, one record per line, '#' starts a comment:
//   [graph]    n <vertex_count>   (optional; inferred from edges otherwise)
//   [edges]    u v c              (0-based endpoints, conductance c > 0)
//   [measure]  v w                (unlisted vertices get weight 0)
//   [coords]   v x1 .. xd         (one row per vertex, any order, full cover)
// Duplicate edges have their conductances summed; duplicate measure rows sum.
GraphBundle load_graph(const std::string& path);

// Canonical form: sections in fixed order, edges sorted by (u, v),
// numbers printed with %.17g so save/load round-trips exactly.
void save_graph(const std::string& path, const MetricGraph& g, const Measure& mu);

}  // namespace eidlab
