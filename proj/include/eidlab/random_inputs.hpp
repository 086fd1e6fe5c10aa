#pragma once

#include <Eigen/Core>

#include "eidlab/measure.hpp"
#include "eidlab/metric_graph.hpp"
#include "eidlab/rng.hpp"

namespace eidlab {

// Random spanning tree plus extra chords; always connected. Conductances are
// drawn log-uniform in [0.1, 10] so weight scales vary across trials.
MetricGraph random_connected_graph(Eigen::Index n_vertices, Eigen::Index extra_edges,
                                   CounterRng& rng);

// Vertex weights uniform in [0.5, 2].
Measure random_positive_measure(Eigen::Index n_vertices, CounterRng& rng);

// Standard normal entries.
VertexFn random_vertex_fn(Eigen::Index n_vertices, CounterRng& rng);

// Each vertex kept with probability one half; may be empty.
VertexSet random_subset(Eigen::Index n_vertices, CounterRng& rng);
VertexSet random_nonempty_subset(Eigen::Index n_vertices, CounterRng& rng);

}  // namespace eidlab
