#include "eidlab/random_inputs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "eidlab/error.hpp"

namespace eidlab {

MetricGraph random_connected_graph(Eigen::Index n_vertices, Eigen::Index extra_edges,
                                   CounterRng& rng) {
    require(n_vertices >= 2, "random_connected_graph needs at least two vertices");
    std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
    std::vector<Edge> edges;
    auto conductance = [&] { return std::pow(10.0, rng.uniform(-1.0, 1.0)); };
    for (Eigen::Index v = 1; v < n_vertices; ++v) {
        const Eigen::Index u = static_cast<Eigen::Index>(rng.next_below(
            static_cast<std::uint64_t>(v)));
        seen.insert({u, v});
        edges.push_back({u, v, conductance()});
    }
    for (Eigen::Index k = 0; k < extra_edges; ++k) {
        const Eigen::Index u = static_cast<Eigen::Index>(rng.next_below(
            static_cast<std::uint64_t>(n_vertices)));
        const Eigen::Index v = static_cast<Eigen::Index>(rng.next_below(
            static_cast<std::uint64_t>(n_vertices)));
        if (u == v) continue;
        const Eigen::Index a = std::min(u, v), b = std::max(u, v);
        if (!seen.insert({a, b}).second) continue;
        edges.push_back({a, b, conductance()});
    }
    return MetricGraph(n_vertices, std::move(edges));
}

Measure random_positive_measure(Eigen::Index n_vertices, CounterRng& rng) {
    Eigen::VectorXd w(n_vertices);
    for (Eigen::Index i = 0; i < n_vertices; ++i) w[i] = rng.uniform(0.5, 2.0);
    return Measure(std::move(w));
}

VertexFn random_vertex_fn(Eigen::Index n_vertices, CounterRng& rng) {
    VertexFn f(n_vertices);
    for (Eigen::Index i = 0; i < n_vertices; ++i) f[i] = rng.next_normal();
    return f;
}

VertexSet random_subset(Eigen::Index n_vertices, CounterRng& rng) {
    auto mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(n_vertices, false).eval();
    for (Eigen::Index i = 0; i < n_vertices; ++i) mask[i] = (rng.next_u64() & 1u) != 0;
    return VertexSet(std::move(mask));
}

VertexSet random_nonempty_subset(Eigen::Index n_vertices, CounterRng& rng) {
    VertexSet s = random_subset(n_vertices, rng);
    if (s.count() == 0) {
        auto mask = s.mask();
        mask[static_cast<Eigen::Index>(rng.next_below(
            static_cast<std::uint64_t>(n_vertices)))] = true;
        return VertexSet(std::move(mask));
    }
    return s;
}

}  // namespace eidlab
