#include "eidlab/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace eidlab {

MetricGraph::MetricGraph(Eigen::Index n_vertices, std::vector<Edge> edges,
                         Eigen::MatrixXd coords, MetricMode mode)
    : nv_(n_vertices), coords_(std::move(coords)), mode_(mode) {
    require(nv_ >= 1, "MetricGraph: at least one vertex required");
    if (coords_.size() > 0)
        require(coords_.rows() == nv_, "MetricGraph: coords row count != vertex count");
    if (mode_ == MetricMode::EuclideanEmbedding)
        require(coords_.size() > 0, "MetricGraph: euclidean mode needs coords");

    // Normalize to u < v and merge duplicates by summing conductances.
    std::map<std::pair<Eigen::Index, Eigen::Index>, double> merged;
    for (const Edge& e : edges) {
        require(e.u >= 0 && e.u < nv_ && e.v >= 0 && e.v < nv_,
                "MetricGraph: edge endpoint out of range");
        require(e.u != e.v, "MetricGraph: self-loop at vertex " + std::to_string(e.u));
        require(e.c > 0.0, "MetricGraph: conductance must be positive");
        auto key = std::minmax(e.u, e.v);
        merged[key] += e.c;
    }
    edges_.reserve(merged.size());
    for (const auto& [k, c] : merged) edges_.push_back({k.first, k.second, c});

    adj_off_.assign(nv_ + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_off_[e.u + 1];
        ++adj_off_[e.v + 1];
    }
    for (Eigen::Index v = 0; v < nv_; ++v) adj_off_[v + 1] += adj_off_[v];
    adj_.resize(adj_off_[nv_]);
    std::vector<Eigen::Index> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (const Edge& e : edges_) {
        double len = edge_length(e);
        adj_[cursor[e.u]++] = {e.v, e.c, len};
        adj_[cursor[e.v]++] = {e.u, e.c, len};
    }
}

double MetricGraph::edge_length(const Edge& e) const {
    if (!has_coords()) return 1.0;
    return (coords_.row(e.u) - coords_.row(e.v)).norm();
}

double MetricGraph::euclidean(Eigen::Index u, Eigen::Index v) const {
    require(has_coords(), "MetricGraph: no embedding");
    return (coords_.row(u) - coords_.row(v)).norm();
}

Eigen::VectorXd MetricGraph::path_distances(const std::vector<Eigen::Index>& sources,
                                            const Eigen::VectorXd& potentials) const {
    require(!sources.empty(), "path_distances: empty source set");
    if (potentials.size() > 0)
        require(potentials.size() == static_cast<Eigen::Index>(sources.size()),
                "path_distances: potential count != source count");
    Eigen::VectorXd dist =
        Eigen::VectorXd::Constant(nv_, std::numeric_limits<double>::infinity());
    // Ties break on vertex index so runs are order-deterministic.
    using Item = std::pair<double, Eigen::Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        Eigen::Index v = sources[s];
        require(v >= 0 && v < nv_, "path_distances: source out of range");
        double d0 = potentials.size() > 0 ? potentials[s] : 0.0;
        if (d0 < dist[v]) {
            dist[v] = d0;
            pq.push({d0, v});
        }
    }
    std::vector<char> done(nv_, 0);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (done[v]) continue;
        done[v] = 1;
        for (Eigen::Index i = adj_off_[v]; i < adj_off_[v + 1]; ++i) {
            const Arc& a = adj_[i];
            double nd = d + a.length;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                pq.push({nd, a.to});
            }
        }
    }
    return dist;
}

double MetricGraph::distance(Eigen::Index u, Eigen::Index v) const {
    require(u >= 0 && u < nv_ && v >= 0 && v < nv_, "distance: vertex out of range");
    if (mode_ == MetricMode::EuclideanEmbedding) return euclidean(u, v);
    return path_distances({u})[v];
}

std::vector<Eigen::Index> MetricGraph::closed_neighborhood(
    const std::vector<Eigen::Index>& a) const {
    std::vector<char> in(nv_, 0);
    for (Eigen::Index v : a) {
        require(v >= 0 && v < nv_, "closed_neighborhood: vertex out of range");
        in[v] = 1;
    }
    for (Eigen::Index v : a)
        for (Eigen::Index i = adj_off_[v]; i < adj_off_[v + 1]; ++i) in[adj_[i].to] = 1;
    std::vector<Eigen::Index> out;
    for (Eigen::Index v = 0; v < nv_; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

}  // namespace eidlab
