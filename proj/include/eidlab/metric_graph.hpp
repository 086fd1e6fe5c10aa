#pragma once

#include <Eigen/Core>
#include <vector>

#include "eidlab/error.hpp"

namespace eidlab {

enum class MetricMode { GraphShortestPath, EuclideanEmbedding };

struct Edge {
    Eigen::Index u, v;  // normalized u < v
    double c;           // conductance, > 0
};

// Finite weighted graph, optionally embedded in R^n. Vertices are 0..V-1.
// Edge lengths for the path metric are Euclidean when an embedding exists and
// 1 per hop otherwise; conductances only enter energies.
class MetricGraph {
public:
    MetricGraph(Eigen::Index n_vertices, std::vector<Edge> edges,
                Eigen::MatrixXd coords = Eigen::MatrixXd(),
                MetricMode mode = MetricMode::GraphShortestPath);

    Eigen::Index vertex_count() const { return nv_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_coords() const { return coords_.size() > 0; }
    Eigen::Index dim() const { return coords_.cols(); }
    const Eigen::MatrixXd& coords() const { return coords_; }
    Eigen::VectorXd point(Eigen::Index v) const { return coords_.row(v); }
    MetricMode metric_mode() const { return mode_; }

    // CSR adjacency: for vertex v, neighbors are adj_[adj_off_[v]..adj_off_[v+1]).
    struct Arc {
        Eigen::Index to;
        double c;
        double length;
    };
    const std::vector<Arc>& arcs() const { return adj_; }
    std::pair<Eigen::Index, Eigen::Index> arc_range(Eigen::Index v) const {
        return {adj_off_[v], adj_off_[v + 1]};
    }
    Eigen::Index degree(Eigen::Index v) const { return adj_off_[v + 1] - adj_off_[v]; }

    double edge_length(const Edge& e) const;

    // Metric per mode: Dijkstra over edge lengths, or straight-line distance.
    double distance(Eigen::Index u, Eigen::Index v) const;
    // Shortest-path distances from a source set regardless of mode; sources may
    // carry initial potentials (multi-source Dijkstra).
    Eigen::VectorXd path_distances(const std::vector<Eigen::Index>& sources,
                                   const Eigen::VectorXd& potentials = Eigen::VectorXd()) const;
    double euclidean(Eigen::Index u, Eigen::Index v) const;

    // One-step neighborhood of a set: the set plus all adjacent vertices.
    std::vector<Eigen::Index> closed_neighborhood(const std::vector<Eigen::Index>& a) const;

private:
    Eigen::Index nv_;
    std::vector<Edge> edges_;
    Eigen::MatrixXd coords_;
    MetricMode mode_;
    std::vector<Eigen::Index> adj_off_;
    std::vector<Arc> adj_;
};

}  // namespace eidlab
