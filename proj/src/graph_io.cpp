#include "eidlab/graph_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "eidlab/error.hpp"

namespace eidlab {

namespace {

std::string strip(const std::string& line) {
    std::string s = line;
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

GraphBundle load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);

    enum class Section { None, Graph, Edges, MeasureRows, Coords };
    Section section = Section::None;

    long declared_n = -1;
    std::vector<Edge> edges;
    std::vector<std::pair<long, double>> measure_rows;
    std::vector<std::pair<long, std::vector<double>>> coord_rows;

    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line == "[graph]") section = Section::Graph;
            else if (line == "[edges]") section = Section::Edges;
            else if (line == "[measure]") section = Section::MeasureRows;
            else if (line == "[coords]") section = Section::Coords;
            else throw ParseError("unknown section " + line, lineno);
            continue;
        }
        std::istringstream iss(line);
        switch (section) {
            case Section::None:
                throw ParseError("data before any section header", lineno);
            case Section::Graph: {
                std::string key;
                long n;
                if (!(iss >> key >> n) || key != "n")
                    throw ParseError("expected 'n <count>'", lineno);
                if (n <= 0) throw ParseError("vertex count must be positive", lineno);
                declared_n = n;
                break;
            }
            case Section::Edges: {
                long u, v;
                double c;
                if (!(iss >> u >> v >> c))
                    throw ParseError("expected 'u v c'", lineno);
                if (u < 0 || v < 0) throw ParseError("negative vertex index", lineno);
                edges.push_back({u, v, c});
                break;
            }
            case Section::MeasureRows: {
                long v;
                double w;
                if (!(iss >> v >> w))
                    throw ParseError("expected 'v w'", lineno);
                if (v < 0) throw ParseError("negative vertex index", lineno);
                measure_rows.emplace_back(v, w);
                break;
            }
            case Section::Coords: {
                long v;
                if (!(iss >> v)) throw ParseError("expected 'v x1 ... xn'", lineno);
                if (v < 0) throw ParseError("negative vertex index", lineno);
                std::vector<double> row;
                double x;
                while (iss >> x) row.push_back(x);
                if (row.empty()) throw ParseError("coordinate row has no coordinates", lineno);
                if (!coord_rows.empty() && coord_rows.front().second.size() != row.size())
                    throw ParseError("inconsistent coordinate dimension", lineno);
                coord_rows.emplace_back(v, std::move(row));
                break;
            }
        }
        std::string extra;
        if (section != Section::Coords && (iss >> extra))
            throw ParseError("trailing token '" + extra + "'", lineno);
    }

    long n = declared_n;
    if (n < 0) {
        for (const Edge& e : edges) n = std::max({n, e.u + 1, e.v + 1});
        for (const auto& [v, w] : measure_rows) n = std::max(n, v + 1);
        for (const auto& [v, row] : coord_rows) n = std::max(n, v + 1);
    }
    if (n <= 0) throw ParseError("graph file defines no vertices");

    Eigen::MatrixXd coords;
    if (!coord_rows.empty()) {
        const auto dim = static_cast<Eigen::Index>(coord_rows.front().second.size());
        coords.resize(n, dim);
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (const auto& [v, row] : coord_rows) {
            if (v >= n) throw ParseError("coordinate row references vertex beyond graph");
            if (seen[static_cast<std::size_t>(v)])
                throw ParseError("duplicate coordinate row for vertex " + std::to_string(v));
            seen[static_cast<std::size_t>(v)] = true;
            for (Eigen::Index a = 0; a < dim; ++a)
                coords(v, a) = row[static_cast<std::size_t>(a)];
        }
        if (static_cast<long>(coord_rows.size()) != n)
            throw ParseError("coordinate rows must cover every vertex");
    }

    Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
    for (const auto& [v, w] : measure_rows) {
        if (v >= n) throw ParseError("measure row references vertex beyond graph");
        weights[v] += w;
    }

    MetricMode mode = coords.size() ? MetricMode::EuclideanEmbedding
                                    : MetricMode::GraphShortestPath;
    return GraphBundle{MetricGraph(n, edges, coords, mode), Measure(weights)};
}

void save_graph(const std::string& path, const MetricGraph& g, const Measure& mu) {
    require(mu.size() == g.vertex_count(), "measure/graph size mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot open graph file for writing: " + path);

    out << "[graph]\n"
        << "n " << g.vertex_count() << "\n";

    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    out << "[edges]\n";
    for (const Edge& e : edges)
        out << e.u << " " << e.v << " " << fmt(e.c) << "\n";

    out << "[measure]\n";
    for (long v = 0; v < g.vertex_count(); ++v)
        out << v << " " << fmt(mu[v]) << "\n";

    if (g.coords().size()) {
        out << "[coords]\n";
        for (long v = 0; v < g.vertex_count(); ++v) {
            out << v;
            for (Eigen::Index a = 0; a < g.coords().cols(); ++a)
                out << " " << fmt(g.coords()(v, a));
            out << "\n";
        }
    }
    if (!out) throw Error("write failed: " + path);
}

}  // namespace eidlab
