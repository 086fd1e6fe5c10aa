#include "eidlab/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "eidlab/error.hpp"

namespace eidlab {

namespace {

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* who) {
    bool same = a.dim() == b.dim() && a.counts == b.counts && a.stencil == b.stencil &&
                (a.lo - b.lo).lpNorm<Eigen::Infinity>() == 0.0 &&
                (a.hi - b.hi).lpNorm<Eigen::Infinity>() == 0.0;
    require(same, std::string(who) + ": fields live on different grids");
}

struct PhysOffset {
    Eigen::VectorXi idx;
    double len;
};

std::vector<PhysOffset> physical_offsets(const GridSpec& spec) {
    Eigen::VectorXd h = spec.spacing();
    std::vector<PhysOffset> out;
    for (const Eigen::VectorXi& o : stencil_offsets(spec.stencil, spec.dim())) {
        double s = 0.0;
        for (Eigen::Index a = 0; a < spec.dim(); ++a) s += (o[a] * h[a]) * (o[a] * h[a]);
        out.push_back({o, std::sqrt(s)});
    }
    return out;
}

bool in_bounds(const GridSpec& spec, const Eigen::VectorXi& idx) {
    for (Eigen::Index a = 0; a < spec.dim(); ++a)
        if (idx[a] < 0 || idx[a] >= spec.counts[a]) return false;
    return true;
}

}  // namespace

GridField asymptotic_lipschitz(const GridField& f, double r) {
    f.validate();
    const GridSpec& spec = f.spec;
    Eigen::VectorXd h = spec.spacing();
    require(r >= h.maxCoeff() * (1.0 - 1e-12),
            "asymptotic_lipschitz: radius below the grid spacing");

    Eigen::VectorXi window(spec.dim());
    for (Eigen::Index a = 0; a < spec.dim(); ++a)
        window[a] = static_cast<int>(std::floor(r / h[a] + 1e-9));

    GridField out{spec, Eigen::VectorXd::Zero(spec.point_count())};
    const double r_tol = r * (1.0 + 1e-12);
    for (Eigen::Index v = 0; v < spec.point_count(); ++v) {
        Eigen::VectorXi c = spec.unflatten(v);
        Eigen::VectorXd x = spec.point(v);
        std::vector<Eigen::Index> ball;
        Eigen::VectorXi idx = c;
        // Walk the index window around c, keep points inside the ball.
        std::function<void(Eigen::Index)> walk = [&](Eigen::Index axis) {
            if (axis == spec.dim()) {
                if (!in_bounds(spec, idx)) return;
                Eigen::Index flat = spec.flatten(idx);
                if ((spec.point(flat) - x).norm() <= r_tol) ball.push_back(flat);
                return;
            }
            for (int d = -window[axis]; d <= window[axis]; ++d) {
                idx[axis] = c[axis] + d;
                walk(axis + 1);
            }
            idx[axis] = c[axis];
        };
        walk(0);
        double best = 0.0;
        for (std::size_t i = 0; i < ball.size(); ++i)
            for (std::size_t j = i + 1; j < ball.size(); ++j) {
                double dist = (spec.point(ball[i]) - spec.point(ball[j])).norm();
                if (dist == 0.0) continue;
                double slope = std::abs(f.values[ball[i]] - f.values[ball[j]]) / dist;
                if (slope > best) best = slope;
            }
        out.values[v] = best;
    }
    return out;
}

GridField variational_approx(const GridField& f, const GridField& g, double radius) {
    f.validate();
    g.validate();
    require_same_spec(f.spec, g.spec, "variational_approx");
    require(radius > 0.0, "variational_approx: radius must be positive");
    for (Eigen::Index v = 0; v < g.values.size(); ++v)
        require(g.values[v] > 0.0, "variational_approx: gradient field must be strictly positive");

    const GridSpec& spec = f.spec;
    const Eigen::Index nv = spec.point_count();
    std::vector<PhysOffset> offs = physical_offsets(spec);

    Eigen::VectorXd dist = Eigen::VectorXd::Constant(nv, std::numeric_limits<double>::infinity());
    using Entry = std::pair<double, Eigen::Index>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

    const double r_tol = radius * (1.0 + 1e-12) + 1e-12;
    long sources = 0;
    for (Eigen::Index v = 0; v < nv; ++v) {
        if (spec.point(v).norm() <= r_tol) {
            dist[v] = f.values[v];
            heap.emplace(dist[v], v);
            ++sources;
        }
    }
    require(sources > 0, "variational_approx: no grid points inside the source ball");

    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        Eigen::VectorXi cu = spec.unflatten(u);
        for (const PhysOffset& o : offs) {
            Eigen::VectorXi cv = cu + o.idx;
            if (!in_bounds(spec, cv)) continue;
            Eigen::Index v = spec.flatten(cv);
            double nd = d + o.len * 0.5 * (g.values[u] + g.values[v]);
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }

    GridField out{spec, f.values.cwiseMin(dist)};
    return out;
}

double edge_lipschitz_excess(const GridField& fi, const GridField& g) {
    require_same_spec(fi.spec, g.spec, "edge_lipschitz_excess");
    const GridSpec& spec = fi.spec;
    double worst = -std::numeric_limits<double>::infinity();
    std::vector<PhysOffset> offs = physical_offsets(spec);
    for (Eigen::Index u = 0; u < spec.point_count(); ++u) {
        Eigen::VectorXi cu = spec.unflatten(u);
        for (const PhysOffset& o : offs) {
            Eigen::VectorXi cv = cu + o.idx;
            if (!in_bounds(spec, cv)) continue;
            Eigen::Index v = spec.flatten(cv);
            if (v < u) continue;  // each undirected edge once
            double slope = std::abs(fi.values[u] - fi.values[v]) / o.len;
            double cap = std::max(g.values[u], g.values[v]);
            worst = std::max(worst, slope - cap);
        }
    }
    return worst;
}

GridField inf_convolution(const GridField& g, double k) {
    g.validate();
    require(k > 0.0, "inf_convolution: k must be positive");
    const GridSpec& spec = g.spec;
    Eigen::VectorXd h = spec.spacing();
    const double g_min = g.values.minCoeff();
    const double g_max = g.values.maxCoeff();

    // Any winning offset satisfies k * |o| <= g_max - g_min.
    double max_rad = (g_max - g_min) / k;
    Eigen::VectorXi span(spec.dim());
    for (Eigen::Index a = 0; a < spec.dim(); ++a) {
        long cells = static_cast<long>(std::floor(max_rad / h[a])) + 1;
        span[a] = static_cast<int>(std::min<long>(cells, spec.counts[a] - 1));
    }

    struct Off {
        Eigen::VectorXi idx;
        double len;
    };
    std::vector<Off> offs;
    Eigen::VectorXi o = Eigen::VectorXi::Zero(spec.dim());
    std::function<void(Eigen::Index)> gen = [&](Eigen::Index axis) {
        if (axis == spec.dim()) {
            double s = 0.0;
            for (Eigen::Index a = 0; a < spec.dim(); ++a) s += (o[a] * h[a]) * (o[a] * h[a]);
            double len = std::sqrt(s);
            if (len <= max_rad + h.maxCoeff()) offs.push_back({o, len});
            return;
        }
        for (int d = -span[axis]; d <= span[axis]; ++d) {
            o[axis] = d;
            gen(axis + 1);
        }
        o[axis] = 0;
    };
    gen(0);
    std::sort(offs.begin(), offs.end(), [](const Off& a, const Off& b) {
        if (a.len != b.len) return a.len < b.len;
        return std::lexicographical_compare(a.idx.data(), a.idx.data() + a.idx.size(),
                                            b.idx.data(), b.idx.data() + b.idx.size());
    });

    GridField out{spec, Eigen::VectorXd::Zero(spec.point_count())};
    for (Eigen::Index x = 0; x < spec.point_count(); ++x) {
        Eigen::VectorXi cx = spec.unflatten(x);
        double best = g.values[x];  // offset 0 is always first
        for (const Off& of : offs) {
            if (k * of.len >= best - g_min) break;
            Eigen::VectorXi cy = cx + of.idx;
            if (!in_bounds(spec, cy)) continue;
            double cand = g.values[spec.flatten(cy)] + k * of.len;
            if (cand < best) best = cand;
        }
        out.values[x] = best;
    }
    return out;
}

std::vector<LadderLogRow> variational_ladder(const GridField& f,
                                             const std::vector<GridField>& ladder,
                                             double radius) {
    std::vector<LadderLogRow> out;
    int i = 0;
    for (const GridField& g : ladder) {
        GridField fi = variational_approx(f, g, radius);
        double gap = (f.values - fi.values).maxCoeff();
        double slack = std::max(0.0, edge_lipschitz_excess(fi, g));
        out.push_back({++i, gap, slack});
    }
    return out;
}

}  // namespace eidlab
