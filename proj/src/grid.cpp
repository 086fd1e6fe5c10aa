#include "eidlab/grid.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eidlab/error.hpp"

namespace eidlab {

Eigen::Index GridSpec::point_count() const {
    Eigen::Index n = 1;
    for (Eigen::Index a = 0; a < dim(); ++a) n *= counts[a];
    return n;
}

Eigen::VectorXd GridSpec::spacing() const {
    Eigen::VectorXd h(dim());
    for (Eigen::Index a = 0; a < dim(); ++a)
        h[a] = counts[a] > 1 ? (hi[a] - lo[a]) / (counts[a] - 1) : 0.0;
    return h;
}

Eigen::Index GridSpec::flatten(const Eigen::VectorXi& idx) const {
    Eigen::Index flat = 0;
    for (Eigen::Index a = 0; a < dim(); ++a) {
        require(idx[a] >= 0 && idx[a] < counts[a], "GridSpec: index out of range");
        flat = flat * counts[a] + idx[a];
    }
    return flat;
}

Eigen::VectorXi GridSpec::unflatten(Eigen::Index flat) const {
    Eigen::VectorXi idx(dim());
    for (Eigen::Index a = dim() - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % counts[a]);
        flat /= counts[a];
    }
    return idx;
}

Eigen::VectorXd GridSpec::point(Eigen::Index flat) const {
    Eigen::VectorXi idx = unflatten(flat);
    Eigen::VectorXd h = spacing();
    Eigen::VectorXd x(dim());
    for (Eigen::Index a = 0; a < dim(); ++a) x[a] = lo[a] + idx[a] * h[a];
    return x;
}

Eigen::VectorXi GridSpec::nearest_index(const Eigen::VectorXd& x) const {
    require(x.size() == dim(), "GridSpec: point dimension mismatch");
    Eigen::VectorXd h = spacing();
    Eigen::VectorXi idx(dim());
    for (Eigen::Index a = 0; a < dim(); ++a) {
        int i = h[a] > 0 ? static_cast<int>(std::lround((x[a] - lo[a]) / h[a])) : 0;
        idx[a] = std::clamp(i, 0, counts[a] - 1);
    }
    return idx;
}

void GridSpec::validate() const {
    require(dim() >= 1, "GridSpec: empty");
    require(lo.size() == dim() && hi.size() == dim(), "GridSpec: lo/hi dimension mismatch");
    for (Eigen::Index a = 0; a < dim(); ++a) {
        require(counts[a] >= 2, "GridSpec: need at least 2 points per axis");
        require(hi[a] > lo[a], "GridSpec: hi must exceed lo");
    }
}

GridSpec make_grid_1d(double lo, double hi, Eigen::Index count) {
    GridSpec s;
    s.lo = Eigen::VectorXd::Constant(1, lo);
    s.hi = Eigen::VectorXd::Constant(1, hi);
    s.counts = Eigen::VectorXi::Constant(1, static_cast<int>(count));
    s.stencil = Stencil::Axis;
    s.validate();
    return s;
}

GridSpec make_grid_cube(Eigen::Index dim, double lo, double hi, Eigen::Index count,
                        Stencil stencil) {
    GridSpec s;
    s.lo = Eigen::VectorXd::Constant(dim, lo);
    s.hi = Eigen::VectorXd::Constant(dim, hi);
    s.counts = Eigen::VectorXi::Constant(dim, static_cast<int>(count));
    s.stencil = stencil;
    s.validate();
    return s;
}

namespace {

void gen_offsets(Stencil s, Eigen::Index dim, std::vector<Eigen::VectorXi>& out) {
    if (s == Stencil::Axis) {
        for (Eigen::Index a = 0; a < dim; ++a)
            for (int sgn : {-1, 1}) {
                Eigen::VectorXi o = Eigen::VectorXi::Zero(dim);
                o[a] = sgn;
                out.push_back(o);
            }
        return;
    }
    // king: all nonzero {-1,0,1}^n
    Eigen::Index total = 1;
    for (Eigen::Index a = 0; a < dim; ++a) total *= 3;
    for (Eigen::Index code = 0; code < total; ++code) {
        Eigen::VectorXi o(dim);
        Eigen::Index c = code;
        for (Eigen::Index a = 0; a < dim; ++a) {
            o[a] = static_cast<int>(c % 3) - 1;
            c /= 3;
        }
        if (o.cwiseAbs().sum() > 0) out.push_back(o);
    }
    if (s == Stencil::KnightExtended) {
        // all signed permutations of (1, 2, 0, ..., 0)
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = 0; b < dim; ++b) {
                if (a == b) continue;
                for (int sa : {-1, 1})
                    for (int sb : {-2, 2}) {
                        Eigen::VectorXi o = Eigen::VectorXi::Zero(dim);
                        o[a] = sa;
                        o[b] = sb;
                        out.push_back(o);
                    }
            }
    }
}

}  // namespace

std::vector<Eigen::VectorXi> stencil_offsets(Stencil s, Eigen::Index dim) {
    require(dim >= 1, "stencil_offsets: dimension must be positive");
    std::vector<Eigen::VectorXi> out;
    gen_offsets(s, dim, out);
    return out;
}

double stencil_anisotropy(Stencil s, const Eigen::VectorXd& spacing) {
    const Eigen::Index n = spacing.size();
    require(n >= 1, "stencil_anisotropy: empty spacing");
    for (Eigen::Index a = 0; a < n; ++a)
        require(spacing[a] > 0, "stencil_anisotropy: spacing must be positive");
    auto offs = stencil_offsets(s, n);
    if (n == 1) return 1.0;

    // Step vectors and constraint rows <y, w> <= |w|.
    std::vector<Eigen::VectorXd> w;
    w.reserve(offs.size());
    for (const auto& o : offs) w.push_back(o.cast<double>().cwiseProduct(spacing));

    double best = 0.0;
    const std::size_t m = w.size();
    std::vector<std::size_t> pick(n);
    // Enumerate n-subsets of constraints; each nondegenerate intersection is a
    // candidate polytope vertex.
    std::function<void(std::size_t, Eigen::Index)> rec = [&](std::size_t start,
                                                             Eigen::Index depth) {
        if (depth == n) {
            Eigen::MatrixXd A(n, n);
            Eigen::VectorXd b(n);
            for (Eigen::Index r = 0; r < n; ++r) {
                A.row(r) = w[pick[r]];
                b[r] = w[pick[r]].norm();
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) return;
            Eigen::VectorXd y = lu.solve(b);
            for (const auto& wi : w)
                if (y.dot(wi) > wi.norm() * (1.0 + 1e-9)) return;
            best = std::max(best, y.norm());
            return;
        }
        for (std::size_t i = start; i + (n - depth - 1) < m; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    require(best > 0, "stencil_anisotropy: degenerate stencil");
    return best;
}

double stencil_anisotropy(Stencil s, Eigen::Index dim) {
    return stencil_anisotropy(s, Eigen::VectorXd::Ones(dim));
}

MetricGraph build_grid_graph(const GridSpec& spec, const ConductanceFn& conductance) {
    spec.validate();
    const Eigen::Index n = spec.point_count();
    const Eigen::Index d = spec.dim();
    Eigen::MatrixXd coords(n, d);
    for (Eigen::Index i = 0; i < n; ++i) coords.row(i) = spec.point(i);

    // Positive-lexicographic half of the stencil so each edge appears once.
    std::vector<Eigen::VectorXi> half;
    for (const auto& o : stencil_offsets(spec.stencil, d)) {
        for (Eigen::Index a = 0; a < d; ++a) {
            if (o[a] > 0) {
                half.push_back(o);
                break;
            }
            if (o[a] < 0) break;
        }
    }

    std::vector<Edge> edges;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXi idx = spec.unflatten(i);
        for (const auto& o : half) {
            Eigen::VectorXi j = idx + o;
            bool ok = true;
            for (Eigen::Index a = 0; a < d; ++a)
                if (j[a] < 0 || j[a] >= spec.counts[a]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Eigen::Index jj = spec.flatten(j);
            double len = (coords.row(i) - coords.row(jj)).norm();
            double c = conductance ? conductance(coords.row(i), coords.row(jj), len) : 1.0;
            require(c > 0.0, "build_grid_graph: conductance callback returned nonpositive");
            edges.push_back({i, jj, c});
        }
    }
    return MetricGraph(n, std::move(edges), std::move(coords), MetricMode::GraphShortestPath);
}

ConductanceFn grid_conductance(Eigen::Index dim, double p) {
    double e = static_cast<double>(dim) - p;
    return [e](const Eigen::VectorXd&, const Eigen::VectorXd&, double len) {
        return std::pow(len, e);
    };
}

void GridField::validate() const {
    spec.validate();
    require(values.size() == spec.point_count(), "GridField: value count mismatch");
}

GridField make_grid_field(const GridSpec& spec,
                          const std::function<double(const Eigen::VectorXd&)>& f) {
    spec.validate();
    GridField out{spec, Eigen::VectorXd(spec.point_count())};
    for (Eigen::Index i = 0; i < out.values.size(); ++i) out.values[i] = f(spec.point(i));
    return out;
}

void save_grid_field(const GridField& f, const std::string& path) {
    f.validate();
    std::ofstream os(path);
    require(os.good(), "save_grid_field: cannot open " + path);
    char buf[400];
    std::string header = std::to_string(f.spec.dim());
    for (Eigen::Index a = 0; a < f.spec.dim(); ++a) {
        std::snprintf(buf, sizeof buf, " %.17g", f.spec.lo[a]);
        header += buf;
    }
    for (Eigen::Index a = 0; a < f.spec.dim(); ++a) {
        std::snprintf(buf, sizeof buf, " %.17g", f.spec.hi[a]);
        header += buf;
    }
    for (Eigen::Index a = 0; a < f.spec.dim(); ++a) header += " " + std::to_string(f.spec.counts[a]);
    os << header << "\n";
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", f.values[i]);
        os << buf;
    }
    require(os.good(), "save_grid_field: write failed for " + path);
}

GridField load_grid_field(const std::string& path) {
    std::ifstream is(path);
    if (!is.good()) throw ParseError("load_grid_field: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("load_grid_field: empty file", 1);
    std::istringstream hs(line);
    Eigen::Index n;
    if (!(hs >> n) || n < 1) throw ParseError("load_grid_field: bad dimension", 1);
    GridSpec spec;
    spec.lo.resize(n);
    spec.hi.resize(n);
    spec.counts.resize(n);
    for (Eigen::Index a = 0; a < n; ++a)
        if (!(hs >> spec.lo[a])) throw ParseError("load_grid_field: bad header", 1);
    for (Eigen::Index a = 0; a < n; ++a)
        if (!(hs >> spec.hi[a])) throw ParseError("load_grid_field: bad header", 1);
    for (Eigen::Index a = 0; a < n; ++a)
        if (!(hs >> spec.counts[a])) throw ParseError("load_grid_field: bad header", 1);
    spec.validate();
    GridField f{spec, Eigen::VectorXd(spec.point_count())};
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
        if (!(is >> f.values[i]))
            throw ParseError("load_grid_field: missing value " + std::to_string(i));
    }
    return f;
}

bool is_nested_refinement(const GridSpec& coarse, const GridSpec& fine) {
    if (coarse.dim() != fine.dim() || coarse.stencil != fine.stencil) return false;
    for (Eigen::Index a = 0; a < coarse.dim(); ++a) {
        double scale = std::max(std::abs(coarse.hi[a]), std::abs(coarse.lo[a])) + 1.0;
        if (std::abs(coarse.lo[a] - fine.lo[a]) > 1e-12 * scale) return false;
        if (std::abs(coarse.hi[a] - fine.hi[a]) > 1e-12 * scale) return false;
        if (fine.counts[a] < coarse.counts[a]) return false;
        if ((fine.counts[a] - 1) % (coarse.counts[a] - 1) != 0) return false;
    }
    return true;
}

}  // namespace eidlab
