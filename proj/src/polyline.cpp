#include "eidlab/polyline.hpp"

#include <cmath>

#include "eidlab/error.hpp"

namespace eidlab {

void Polyline::validate() const {
    require(points.rows() >= 2, "Polyline: need at least two points");
    require(points.cols() >= 1, "Polyline: empty dimension");
}

double Polyline::length() const {
    double len = 0.0;
    for (Eigen::Index s = 0; s + 1 < points.rows(); ++s)
        len += (points.row(s + 1) - points.row(s)).norm();
    return len;
}

Eigen::VectorXd Polyline::at_arclength(double t) const {
    validate();
    require(t >= -1e-12, "Polyline: negative arclength");
    double acc = 0.0;
    for (Eigen::Index s = 0; s + 1 < points.rows(); ++s) {
        double seg = (points.row(s + 1) - points.row(s)).norm();
        if (t <= acc + seg || s + 2 == points.rows()) {
            if (seg == 0.0) return points.row(s);
            double u = std::clamp((t - acc) / seg, 0.0, 1.0);
            return points.row(s) * (1.0 - u) + points.row(s + 1) * u;
        }
        acc += seg;
    }
    return points.row(points.rows() - 1);
}

double line_integral(const Polyline& gamma,
                     const std::function<double(const Eigen::VectorXd&)>& density,
                     double h_quad) {
    gamma.validate();
    require(h_quad > 0.0, "line_integral: quadrature step must be positive");
    auto eval = [&](const Eigen::VectorXd& x) {
        double v = density(x);
        if (!std::isfinite(v)) throw NumericError("line_integral: density not finite");
        require(v >= 0.0, "line_integral: negative density");
        return v;
    };
    double total = 0.0;
    for (Eigen::Index s = 0; s + 1 < gamma.points.rows(); ++s) {
        Eigen::VectorXd a = gamma.points.row(s), b = gamma.points.row(s + 1);
        double seg = (b - a).norm();
        if (seg == 0.0) continue;
        auto k = static_cast<Eigen::Index>(std::ceil(seg / h_quad));
        double dt = seg / static_cast<double>(k);
        double prev = eval(a);
        for (Eigen::Index i = 1; i <= k; ++i) {
            double u = static_cast<double>(i) / static_cast<double>(k);
            double cur = eval(a + (b - a) * u);
            total += 0.5 * (prev + cur) * dt;
            prev = cur;
        }
    }
    return total;
}

double upper_gradient_slack(const Polyline& gamma,
                            const std::function<double(const Eigen::VectorXd&)>& f,
                            const std::function<double(const Eigen::VectorXd&)>& g,
                            double h_quad, int subdivisions) {
    gamma.validate();
    require(subdivisions >= 1, "upper_gradient_slack: need at least one subcurve");
    double len = gamma.length();
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < subdivisions; ++i) {
        for (int j = i + 1; j <= subdivisions; ++j) {
            double ta = len * i / subdivisions, tb = len * j / subdivisions;
            Eigen::VectorXd pa = gamma.at_arclength(ta), pb = gamma.at_arclength(tb);
            // integral over the subcurve, re-walked at quadrature resolution
            double steps = std::max(1.0, std::ceil((tb - ta) / h_quad));
            double integral = 0.0;
            double prev = g(gamma.at_arclength(ta));
            for (int s = 1; s <= static_cast<int>(steps); ++s) {
                double t = ta + (tb - ta) * s / steps;
                double cur = g(gamma.at_arclength(t));
                integral += 0.5 * (prev + cur) * (tb - ta) / steps;
                prev = cur;
            }
            worst = std::max(worst, std::abs(f(pa) - f(pb)) - integral);
        }
    }
    return worst;
}

Polyline random_stencil_polyline(const GridSpec& spec, Eigen::Index steps, CounterRng& rng) {
    spec.validate();
    require(steps >= 1, "random_stencil_polyline: need at least one step");
    auto offs = stencil_offsets(spec.stencil, spec.dim());
    Eigen::VectorXi idx(spec.dim());
    for (Eigen::Index a = 0; a < spec.dim(); ++a)
        idx[a] = static_cast<int>(rng.next_below(spec.counts[a]));
    Eigen::MatrixXd pts(steps + 1, spec.dim());
    pts.row(0) = spec.point(spec.flatten(idx));
    for (Eigen::Index s = 1; s <= steps; ++s) {
        // rejection walk; a valid move always exists on grids with >= 2 points
        for (int tries = 0; tries < 64; ++tries) {
            const auto& o = offs[rng.next_below(offs.size())];
            Eigen::VectorXi j = idx + o;
            bool ok = true;
            for (Eigen::Index a = 0; a < spec.dim(); ++a)
                if (j[a] < 0 || j[a] >= spec.counts[a]) {
                    ok = false;
                    break;
                }
            if (ok) {
                idx = j;
                break;
            }
        }
        pts.row(s) = spec.point(spec.flatten(idx));
    }
    return Polyline{pts};
}

}  // namespace eidlab
