#include "eidlab/preiss.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "eidlab/error.hpp"
#include "eidlab/lipschitz.hpp"

namespace eidlab {

namespace {

// Bump mollification with replicate padding at the box boundary.
GridField mollify(const GridField& f, double delta) {
    const GridSpec& spec = f.spec;
    const Eigen::VectorXd h = spec.spacing();
    const Eigen::Index dim = spec.dim();

    std::vector<Eigen::VectorXi> offsets;
    std::vector<double> weights;
    Eigen::VectorXi span(dim);
    for (Eigen::Index a = 0; a < dim; ++a)
        span[a] = static_cast<int>(std::floor(delta / h[a]));
    Eigen::VectorXi o = -span;
    bool done = false;
    while (!done) {
        double r2 = 0.0;
        for (Eigen::Index a = 0; a < dim; ++a) r2 += (o[a] * h[a]) * (o[a] * h[a]);
        const double r = std::sqrt(r2);
        if (r < delta) {
            const double t = 1.0 - (r / delta) * (r / delta);
            offsets.push_back(o);
            weights.push_back(t * t);
        }
        Eigen::Index a = dim - 1;
        for (;;) {
            if (a < 0) {
                done = true;
                break;
            }
            if (o[a] < span[a]) {
                ++o[a];
                break;
            }
            o[a] = -span[a];
            --a;
        }
    }
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    require(wsum > 0.0, "mollify: empty kernel");
    for (double& w : weights) w /= wsum;

    GridField out{spec, Eigen::VectorXd::Zero(spec.point_count())};
    for (Eigen::Index i = 0; i < spec.point_count(); ++i) {
        const Eigen::VectorXi idx = spec.unflatten(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < offsets.size(); ++j) {
            Eigen::VectorXi nb = idx + offsets[j];
            for (Eigen::Index a = 0; a < dim; ++a)
                nb[a] = std::clamp(nb[a], 0, spec.counts[a] - 1);
            acc += weights[j] * f.at(nb);
        }
        out.values[i] = acc;
    }
    return out;
}

// Partial along axis 0: central differences inside, one-sided at the faces.
GridField partial_1(const GridField& f) {
    const GridSpec& spec = f.spec;
    const double h = spec.spacing()[0];
    GridField out{spec, Eigen::VectorXd::Zero(spec.point_count())};
    for (Eigen::Index i = 0; i < spec.point_count(); ++i) {
        Eigen::VectorXi idx = spec.unflatten(i);
        Eigen::VectorXi up = idx, dn = idx;
        up[0] = std::min(idx[0] + 1, spec.counts[0] - 1);
        dn[0] = std::max(idx[0] - 1, 0);
        out.values[i] = (f.at(up) - f.at(dn)) / (h * (up[0] - dn[0]));
    }
    return out;
}

}  // namespace

PreissStep preiss_step(const PreissInput& in, double k, double delta) {
    in.spec.validate();
    require(in.spec.dim() == 2, "preiss_step expects a 2D grid");
    require(k > 0.0, "preiss_step: k must be positive");
    require(in.mu_points.rows() == in.mu_weights.size(),
            "preiss_step: measure atoms and weights disagree");
    const Eigen::VectorXd h = in.spec.spacing();
    if (delta < 2.0 * h.maxCoeff())
        throw NumericError("preiss_step: mollification radius below two grid cells");

    PreissStep step;
    step.k = k;
    step.delta = delta;

    GridField g_base = make_grid_field(
        in.spec, [&](const Eigen::VectorXd& x) { return in.k_set(x) ? 0.5 : 1.0; });
    step.g_k = inf_convolution(g_base, k);

    GridField f = make_grid_field(in.spec, [](const Eigen::VectorXd& x) { return x[0]; });
    double corner = 0.0;
    for (int mask = 0; mask < 4; ++mask) {
        Eigen::Vector2d c(mask & 1 ? in.spec.hi[0] : in.spec.lo[0],
                          mask & 2 ? in.spec.hi[1] : in.spec.lo[1]);
        corner = std::max(corner, c.norm());
    }
    step.f_k = variational_approx(f, step.g_k, corner + h.minCoeff());
    step.f_smooth = mollify(step.f_k, delta);
    step.d1 = partial_1(step.f_smooth);

    for (Eigen::Index a = 0; a < in.mu_points.rows(); ++a) {
        const Eigen::VectorXd x = in.mu_points.row(a).transpose();
        step.integral_det += in.mu_weights[a] * step.d1.at_point(x);
    }
    for (Eigen::Index i = 0; i < in.spec.point_count(); ++i) {
        const double v = std::abs(step.d1.values[i]);
        step.max_abs_d1_global = std::max(step.max_abs_d1_global, v);
        if (in.k_set(in.spec.point(i))) step.max_abs_d1_on_k = std::max(step.max_abs_d1_on_k, v);
    }
    const std::vector<Eigen::VectorXi> offs = stencil_offsets(in.spec.stencil, 2);
    for (Eigen::Index i = 0; i < in.spec.point_count(); ++i) {
        const Eigen::VectorXi idx = in.spec.unflatten(i);
        for (const Eigen::VectorXi& o : offs) {
            const Eigen::VectorXi nb = idx + o;
            if (nb[0] < 0 || nb[1] < 0 || nb[0] >= in.spec.counts[0] ||
                nb[1] >= in.spec.counts[1])
                continue;
            const double dy2 = o[1] * h[1];
            const double df = step.f_smooth.at(nb) - step.f_smooth.values[i];
            const double run = std::hypot(o[0] * h[0], dy2);
            step.flatten_lip_global =
                std::max(step.flatten_lip_global, std::hypot(df, dy2) / run);
        }
    }

    for (Eigen::Index a = 0; a < in.mu_points.rows(); ++a) {
        const Eigen::VectorXd xa = in.mu_points.row(a).transpose();
        const double fa = step.f_smooth.at_point(xa);
        for (Eigen::Index b = a + 1; b < in.mu_points.rows(); ++b) {
            const Eigen::VectorXd xb = in.mu_points.row(b).transpose();
            const double fb = step.f_smooth.at_point(xb);
            Eigen::Vector2d img(fa - fb, xa[1] - xb[1]);
            const double dist = (xa - xb).norm();
            if (dist > 0.0) step.flatten_lip = std::max(step.flatten_lip, img.norm() / dist);
        }
    }
    return step;
}

std::vector<PreissStep> preiss_sequence(const PreissInput& in, const std::vector<double>& ks) {
    std::vector<PreissStep> out;
    const double h = in.spec.spacing().maxCoeff();
    for (double k : ks) out.push_back(preiss_step(in, k, std::max(2.5 * h, 0.15 / k)));
    return out;
}

PreissInput make_preiss_input(Eigen::Index count, bool identity_case) {
    require(count >= 5 && count % 2 == 1, "make_preiss_input wants an odd count >= 5");
    PreissInput in;
    in.spec = make_grid_cube(2, -1.0, 1.0, count, Stencil::King);
    const double half = 0.6;
    if (identity_case) {
        in.k_set = [](const Eigen::VectorXd&) { return false; };
    } else {
        in.k_set = [half](const Eigen::VectorXd& x) {
            return std::abs(x[0]) <= 1e-12 && std::abs(x[1]) <= half + 1e-12;
        };
    }
    const double h = in.spec.spacing()[1];
    std::vector<double> ys;
    for (Eigen::Index j = 0; j < count; ++j) {
        const double y = -1.0 + h * static_cast<double>(j);
        if (std::abs(y) <= half + 1e-12) ys.push_back(y);
    }
    in.mu_points.resize(static_cast<Eigen::Index>(ys.size()), 2);
    in.mu_weights.resize(static_cast<Eigen::Index>(ys.size()));
    for (Eigen::Index a = 0; a < in.mu_points.rows(); ++a) {
        in.mu_points(a, 0) = 0.0;
        in.mu_points(a, 1) = ys[static_cast<std::size_t>(a)];
        in.mu_weights[a] = h;
    }
    return in;
}

}  // namespace eidlab
