#pragma once

#include <Eigen/Core>
#include <cmath>

#include "eidlab/error.hpp"

namespace eidlab {

// Eigenvalues of small symmetric matrices, ascending. Closed-form
// characteristic-polynomial solves for n <= 3, cyclic Jacobi sweeps above
// that. Input symmetry is trusted; only the lower triangle must be valid for
// the closed forms, the Jacobi path symmetrizes.

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_sym_eigenvalues(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, Scalar tol) {
    const Eigen::Index n = a.rows();
    a = ((a + a.transpose()) / Scalar(2)).eval();
    Scalar scale = a.cwiseAbs().maxCoeff();
    if (scale == Scalar(0)) return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
    for (int sweep = 0; sweep < 128; ++sweep) {
        Scalar off = Scalar(0);
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= tol * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == Scalar(0)) continue;
                Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * a(p, q));
                Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                           (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
                Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
                Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ev = a.diagonal();
    std::sort(ev.data(), ev.data() + n);
    return ev;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sym_eigenvalues(
    const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = m.rows();
    require(n == m.cols() && n >= 1, "sym_eigenvalues: square matrix required");
    if (n == 1) return Vec::Constant(1, m(0, 0));
    if (n == 2) {
        Scalar a = m(0, 0), b = m(1, 0), c = m(1, 1);
        Scalar mid = (a + c) / Scalar(2);
        Scalar rad = std::sqrt(((a - c) / Scalar(2)) * ((a - c) / Scalar(2)) + b * b);
        Vec ev(2);
        ev << mid - rad, mid + rad;
        return ev;
    }
    if (n == 3) {
        Scalar a11 = m(0, 0), a22 = m(1, 1), a33 = m(2, 2);
        Scalar a12 = m(1, 0), a13 = m(2, 0), a23 = m(2, 1);
        Scalar p1 = a12 * a12 + a13 * a13 + a23 * a23;
        Vec ev(3);
        if (p1 == Scalar(0)) {
            ev << a11, a22, a33;
            std::sort(ev.data(), ev.data() + 3);
            return ev;
        }
        Scalar q = (a11 + a22 + a33) / Scalar(3);
        Scalar p2 = (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) +
                    (a33 - q) * (a33 - q) + Scalar(2) * p1;
        Scalar p = std::sqrt(p2 / Scalar(6));
        Scalar b11 = (a11 - q) / p, b22 = (a22 - q) / p, b33 = (a33 - q) / p;
        Scalar b12 = a12 / p, b13 = a13 / p, b23 = a23 / p;
        Scalar detb = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
                      b13 * (b12 * b23 - b22 * b13);
        Scalar r = detb / Scalar(2);
        r = r < Scalar(-1) ? Scalar(-1) : (r > Scalar(1) ? Scalar(1) : r);
        Scalar phi = std::acos(r) / Scalar(3);
        Scalar e1 = q + Scalar(2) * p * std::cos(phi);
        Scalar e3 = q + Scalar(2) * p * std::cos(phi + Scalar(2) * M_PI / Scalar(3));
        Scalar e2 = Scalar(3) * q - e1 - e3;
        ev << e3, e2, e1;
        std::sort(ev.data(), ev.data() + 3);
        return ev;
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
    return jacobi_sym_eigenvalues<Scalar>(dense, Scalar(1e-12));
}

}  // namespace eidlab
