#include "eidlab/cdc_matrix.hpp"

#include <Eigen/LU>
#include <cmath>

#include "eidlab/small_sym_eig.hpp"

namespace eidlab {

double CdcMatrixField::det(Eigen::Index v) const {
    const Eigen::MatrixXd& m = matrix(v);
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m.determinant();
}

double CdcMatrixField::sigma1(Eigen::Index v) const {
    return sym_eigenvalues(matrix(v))[0];
}

double CdcMatrixField::psd_slack() const {
    double worst = 0.0;
    for (Eigen::Index v = 0; v < vertex_count(); ++v) {
        if (!domain.contains(v)) continue;
        double tr = trace(v);
        if (tr <= 0.0) continue;
        double s = sigma1(v) / tr;
        if (s < worst) worst = s;
    }
    return worst;
}

CdcMatrixField cdc_matrix(const PEnergyForm& form, const std::vector<VertexFn>& phi,
                          const Measure& nu) {
    const Eigen::Index n = static_cast<Eigen::Index>(phi.size());
    require(n >= 1, "cdc_matrix: empty tuple");
    const Eigen::Index nv = form.graph().vertex_count();
    require(nu.size() == nv, "cdc_matrix: measure size mismatch");

    // Pairwise polarized densities; the diagonal comes out as the plain
    // energy measure exactly (Gamma<2f> - Gamma<0> = 4 Gamma<f> bitwise).
    std::vector<std::vector<VertexFn>> num(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        num[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j <= i; ++j)
            num[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                form.polarized_energy_measure(phi[static_cast<std::size_t>(i)],
                                              phi[static_cast<std::size_t>(j)]);
    }

    CdcMatrixField field;
    field.tuple_size = n;
    field.reference = nu;
    field.at.assign(static_cast<std::size_t>(nv), Eigen::MatrixXd::Zero(n, n));
    auto mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(nv, false).eval();

    for (Eigen::Index v = 0; v < nv; ++v) {
        if (nu[v] > 0.0) {
            mask[v] = true;
            Eigen::MatrixXd& m = field.at[static_cast<std::size_t>(v)];
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j <= i; ++j) {
                    double e = num[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][v] /
                               nu[v];
                    m(i, j) = e;
                    m(j, i) = e;
                }
        } else {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j <= i; ++j)
                    if (num[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][v] != 0.0)
                        throw ValidationError(
                            "cdc_matrix: domination violation at vertex " + std::to_string(v) +
                            ", nu = 0 but Gamma(phi_" + std::to_string(i) + ",phi_" +
                            std::to_string(j) + ") != 0");
        }
    }
    field.domain = VertexSet(mask);

    double slack = field.psd_slack();
    if (slack < -1e-10)
        throw NumericError("cdc_matrix: PSD invariant violated, sigma1/trace = " +
                           std::to_string(slack));
    return field;
}

}  // namespace eidlab
