#include "eidlab/currents.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "eidlab/csv.hpp"
#include "eidlab/error.hpp"

namespace eidlab {

double Current1::mass() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) m += vectors.row(i).norm();
    return m;
}

Current1 build_current(const PEnergyForm& form, const std::vector<VertexFn>& f,
                       const VertexFn& g) {
    const Eigen::Index nv = form.graph().vertex_count();
    const Eigen::Index n = static_cast<Eigen::Index>(f.size());
    require(n >= 1, "build_current needs at least one coordinate function");
    for (const VertexFn& fj : f)
        require(fj.size() == nv, "build_current: coordinate function has wrong length");
    require(g.size() == nv, "build_current: weight function has wrong length");

    Current1 t;
    t.locations.resize(nv, n);
    t.vectors.resize(nv, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        t.locations.col(j) = f[static_cast<std::size_t>(j)];
        t.vectors.col(j) = form.polarized_energy_measure(f[static_cast<std::size_t>(j)], g);
    }
    t.form = &form;
    t.f = f;
    t.g = g;
    return t;
}

namespace {

double rel_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

}  // namespace

BoundaryCheck current_boundary(const Current1& t, const TestFunction& phi, bool affine_phi,
                               double rel_tol) {
    require(t.form != nullptr && !t.f.empty(), "current_boundary needs graph provenance");
    require(phi.value && phi.grad, "current_boundary: test function incomplete");
    const PEnergyForm& form = *t.form;
    const Eigen::Index nv = form.graph().vertex_count();
    const Eigen::Index n = t.dim();

    BoundaryCheck out;
    VertexFn phi_f(nv);
    for (Eigen::Index x = 0; x < nv; ++x) {
        const Eigen::VectorXd loc = t.locations.row(x).transpose();
        phi_f[x] = phi.value(loc);
        const Eigen::VectorXd dphi = phi.grad(loc);
        require(dphi.size() == n, "current_boundary: gradient dimension mismatch");
        out.atom_route += dphi.dot(t.vectors.row(x).transpose());
    }

    out.chain_route = form.energy_inner(phi_f, t.g);

    const VertexFn ag = form.generator_apply(t.g);
    const Measure& mu = form.reference_measure();
    for (Eigen::Index x = 0; x < nv; ++x) out.generator_route -= ag[x] * phi_f[x] * mu[x];

    out.chain_generator_gap = rel_gap(out.chain_route, out.generator_route);
    out.atom_chain_gap = rel_gap(out.atom_route, out.chain_route);
    if (out.chain_generator_gap > rel_tol)
        throw NumericError("current boundary: chain and generator routes disagree, gap " +
                           std::to_string(out.chain_generator_gap));
    if (affine_phi && out.atom_chain_gap > rel_tol)
        throw NumericError("current boundary: atom and chain routes disagree for affine "
                           "test function, gap " +
                           std::to_string(out.atom_chain_gap));
    return out;
}

DrReport dr_hypothesis_check(const std::vector<Current1>& currents, const BinnedMeasure& nu) {
    const Eigen::Index n = nu.dim();
    require(static_cast<Eigen::Index>(currents.size()) == n,
            "dr_hypothesis_check needs exactly n currents in R^n");
    for (const Current1& t : currents)
        require(t.dim() == n, "dr_hypothesis_check: current dimension mismatch");

    // Scalar mass ||T_i|| and vector sum per box, in nu's own partition.
    std::vector<BinnedMeasure> masses;
    std::map<BoxKey, Eigen::MatrixXd> sums;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Current1& t = currents[static_cast<std::size_t>(i)];
        BinnedMeasure m(n, nu.box_side(), nu.origin());
        for (Eigen::Index a = 0; a < t.atom_count(); ++a) {
            const Eigen::VectorXd loc = t.locations.row(a).transpose();
            const Eigen::VectorXd vec = t.vectors.row(a).transpose();
            m.add(loc, vec.norm());
            const BoxKey key = nu.key_of(loc);
            auto it = sums.find(key);
            if (it == sums.end()) it = sums.emplace(key, Eigen::MatrixXd::Zero(n, n)).first;
            it->second.col(i) += vec;
        }
        require(m.same_partition(nu), "dr_hypothesis_check: partition drifted");
        masses.push_back(std::move(m));
    }

    DrReport report;
    report.dim = static_cast<int>(n);
    for (const auto& [key, nu_mass] : nu.boxes()) {
        if (nu_mass <= 0.0) continue;
        DrRow row;
        row.key = key;
        row.min_mass = masses[0].mass(key);
        for (Eigen::Index i = 1; i < n; ++i)
            row.min_mass = std::min(row.min_mass, masses[static_cast<std::size_t>(i)].mass(key));
        auto it = sums.find(key);
        double colprod = 0.0;
        if (it != sums.end()) {
            row.det = it->second.determinant();
            colprod = 1.0;
            for (Eigen::Index i = 0; i < n; ++i) colprod *= it->second.col(i).norm();
        }
        row.pass = row.min_mass > 0.0 && std::abs(row.det) > 1e-10 * colprod && colprod > 0.0;
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

std::string current_dump_csv(const Current1& t) {
    const Eigen::Index n = t.dim();
    std::string header;
    for (Eigen::Index j = 0; j < n; ++j) header += "x" + std::to_string(j + 1) + ",";
    for (Eigen::Index j = 0; j < n; ++j) {
        header += "v" + std::to_string(j + 1);
        if (j + 1 < n) header += ",";
    }
    Csv csv(header);
    for (Eigen::Index a = 0; a < t.atom_count(); ++a) {
        std::vector<std::string> row;
        for (Eigen::Index j = 0; j < n; ++j) row.push_back(fmt_g17(t.locations(a, j)));
        for (Eigen::Index j = 0; j < n; ++j) row.push_back(fmt_g17(t.vectors(a, j)));
        csv.add_row(row);
    }
    return csv.text();
}

}  // namespace eidlab
