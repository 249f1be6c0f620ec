#include "deblur1d/prior.hpp"

namespace deblur {

PLFunction sample_v(const PriorModel& model, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd xi(model.mesh.cells);
    for (int j = 0; j < xi.size(); ++j) xi[j] = gauss(rng);
    Eigen::VectorXd nodal = model.gbasis.columns * xi;
    nodal.array() += 1.0;
    return {model.mesh, std::move(nodal)};
}

double logpdf_v(const PLFunction& v, const PriorModel& model) {
    if (v.mesh != model.mesh) throw std::invalid_argument("logpdf_v: mesh mismatch");
    const double eps = model.params.epsilon;
    PLFunction dev(v.mesh, v.nodal.array() - 1.0);
    PCFunction dv = derivative(v);
    return -0.5 * (eps * inner(dv, dv) + inner(dev, dev) / (4.0 * eps));
}

PLFunction sample_u_given_v(const PLFunction& v, const PriorModel& model, std::mt19937_64& rng) {
    if (v.mesh != model.mesh) throw std::invalid_argument("sample_u_given_v: mesh mismatch");
    const double eps2 = model.params.epsilon * model.params.epsilon;
    Eigen::ArrayXd L = (eps2 + cell_average(v).cellvals.array().square()).inverse();
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd w(model.mesh.cells);
    for (int j = 0; j < w.size(); ++j) w[j] = gauss(rng);
    // C^{1/2} w = S^T diag(L^{1/2}) S w without forming C
    Eigen::VectorXd sw = model.S.entries * w;
    Eigen::VectorXd ucoords =
        model.S.entries.transpose() * (L.sqrt() * sw.array()).matrix();
    return from_coords(ucoords, model.fbasis);
}

double logpdf_u_given_v(const PLFunction& u, const PLFunction& v, const PriorModel& model) {
    if (u.mesh != model.mesh || v.mesh != model.mesh)
        throw std::invalid_argument("logpdf_u_given_v: mesh mismatch");
    const double eps2 = model.params.epsilon * model.params.epsilon;
    const int N = model.mesh.cells;
    Eigen::ArrayXd coef = eps2 + cell_average(v).cellvals.array().square();
    Eigen::ArrayXd dqu = apply_dq(u, model.params).cellvals.array();
    // int -N log(eps^2 + (Q_n v)^2) dx = -sum_j log(...); the quadratic
    // term integrates cell by cell with weight 1/N.
    double quad = (coef * dqu.square()).sum() / N;
    return 0.5 * coef.log().sum() - 0.5 * quad;
}

double logpdf_joint(const PLFunction& u, const PLFunction& v, const PriorModel& model) {
    return logpdf_v(v, model) + logpdf_u_given_v(u, v, model);
}

TraceDiagnostics trace_diagnostics(const PriorModel& model, const PLFunction& v) {
    const int N = model.mesh.cells;
    CondCovariance cov = build_c(v, model.fbasis, model.S, model.params);
    // C_{U_n} phi = sum_{jk} C_jk <f_j, phi>_{L2} f_k. Trace over an
    // L2-orthonormal basis {h_l} of PL(n) is exact: C_{U_n} has rank N.
    HierarchicalBasis l2b = build_basis(model.mesh.level, InnerKind::L2, model.params);
    Eigen::MatrixXd P(N, N);  // P_{j,l} = <f_j, h_l>_L2
    for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l)
            P(j, l) = inner(model.fbasis.vector(j), l2b.vector(l));
    double tr = (P.transpose() * cov.C * P).trace();
    const double eps = model.params.epsilon;
    double bound = (std::pow(eps, -2.0 * model.params.q) + 1.0 / 12.0) / (eps * eps);
    return {tr, bound};
}

std::vector<MomentEstimate> exp_moment_estimate(const std::vector<int>& levels, double b,
                                                int nsamples, const PriorParams& p,
                                                std::uint64_t seed) {
    if (!(b > 0.0)) throw std::invalid_argument("exp_moment_estimate: b must be > 0");
    // Common random numbers across levels: each sample draws one master
    // normal vector at the finest level and every level uses its prefix
    // (the bases are nested). The estimator is dominated by the largest
    // sample, so independent streams would swamp the level effect.
    int nmax = *std::max_element(levels.begin(), levels.end());
    std::vector<PriorModel> models;
    for (int n : levels) models.push_back(PriorModel::build(n, p));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int Nmax = 1 << nmax;
    // everything stays in log space: exponents reach the hundreds
    auto accumulate = [](double lse, double x) {
        if (lse == -std::numeric_limits<double>::infinity()) return x;
        double hi = std::max(lse, x), lo = std::min(lse, x);
        return hi + std::log1p(std::exp(lo - hi));
    };
    std::vector<double> lse1(levels.size(), -std::numeric_limits<double>::infinity());
    std::vector<double> lse2 = lse1;
    Eigen::VectorXd xi(Nmax), w(Nmax);
    for (int i = 0; i < nsamples; ++i) {
        for (int j = 0; j < Nmax; ++j) xi[j] = gauss(rng);
        for (int j = 0; j < Nmax; ++j) w[j] = gauss(rng);
        for (size_t li = 0; li < models.size(); ++li) {
            const PriorModel& model = models[li];
            const int N = model.mesh.cells;
            Eigen::VectorXd vn = model.gbasis.columns * xi.head(N);
            vn.array() += 1.0;
            PLFunction v{model.mesh, std::move(vn)};
            const double eps2 = p.epsilon * p.epsilon;
            // white noise in the sqrt(N) 1_{K_j} basis, restricted by block
            // sums so the dominant mean mode is shared by every level
            const int B = Nmax / N;
            Eigen::VectorXd eta(N);
            for (int j = 0; j < N; ++j)
                eta[j] = w.segment(j * B, B).sum() / std::sqrt(double(B));
            Eigen::ArrayXd L = (eps2 + cell_average(v).cellvals.array().square()).inverse();
            Eigen::VectorXd uc = model.S.entries.transpose() * (L.sqrt() * eta.array()).matrix();
            PLFunction u = from_coords(uc, model.fbasis);
            double nrm = std::sqrt(inner(u, u) + inner(v, v));
            lse1[li] = accumulate(lse1[li], b * nrm);
            lse2[li] = accumulate(lse2[li], 2.0 * b * nrm);
        }
    }
    std::vector<MomentEstimate> out;
    for (size_t li = 0; li < levels.size(); ++li) {
        double log_mean = lse1[li] - std::log(double(nsamples));
        double log_meansq = lse2[li] - std::log(double(nsamples));
        // relative standard error sqrt(E X^2 / (E X)^2 - 1) / sqrt(M)
        double ratio = std::exp(std::min(700.0, log_meansq - 2.0 * log_mean));
        double rel_se = std::sqrt(std::max(0.0, ratio - 1.0) / nsamples);
        out.push_back({levels[li], log_mean, rel_se});
    }
    return out;
}

}  // namespace deblur
