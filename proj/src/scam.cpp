#include "deblur1d/scam.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace deblur {

void ScamConfig::validate() const {
    if (sweeps < 1) throw std::invalid_argument("ScamConfig: sweeps must be >= 1");
    long long l0 = effective_burnin();
    if (l0 < 0 || l0 >= sweeps) throw std::invalid_argument("ScamConfig: need 0 <= burnin < sweeps");
    if (!(s > 0.0)) throw std::invalid_argument("ScamConfig: s must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("ScamConfig: delta must be > 0");
    if (!(sigma0 > 0.0)) throw std::invalid_argument("ScamConfig: sigma0 must be > 0");
    if (thin < 1) throw std::invalid_argument("ScamConfig: thin must be >= 1");
}

double update_sigma(const Welford& welford_j, const ScamConfig& cfg, long long ell) {
    if (ell <= cfg.effective_burnin()) return cfg.sigma0;
    return cfg.s * welford_j.variance() + cfg.delta;
}

std::pair<RunReport, ChainOutput> run_scam(ScamTarget& target, const ScamConfig& cfg) {
    cfg.validate();
    const int dim = target.dim();
    const long long L = cfg.sweeps;
    const long long ell0 = cfg.effective_burnin();
    const int active = cfg.fixed_v ? dim / 2 : dim;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Eigen::VectorXd sigma0(dim);
    if (cfg.sigma0_vec.size() == dim)
        sigma0 = cfg.sigma0_vec;
    else
        sigma0.setConstant(cfg.sigma0);

    std::vector<Welford> hist(dim);
    const Eigen::VectorXd& w0 = target.state();
    for (int j = 0; j < dim; ++j) hist[j].push(w0[j]);

    Eigen::VectorXd sigma = sigma0;  // interpreted as variances throughout
    Eigen::VectorXd accepts = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd proposals = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd cm_sum = Eigen::VectorXd::Zero(dim);
    long long cm_count = 0;

    ChainOutput out;
    out.thin = cfg.thin;
    long long stored = 0;
    if (cfg.store_samples) {
        long long cap = (L - ell0 + cfg.thin - 1) / cfg.thin;
        out.samples.resize(dim, cap);
    }

    auto t0 = std::chrono::steady_clock::now();
    bool adapted_frozen = false;
    for (long long ell = 1; ell <= L; ++ell) {
        if (!(cfg.freeze_after_burnin && adapted_frozen)) {
            for (int j = 0; j < active; ++j)
                sigma[j] = (ell <= ell0) ? sigma0[j] : cfg.s * hist[j].variance() + cfg.delta;
            if (cfg.freeze_after_burnin && ell > ell0) adapted_frozen = true;
        }
        for (int j = 0; j < active; ++j) {
            double cur = target.state()[j];
            double tau = gauss(rng) * std::sqrt(sigma[j]);
            double dlp = target.propose(j, cur + tau);
            proposals[j] += 1.0;
            bool take = dlp >= 0.0;
            if (!take) {
                double t = unif(rng);
                take = std::log(t) <= dlp;
            }
            if (take) {
                target.accept();
                accepts[j] += 1.0;
            } else {
                target.reject();
            }
        }
        const Eigen::VectorXd& w = target.state();
        for (int j = 0; j < dim; ++j) hist[j].push(w[j]);
        if (ell > ell0) {
            cm_sum += w;
            ++cm_count;
            if (cfg.store_samples && (ell - ell0 - 1) % cfg.thin == 0)
                out.samples.col(stored++) = w;
        }
        if (cfg.revalidate_every > 0 && ell % cfg.revalidate_every == 0) target.revalidate();
    }
    auto t1 = std::chrono::steady_clock::now();

    if (cfg.store_samples) out.samples.conservativeResize(dim, stored);
    out.cm = cm_sum / static_cast<double>(cm_count);

    RunReport report;
    report.dim = dim;
    report.samples_used = L - ell0;
    report.seed = cfg.seed;
    report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    double tot_prop = proposals.sum();
    report.acceptance = tot_prop > 0 ? accepts.sum() / tot_prop : 0.0;
    report.per_coord_acceptance =
        (proposals.array() > 0).select(accepts.array() / proposals.array().max(1.0), 0.0);
    return {std::move(report), std::move(out)};
}

Eigen::VectorXd cm_from_chain(const Eigen::MatrixXd& chain, long long ell0, int thin) {
    const long long L = chain.cols();
    if (ell0 >= L) throw std::invalid_argument("cm_from_chain: empty post-burn-in chain");
    if (thin < 1) throw std::invalid_argument("cm_from_chain: thin must be >= 1");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(chain.rows());
    long long count = 0;
    for (long long ell = ell0; ell < L; ell += thin) {
        sum += chain.col(ell);
        ++count;
    }
    return sum / static_cast<double>(count);
}

std::pair<PLFunction, PLFunction> split_cm(const Eigen::VectorXd& w_cm, const PriorModel& prior) {
    const int N = prior.mesh.cells;
    if (w_cm.size() != 2 * N) throw std::invalid_argument("split_cm: size mismatch");
    PLFunction u = from_coords(w_cm.head(N), prior.fbasis);
    PLFunction v = from_coords(w_cm.tail(N), prior.gbasis);
    v.nodal.array() += 1.0;
    return {std::move(u), std::move(v)};
}

}  // namespace deblur
