#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "deblur1d/posterior.hpp"

namespace deblur {

/// Streaming mean/variance accumulator.
struct Welford {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    double variance() const { return count > 1 ? m2 / count : 0.0; }
};

struct ScamConfig {
    long long sweeps = 100000;   // L
    long long burnin = -1;       // ell_0; -1 means sweeps / 10
    double sigma0 = 1.0;         // initial proposal variance (broadcast)
    Eigen::VectorXd sigma0_vec;  // optional per-coordinate override
    double s = 2.4;              // adaptation scaling factor
    double delta = 1e-3;         // variance floor
    int thin = 1;
    std::uint64_t seed = 0;
    bool fixed_v = false;             // freeze the upper half of w
    bool freeze_after_burnin = false; // hold sigma fixed once adapted
    bool store_samples = false;       // keep the thinned chain in memory
    long long revalidate_every = 10000;

    long long effective_burnin() const { return burnin < 0 ? sweeps / 10 : burnin; }
    void validate() const;
};

/// Proposal variance rule: sigma0 during burn-in, s * Var + delta after,
/// with Var the full-history variance of the coordinate.
double update_sigma(const Welford& welford_j, const ScamConfig& cfg, long long ell);

/// Target interface for the sampler. Proposals are single-coordinate;
/// propose() returns the log-density change, accept() commits it.
class ScamTarget {
  public:
    virtual ~ScamTarget() = default;
    virtual int dim() const = 0;
    virtual const Eigen::VectorXd& state() const = 0;
    virtual void set_state(const Eigen::VectorXd& w) = 0;
    virtual double propose(int j, double newval) = 0;
    virtual void accept() = 0;
    virtual void reject() = 0;
    virtual void revalidate() {}
};

/// Adapts any plain log-density to the target interface (test oracle path;
/// every proposal is evaluated from scratch).
class FunctionTarget final : public ScamTarget {
  public:
    FunctionTarget(int dim, std::function<double(const Eigen::VectorXd&)> logpdf)
        : logpdf_(std::move(logpdf)), w_(Eigen::VectorXd::Zero(dim)), lp_(logpdf_(w_)) {}

    int dim() const override { return static_cast<int>(w_.size()); }
    const Eigen::VectorXd& state() const override { return w_; }
    void set_state(const Eigen::VectorXd& w) override { w_ = w; lp_ = logpdf_(w_); }
    double propose(int j, double newval) override {
        pend_j_ = j;
        pend_val_ = newval;
        Eigen::VectorXd wn = w_;
        wn[j] = newval;
        pend_lp_ = logpdf_(wn);
        return pend_lp_ - lp_;
    }
    void accept() override { w_[pend_j_] = pend_val_; lp_ = pend_lp_; }
    void reject() override {}

  private:
    std::function<double(const Eigen::VectorXd&)> logpdf_;
    Eigen::VectorXd w_;
    double lp_;
    int pend_j_ = -1;
    double pend_val_ = 0.0, pend_lp_ = 0.0;
};

/// Posterior target backed by the incremental cache.
class PosteriorTarget final : public ScamTarget {
  public:
    explicit PosteriorTarget(const PosteriorSpec& spec) : cache_(spec) {}

    int dim() const override { return static_cast<int>(cache_.w().size()); }
    const Eigen::VectorXd& state() const override { return cache_.w(); }
    void set_state(const Eigen::VectorXd& w) override { cache_.set_state(w); }
    double propose(int j, double newval) override { return cache_.propose(j, newval); }
    void accept() override { cache_.accept(); }
    void reject() override { cache_.reject(); }
    void revalidate() override { cache_.revalidate(); }

  private:
    EvalCache cache_;
};

struct RunReport {
    int dim = 0;
    long long samples_used = 0;  // L - ell_0
    double acceptance = 0.0;     // all accepts / all proposals
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;
    Eigen::VectorXd per_coord_acceptance;
};

struct ChainOutput {
    Eigen::VectorXd cm;      // post-burn-in mean of w
    Eigen::MatrixXd samples; // dim x count, only if store_samples
    int thin = 1;
};

std::pair<RunReport, ChainOutput> run_scam(ScamTarget& target, const ScamConfig& cfg);

/// Post-burn-in, thinned column mean of a stored chain (dim x L).
Eigen::VectorXd cm_from_chain(const Eigen::MatrixXd& chain, long long ell0, int thin);

/// Map the two halves of a CM vector back to functions (u, v).
std::pair<PLFunction, PLFunction> split_cm(const Eigen::VectorXd& w_cm, const PriorModel& prior);

}  // namespace deblur
