#pragma once

#include "deblur1d/forward.hpp"
#include "deblur1d/prior.hpp"

namespace deblur {

/// Posterior target over w in R^{2N}: the first N entries are u-coordinates
/// in the Dq basis, the last N are coordinates of v - 1 in the H(nu) basis
/// (so w = 0 means u = 0, v = 1).
struct PosteriorSpec {
    PriorModel prior;
    ForwardOperator fop;
    Measurement m;

    // per-basis-vector precomputations for incremental updates
    Eigen::MatrixXd dq_f;    // N x N, D_q f_j cell values per column
    Eigen::MatrixXd a_f;     // K x N, A_mat applied to f_j
    Eigen::MatrixXd d_g;     // N x N, D g_j cell values
    Eigen::MatrixXd gbar;    // N x N, Q_n g_j cell averages
    double f0 = 0.0;         // F at w = 0, pins log_post(0) = 0

    static PosteriorSpec build(PriorModel prior, ForwardOperator fop, Measurement m);

    PLFunction u_from_w(const Eigen::VectorXd& w) const;
    PLFunction v_from_w(const Eigen::VectorXd& w) const;
};

/// The posterior energy
/// F = int [ -N log(eps^2+(Q_n v)^2) + (eps^2+(Q_n v)^2)|D_q u|^2
///           + eps|Dv|^2 + (1/4 eps)(1-v)^2 + |A u - m|^2 ] dx.
double f_eval(const PLFunction& u, const PLFunction& v, const PosteriorSpec& spec);

/// -(F(w) - F(0)) / 2.
double log_post(const Eigen::VectorXd& w, const PosteriorSpec& spec);

/// Single-owner mutable cache for one chain: keeps w together with the
/// derived quantities each coordinate update touches, so a proposal costs
/// O(N + K) instead of a full re-evaluation.
class EvalCache {
  public:
    explicit EvalCache(const PosteriorSpec& spec);

    const Eigen::VectorXd& w() const { return w_; }
    double log_post_value() const { return lp_; }

    void set_state(const Eigen::VectorXd& w);

    /// Log-posterior change for w_j := newval; commit with accept().
    double propose(int j, double newval);
    void accept();
    void reject() { pending_ = false; }

    /// Recompute everything from w; returns the drift against the cached
    /// log-posterior. Drift above 1e-6 is an error.
    double revalidate();

  private:
    struct Terms {
        double t_logdet, t_coupling, t_dv, t_vdev, t_data;
        double total() const { return t_logdet + t_coupling + t_dv + t_vdev + t_data; }
    };
    Terms compute_terms() const;

    const PosteriorSpec& spec_;
    int N_;

    Eigen::VectorXd w_;
    Eigen::VectorXd u_nodal_, v_nodal_;
    Eigen::VectorXd dqu_, vbar_, dv_, resid_;
    Terms terms_;
    double lp_;

    // pending proposal
    bool pending_ = false;
    int pend_j_ = -1;
    double pend_val_ = 0.0;
    Eigen::VectorXd pend_vec_a_, pend_vec_b_, pend_vec_c_;  // role depends on block
    Terms pend_terms_;
    double pend_lp_ = 0.0;
};

}  // namespace deblur
