#include "deblur1d/posterior.hpp"

namespace deblur {

namespace {

// exact int (1-v)^2 dx for PL v
double vdev_sq(const Eigen::VectorXd& v_nodal) {
    const int N = static_cast<int>(v_nodal.size());
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        double a = 1.0 - v_nodal[j], b = 1.0 - v_nodal[(j + 1) % N];
        s += (a * a + a * b + b * b) / 3.0;
    }
    return s / N;
}

}  // namespace

PosteriorSpec PosteriorSpec::build(PriorModel prior, ForwardOperator fop, Measurement m) {
    if (fop.n != prior.mesh.level)
        throw std::invalid_argument("PosteriorSpec: operator level != prior level");
    if (fop.k != m.k)
        throw std::invalid_argument("PosteriorSpec: operator k != measurement k");
    const int N = prior.mesh.cells;
    PosteriorSpec spec{std::move(prior), std::move(fop), std::move(m),
                       Eigen::MatrixXd(N, N), Eigen::MatrixXd(), Eigen::MatrixXd(N, N),
                       Eigen::MatrixXd(N, N)};
    for (int j = 0; j < N; ++j) {
        spec.dq_f.col(j) = apply_dq(spec.prior.fbasis.vector(j), spec.prior.params).cellvals;
        PLFunction gj = spec.prior.gbasis.vector(j);
        spec.d_g.col(j) = derivative(gj).cellvals;
        spec.gbar.col(j) = cell_average(gj).cellvals;
    }
    spec.a_f = spec.fop.A_mat * spec.prior.fbasis.columns;
    spec.f0 = f_eval(PLFunction::constant(spec.prior.mesh, 0.0),
                     PLFunction::constant(spec.prior.mesh, 1.0), spec);
    return spec;
}

PLFunction PosteriorSpec::u_from_w(const Eigen::VectorXd& w) const {
    const int N = prior.mesh.cells;
    return from_coords(w.head(N), prior.fbasis);
}

PLFunction PosteriorSpec::v_from_w(const Eigen::VectorXd& w) const {
    const int N = prior.mesh.cells;
    PLFunction v = from_coords(w.tail(N), prior.gbasis);
    v.nodal.array() += 1.0;
    return v;
}

double f_eval(const PLFunction& u, const PLFunction& v, const PosteriorSpec& spec) {
    if (u.mesh != spec.prior.mesh || v.mesh != spec.prior.mesh)
        throw std::invalid_argument("f_eval: mesh mismatch");
    const double eps = spec.prior.params.epsilon;
    const int N = spec.prior.mesh.cells;
    Eigen::ArrayXd coef = eps * eps + cell_average(v).cellvals.array().square();
    Eigen::ArrayXd dqu = apply_dq(u, spec.prior.params).cellvals.array();
    Eigen::ArrayXd dv = derivative(v).cellvals.array();
    double t_logdet = -coef.log().sum();
    double t_coupling = (coef * dqu.square()).sum() / N;
    double t_dv = eps * dv.square().sum() / N;
    double t_vdev = vdev_sq(v.nodal) / (4.0 * eps);
    double t_data = (spec.fop.A_mat * u.nodal - spec.m.coeffs).squaredNorm();
    return t_logdet + t_coupling + t_dv + t_vdev + t_data;
}

double log_post(const Eigen::VectorXd& w, const PosteriorSpec& spec) {
    return -0.5 * (f_eval(spec.u_from_w(w), spec.v_from_w(w), spec) - spec.f0);
}

EvalCache::EvalCache(const PosteriorSpec& spec) : spec_(spec), N_(spec.prior.mesh.cells) {
    set_state(Eigen::VectorXd::Zero(2 * N_));
}

void EvalCache::set_state(const Eigen::VectorXd& w) {
    if (w.size() != 2 * N_) throw std::invalid_argument("EvalCache: bad state size");
    pending_ = false;
    w_ = w;
    PLFunction u = spec_.u_from_w(w_);
    PLFunction v = spec_.v_from_w(w_);
    u_nodal_ = u.nodal;
    v_nodal_ = v.nodal;
    dqu_ = apply_dq(u, spec_.prior.params).cellvals;
    vbar_ = cell_average(v).cellvals;
    dv_ = derivative(v).cellvals;
    resid_ = spec_.fop.A_mat * u_nodal_ - spec_.m.coeffs;
    terms_ = compute_terms();
    lp_ = -0.5 * (terms_.total() - spec_.f0);
}

EvalCache::Terms EvalCache::compute_terms() const {
    const double eps = spec_.prior.params.epsilon;
    Eigen::ArrayXd coef = eps * eps + vbar_.array().square();
    Terms t;
    t.t_logdet = -coef.log().sum();
    t.t_coupling = (coef * dqu_.array().square()).sum() / N_;
    t.t_dv = eps * dv_.array().square().sum() / N_;
    t.t_vdev = vdev_sq(v_nodal_) / (4.0 * eps);
    t.t_data = resid_.squaredNorm();
    return t;
}

double EvalCache::propose(int j, double newval) {
    if (j < 0 || j >= 2 * N_) throw std::out_of_range("EvalCache::propose: bad index");
    const double eps = spec_.prior.params.epsilon;
    const double delta = newval - w_[j];
    pend_terms_ = terms_;
    if (j < N_) {
        pend_vec_a_ = dqu_ + delta * spec_.dq_f.col(j);
        pend_vec_b_ = resid_ + delta * spec_.a_f.col(j);
        Eigen::ArrayXd coef = eps * eps + vbar_.array().square();
        pend_terms_.t_coupling = (coef * pend_vec_a_.array().square()).sum() / N_;
        pend_terms_.t_data = pend_vec_b_.squaredNorm();
    } else {
        int jv = j - N_;
        pend_vec_a_ = v_nodal_ + delta * spec_.prior.gbasis.columns.col(jv);
        pend_vec_b_ = vbar_ + delta * spec_.gbar.col(jv);
        pend_vec_c_ = dv_ + delta * spec_.d_g.col(jv);
        Eigen::ArrayXd coef = eps * eps + pend_vec_b_.array().square();
        pend_terms_.t_logdet = -coef.log().sum();
        pend_terms_.t_coupling = (coef * dqu_.array().square()).sum() / N_;
        pend_terms_.t_dv = eps * pend_vec_c_.array().square().sum() / N_;
        pend_terms_.t_vdev = vdev_sq(pend_vec_a_) / (4.0 * eps);
    }
    pend_j_ = j;
    pend_val_ = newval;
    pend_lp_ = -0.5 * (pend_terms_.total() - spec_.f0);
    pending_ = true;
    return pend_lp_ - lp_;
}

void EvalCache::accept() {
    if (!pending_) throw std::logic_error("EvalCache::accept: no pending proposal");
    const double delta = pend_val_ - w_[pend_j_];
    w_[pend_j_] = pend_val_;
    if (pend_j_ < N_) {
        u_nodal_ += delta * spec_.prior.fbasis.columns.col(pend_j_);
        dqu_ = pend_vec_a_;
        resid_ = pend_vec_b_;
    } else {
        v_nodal_ = pend_vec_a_;
        vbar_ = pend_vec_b_;
        dv_ = pend_vec_c_;
    }
    terms_ = pend_terms_;
    lp_ = pend_lp_;
    pending_ = false;
}

double EvalCache::revalidate() {
    double lp_cached = lp_;
    Eigen::VectorXd w = w_;
    set_state(w);
    double drift = std::abs(lp_cached - lp_);
    // absolute floor plus float noise proportional to the magnitude
    if (drift > 1e-6 * (1.0 + std::abs(lp_)))
        throw std::runtime_error("EvalCache: cached log-posterior drifted beyond tolerance");
    return drift;
}

}  // namespace deblur
