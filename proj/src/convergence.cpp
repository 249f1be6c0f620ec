#include "deblur1d/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace deblur {

namespace {

// least-squares slope of log2(value) against level (= -decay rate in N)
double fit_rate(const std::vector<int>& levels, const std::vector<double>& values) {
    if (levels.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < levels.size(); ++i) {
        if (!(values[i] > 0.0)) continue;
        double x = levels[i], y = std::log2(values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 3) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace

LevelSweepResult check_mult_conv(const std::function<double(double)>& v,
                                 const std::vector<int>& levels, const PriorParams& p) {
    LevelSweepResult r;
    r.name = "mult_conv";
    r.levels = levels;
    const double eps2 = p.epsilon * p.epsilon;
    std::vector<double> oscs;  // worst within-cell oscillation of v per level
    for (int n : levels) {
        Mesh mesh(n);
        PCFunction qv = cell_average(v, mesh, 16);
        const int G = 16 * mesh.cells;
        double sup = 0.0, osc = 0.0;
        for (int c = 0; c < mesh.cells; ++c) {
            double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
            for (int i = 0; i < 16; ++i) {
                double x = (c * 16 + i + 0.5) / G;
                double vx = v(x);
                vmin = std::min(vmin, vx);
                vmax = std::max(vmax, vx);
                double a = 1.0 / (eps2 + vx * vx);
                double b = 1.0 / (eps2 + qv.cellvals[c] * qv.cellvals[c]);
                sup = std::max(sup, std::abs(a - b));
            }
            osc = std::max(osc, vmax - vmin);
        }
        r.values.push_back(sup);
        oscs.push_back(osc);
    }
    r.rate = fit_rate(levels, r.values);
    // Pass: first-order decay on average. Single consecutive ratios wobble
    // with how the steep region of 1/(eps^2+v^2) lands on cell boundaries,
    // so the 1.8 threshold applies to the geometric mean, with a looser
    // floor on each pair. Exact zeros (constants) pass outright.
    double worst_ratio = std::numeric_limits<double>::infinity(), log_sum = 0.0;
    int pairs = 0;
    bool all_zero = true;
    for (size_t i = 1; i < r.values.size(); ++i) {
        if (r.values[i - 1] > 1e-13 || r.values[i] > 1e-13) all_zero = false;
        if (r.values[i - 1] <= 1e-13) continue;
        double ratio = r.values[i - 1] / std::max(r.values[i], 1e-300);
        worst_ratio = std::min(worst_ratio, ratio);
        log_sum += std::log(ratio);
        ++pairs;
    }
    bool decaying =
        all_zero || (pairs > 0 && worst_ratio >= 1.4 && std::exp(log_sum / pairs) >= 1.8);
    if (decaying) {
        r.pass = true;
    } else if (!oscs.empty() && oscs.back() > 0.25 * oscs.front()) {
        // within-cell oscillation of v itself is not shrinking: the input
        // is not Lipschitz, so the lemma's hypothesis fails; flag, not fail
        r.pass = true;
        r.note = "sup metric not decaying; input violates the Lipschitz hypothesis";
    } else {
        r.pass = false;
        r.note = "sup metric not decaying at first order for a Lipschitz input";
    }
    return r;
}

LevelSweepResult check_proj_conv(const std::vector<int>& levels, double t, const PriorParams& p) {
    if (t >= 0.5)
        throw std::invalid_argument("check_proj_conv: requires t < 1/2");
    LevelSweepResult r;
    r.name = "proj_conv";
    r.levels = levels;
    struct Mode {
        int freq;
        bool is_cos;
    };
    std::vector<Mode> battery;
    for (int j = 1; j <= 8; ++j) {
        battery.push_back({j, true});
        battery.push_back({j, false});
    }
    for (int n : levels) {
        Mesh mesh(n);
        HierarchicalBasis fb = build_basis(n, InnerKind::Dq, p);
        const int N = mesh.cells;
        double worst = 0.0;
        for (const Mode& md : battery) {
            auto f = [&](double x) {
                double a = 2.0 * M_PI * md.freq * x;
                return md.is_cos ? std::cos(a) : std::sin(a);
            };
            // <f, f_j>_Dq = sum_c (D_q f_j)_c (f(x_{c+1}) - f(x_c)); the
            // eps^q mean term vanishes on zero-mean Fourier modes.
            Eigen::VectorXd coef(N);
            for (int j = 0; j < N; ++j) {
                Eigen::VectorXd d = apply_dq(fb.vector(j), p).cellvals;
                double s = 0.0;
                for (int c = 0; c < N; ++c)
                    s += d[c] * (f(mesh.node(c + 1)) - f(mesh.node(c)));
                coef[j] = s / 1.0;
            }
            PLFunction snf = from_coords(coef, fb);
            // H^t distance via truncated Fourier sums; f has one exact mode
            int band = std::max(16 * N, 4 * md.freq);
            Eigen::VectorXcd cs = fourier_coeffs(snf, band);
            double acc = std::norm(cs[0]);  // f has no zero mode
            for (int m = 1; m <= band; ++m) {
                std::complex<double> cf(0.0, 0.0);
                if (m == md.freq) cf = md.is_cos ? std::complex<double>(0.5, 0.0)
                                                : std::complex<double>(0.0, -0.5);
                acc += 2.0 * std::pow(1.0 + 4.0 * M_PI * M_PI * m * m, t) * std::norm(cs[m] - cf);
            }
            double h1 = std::sqrt((1.0 + 4.0 * M_PI * M_PI * md.freq * md.freq) * 0.5);
            worst = std::max(worst, std::sqrt(acc) / h1);
        }
        r.values.push_back(worst);
    }
    r.rate = fit_rate(levels, r.values);
    r.pass = strictly_decreasing(r.values);
    return r;
}

std::vector<LevelSweepResult> check_gaussian_weak_conv(const std::function<double(double)>& v,
                                                       const std::vector<int>& levels,
                                                       const PriorParams& p) {
    if (levels.size() < 2)
        throw std::invalid_argument("check_gaussian_weak_conv: need >= 2 levels");
    std::vector<int> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    const int nf = sorted.back() + 2;  // fine-level surrogate for the limit
    HierarchicalBasis hb = build_basis(nf, InnerKind::L2, p);
    const int F = hb.mesh.cells;

    std::vector<Eigen::MatrixXd> reps;
    std::vector<double> traces;
    for (int n : sorted) {
        Mesh mesh(n);
        HierarchicalBasis fb = build_basis(n, InnerKind::Dq, p);
        SMatrix S = build_s(fb);
        Eigen::VectorXd vbar = cell_average(v, mesh, 16).cellvals;
        CondCovariance cov = build_c_from_vbar(vbar, fb, S, p);
        const int N = mesh.cells;
        Eigen::MatrixXd P(N, F);  // <f_j^n, h_l>_L2 on the common fine mesh
        for (int j = 0; j < N; ++j) {
            PLFunction fj = fb.vector(j).prolong(nf);
            for (int l = 0; l < F; ++l) P(j, l) = inner(fj, hb.vector(l));
        }
        reps.push_back(P.transpose() * cov.C * P);
        traces.push_back(reps.back().trace());
    }

    LevelSweepResult opnorm, trdiff;
    opnorm.name = "weak_conv_opnorm_diff";
    trdiff.name = "weak_conv_trace_diff";
    opnorm.note = trdiff.note = "means identically zero (centered construction)";
    for (size_t i = 0; i + 1 < reps.size(); ++i) {
        opnorm.levels.push_back(sorted[i + 1]);
        trdiff.levels.push_back(sorted[i + 1]);
        Eigen::MatrixXd diff = reps[i + 1] - reps[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
        opnorm.values.push_back(es.eigenvalues().cwiseAbs().maxCoeff());
        trdiff.values.push_back(std::abs(traces[i + 1] - traces[i]));
    }
    opnorm.rate = fit_rate(opnorm.levels, opnorm.values);
    trdiff.rate = fit_rate(trdiff.levels, trdiff.values);
    opnorm.pass = strictly_decreasing(opnorm.values);
    double bound = (std::pow(p.epsilon, -2.0 * p.q) + 1.0 / 12.0) / (p.epsilon * p.epsilon);
    bool under_bound = std::all_of(traces.begin(), traces.end(),
                                   [&](double tr) { return tr <= bound; });
    trdiff.pass = strictly_decreasing(trdiff.values) && under_bound;
    if (!under_bound) trdiff.note = "trace exceeds the uniform bound C'";
    return {std::move(opnorm), std::move(trdiff)};
}

LevelSweepResult check_exp_moments(const std::vector<int>& levels, double b, int nsamples,
                                   const PriorParams& p, std::uint64_t seed) {
    if (!(b > 0.0))
        throw std::invalid_argument("check_exp_moments: requires b > 0");
    LevelSweepResult r;
    r.name = "exp_moments";
    r.levels = levels;
    auto est = exp_moment_estimate(levels, b, nsamples, p, seed);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool finite = true;
    for (const auto& e : est) {
        r.values.push_back(e.log_estimate);  // log scale, see MomentEstimate
        if (!std::isfinite(e.log_estimate)) finite = false;
        lo = std::min(lo, e.log_estimate);
        hi = std::max(hi, e.log_estimate);
    }
    // The reported values are log-moments (the moments themselves overflow
    // double). The uniformity tripwire is a factor-2 band on these values:
    // additively for small logs, multiplicatively for large ones.
    r.pass = finite && (hi - lo <= std::log(2.0) || (lo > 0.0 && hi <= 2.0 * lo));
    if (!finite) r.note = "estimate not finite";
    else if (!r.pass) r.note = "log-estimates outside the factor-2 uniformity band";
    return r;
}

}  // namespace deblur
