#pragma once

#include <random>
#include <vector>

#include "deblur1d/basis.hpp"

namespace deblur {

/// The finite-dimensional hierarchical prior on (u, v) at one mesh level:
/// v is Gaussian around 1 in the H(nu) geometry, u | v is Gaussian with
/// covariance C(v) in the Dq-orthonormal coordinates.
struct PriorModel {
    PriorParams params;
    Mesh mesh;
    HierarchicalBasis gbasis;  // H(nu)-orthonormal
    HierarchicalBasis fbasis;  // Dq-orthonormal
    SMatrix S;

    static PriorModel build(int n, const PriorParams& p) {
        HierarchicalBasis fb = build_basis(n, InnerKind::Dq, p);
        SMatrix s = build_s(fb);
        return {p, Mesh(n), build_basis(n, InnerKind::Hnu, p), std::move(fb), std::move(s)};
    }
};

/// Draw v = 1 + sum_j xi_j g_j, xi iid standard normal.
PLFunction sample_v(const PriorModel& model, std::mt19937_64& rng);

/// log density of v up to an additive constant:
/// -1/2 (eps ||Dv||^2 + (1/4 eps) ||v - 1||^2).
double logpdf_v(const PLFunction& v, const PriorModel& model);

/// Draw u with coords C(v)^{1/2} w, w ~ N(0, I).
PLFunction sample_u_given_v(const PLFunction& v, const PriorModel& model, std::mt19937_64& rng);

/// log density of u given v up to a (u,v)-independent constant:
/// -1/2 int [ -N log(eps^2 + (Q_n v)^2) + (eps^2 + (Q_n v)^2) |D_q u|^2 ] dx.
double logpdf_u_given_v(const PLFunction& u, const PLFunction& v, const PriorModel& model);

double logpdf_joint(const PLFunction& u, const PLFunction& v, const PriorModel& model);

struct TraceDiagnostics {
    double trace_cun;     // trace of C_{U_n}(v) as an operator on L2
    double bound_cprime;  // eps^{-2} (eps^{-2q} + 1/12)
};

TraceDiagnostics trace_diagnostics(const PriorModel& model, const PLFunction& v);

struct MomentEstimate {
    int level;
    double log_estimate;   // log E exp(b ||(U_n,V_n)||); the moment itself
                           // overflows double at small eps, so keep the log
    double rel_std_error;  // standard error relative to the estimate
};

/// Monte Carlo estimates of E exp(b ||(U_n, V_n)||_{L2 x L2}) per level.
std::vector<MomentEstimate> exp_moment_estimate(const std::vector<int>& levels, double b,
                                                int nsamples, const PriorParams& p,
                                                std::uint64_t seed);

}  // namespace deblur
