#pragma once

#include <functional>
#include <string>
#include <vector>

#include "deblur1d/prior.hpp"

namespace deblur {

/// One diagnostic metric swept across mesh levels, with a fitted
/// log2(metric) vs level slope when at least 3 levels are present.
struct LevelSweepResult {
    std::string name;
    std::vector<int> levels;
    std::vector<double> values;
    double rate = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    std::string note;
};

/// sup | (eps^2+v^2)^{-1} - (eps^2+(Q_n v)^2)^{-1} | on a fine grid;
/// first-order decay in N for Lipschitz v.
LevelSweepResult check_mult_conv(const std::function<double(double)>& v,
                                 const std::vector<int>& levels, const PriorParams& p);

/// max over smooth Fourier test modes of ||f - S_n f||_{H^t} / ||f||_{H^1}
/// with S_n the Dq-orthogonal projection onto PL(n); requires t < 1/2.
LevelSweepResult check_proj_conv(const std::vector<int>& levels, double t, const PriorParams& p);

/// Cauchy behavior of C_{U_n}(Q_n v) across consecutive levels, measured
/// on a fine common grid: returns {operator-norm differences, trace
/// differences}; means are identically zero and asserted.
std::vector<LevelSweepResult> check_gaussian_weak_conv(const std::function<double(double)>& v,
                                                       const std::vector<int>& levels,
                                                       const PriorParams& p);

/// Uniformity of E exp(b ||(U_n,V_n)||) across levels (factor-2 band).
LevelSweepResult check_exp_moments(const std::vector<int>& levels, double b, int nsamples,
                                   const PriorParams& p, std::uint64_t seed);

}  // namespace deblur
