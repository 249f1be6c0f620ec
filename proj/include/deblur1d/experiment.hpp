#pragma once

#include "deblur1d/io.hpp"

namespace deblur {

/// Resolved experiment configuration; defaults fill any field missing
/// from the JSON document.
struct ExperimentConfig {
    double epsilon = 1e-3;
    double q = 4.0;
    int n = 6;
    int k = 6;
    json kernel = {{"type", "periodized_gaussian"}, {"width", 0.03}};
    double sigma = 1.0;
    json signal = {{"profile", "step_ramp_bump"}};
    ScamConfig mcmc;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int quad_order = 8;
    bool dump_chain = false;

    static ExperimentConfig from_json(const json& j);
    json to_json() const;
    void validate() const;  // throws std::invalid_argument naming the field

    PriorParams prior_params() const { return PriorParams(epsilon, q); }
    Kernel build_kernel() const;
    /// Truth signal sampled at the nodes of level n.
    PLFunction build_signal() const;
};

/// Evaluate a signal spec ({"profile": name} | {"file": path} |
/// {"segments": [...]}) as a function on the circle.
std::function<double(double)> signal_function(const json& spec);

struct EstimateResult {
    RunReport report;
    PLFunction u_cm;
    PLFunction v_cm;
    ChainOutput chain;
};

/// Full estimation pipeline: prior model + forward operator + SCAM.
EstimateResult run_estimate(const ExperimentConfig& cfg, const Measurement& m);

}  // namespace deblur
