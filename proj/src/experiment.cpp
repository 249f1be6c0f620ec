#include "deblur1d/experiment.hpp"

namespace deblur {

namespace {

std::function<double(double)> profile_function(const std::string& name) {
    if (name == "step") {
        // two jumps, at 1/4 and 3/4
        return [](double x) {
            double y = x - std::floor(x);
            return (y >= 0.25 && y < 0.75) ? 1.0 : 0.0;
        };
    }
    if (name == "step_ramp_bump") {
        return [](double x) {
            double y = x - std::floor(x);
            double val = 0.0;
            if (y >= 0.05 && y < 0.30) val += 1.0;
            if (y >= 0.40 && y < 0.60) val += 0.8 * (y - 0.40) / 0.20;
            double z = (y - 0.80) / 0.04;
            val += std::exp(-0.5 * z * z);
            return val;
        };
    }
    throw std::invalid_argument("signal: unknown profile '" + name + "'");
}

std::function<double(double)> segments_function(const json& segments) {
    struct Seg {
        std::string type;
        double from, to, a, b;
    };
    std::vector<Seg> segs;
    for (const json& s : segments) {
        Seg seg;
        seg.type = s.at("type").get<std::string>();
        seg.from = s.at("from").get<double>();
        seg.to = s.at("to").get<double>();
        if (seg.type == "constant") {
            seg.a = s.at("value").get<double>();
            seg.b = 0.0;
        } else if (seg.type == "linear") {
            seg.a = s.at("start").get<double>();
            seg.b = s.at("end").get<double>();
        } else if (seg.type == "bump") {
            seg.a = s.at("amplitude").get<double>();
            seg.b = s.at("width").get<double>();
        } else {
            throw std::invalid_argument("signal: unknown segment type '" + seg.type + "'");
        }
        segs.push_back(seg);
    }
    return [segs](double x) {
        double y = x - std::floor(x);
        double val = 0.0;
        for (const Seg& s : segs) {
            if (s.type == "bump") {
                double z = (y - 0.5 * (s.from + s.to)) / s.b;
                val += s.a * std::exp(-0.5 * z * z);
            } else if (y >= s.from && y < s.to) {
                if (s.type == "constant") val += s.a;
                else val += s.a + (s.b - s.a) * (y - s.from) / (s.to - s.from);
            }
        }
        return val;
    };
}

}  // namespace

std::function<double(double)> signal_function(const json& spec) {
    if (spec.contains("profile")) return profile_function(spec["profile"].get<std::string>());
    if (spec.contains("segments")) return segments_function(spec["segments"]);
    if (spec.contains("file")) {
        PLFunction f = load_signal(spec["file"].get<std::string>());
        return [f](double x) { return f(x); };
    }
    throw std::invalid_argument("signal: expected one of profile/segments/file");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.epsilon = j.value("epsilon", c.epsilon);
    c.q = j.value("q", c.q);
    c.n = j.value("n", c.n);
    c.k = j.value("k", c.k);
    if (j.contains("kernel")) c.kernel = j["kernel"];
    c.sigma = j.value("sigma", c.sigma);
    if (j.contains("signal")) c.signal = j["signal"];
    c.out_dir = j.value("out", c.out_dir);
    c.seed = j.value("seed", c.seed);
    c.quad_order = j.value("quad_order", c.quad_order);
    c.dump_chain = j.value("dump_chain", c.dump_chain);
    if (j.contains("mcmc")) {
        const json& m = j["mcmc"];
        c.mcmc.sweeps = m.value("sweeps", c.mcmc.sweeps);
        c.mcmc.burnin = m.value("burnin", c.mcmc.burnin);
        c.mcmc.sigma0 = m.value("sigma0", c.mcmc.sigma0);
        c.mcmc.s = m.value("s", c.mcmc.s);
        c.mcmc.delta = m.value("delta", c.mcmc.delta);
        c.mcmc.thin = m.value("thin", c.mcmc.thin);
        c.mcmc.fixed_v = m.value("fixed_v", c.mcmc.fixed_v);
        c.mcmc.freeze_after_burnin = m.value("freeze_after_burnin", c.mcmc.freeze_after_burnin);
    }
    c.mcmc.seed = c.seed;
    c.mcmc.store_samples = c.dump_chain;
    return c;
}

json ExperimentConfig::to_json() const {
    return {{"epsilon", epsilon},
            {"q", q},
            {"n", n},
            {"k", k},
            {"kernel", kernel},
            {"sigma", sigma},
            {"signal", signal},
            {"out", out_dir},
            {"seed", seed},
            {"quad_order", quad_order},
            {"dump_chain", dump_chain},
            {"mcmc",
             {{"sweeps", mcmc.sweeps},
              {"burnin", mcmc.effective_burnin()},
              {"sigma0", mcmc.sigma0},
              {"s", mcmc.s},
              {"delta", mcmc.delta},
              {"thin", mcmc.thin},
              {"fixed_v", mcmc.fixed_v},
              {"freeze_after_burnin", mcmc.freeze_after_burnin}}}};
}

void ExperimentConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("config.epsilon: must be > 0");
    if (!(q > 1.0)) throw std::invalid_argument("config.q: must be > 1");
    if (n < 0 || n > 12) throw std::invalid_argument("config.n: must be in [0, 12]");
    if (k < 0 || k > 12) throw std::invalid_argument("config.k: must be in [0, 12]");
    if (sigma < 0.0) throw std::invalid_argument("config.sigma: must be >= 0");
    if (quad_order < 2) throw std::invalid_argument("config.quad_order: must be >= 2");
    try {
        mcmc.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config.mcmc: ") + e.what());
    }
    build_kernel();            // rejects malformed kernel specs
    signal_function(signal);   // rejects malformed signal specs
}

Kernel ExperimentConfig::build_kernel() const {
    std::string type = kernel.value("type", "periodized_gaussian");
    if (type == "periodized_gaussian")
        return Kernel::periodized_gaussian(kernel.value("width", 0.03));
    if (type == "custom_table")
        return Kernel::custom_table(kernel.at("table").get<std::vector<double>>());
    throw std::invalid_argument("config.kernel.type: unknown type '" + type + "'");
}

PLFunction ExperimentConfig::build_signal() const {
    return PLFunction::from_samples(Mesh(n), signal_function(signal));
}

EstimateResult run_estimate(const ExperimentConfig& cfg, const Measurement& m) {
    if (m.k != cfg.k)
        throw std::invalid_argument("config.k: does not match the measurement file");
    PriorModel prior = PriorModel::build(cfg.n, cfg.prior_params());
    ForwardOperator fop = assemble_a(cfg.build_kernel(), cfg.n, cfg.k, cfg.quad_order);
    PosteriorSpec spec = PosteriorSpec::build(std::move(prior), std::move(fop), m);
    PosteriorTarget target(spec);
    ScamConfig mcmc = cfg.mcmc;
    if (mcmc.sigma0_vec.size() == 0) {
        // The first u-coordinate multiplies the basis vector of magnitude
        // eps^{-q} (the near-unconstrained mean mode); its posterior scale
        // is eps^q times everything else, so unit proposals would freeze it
        // at the origin. Match the initial proposal variance to that scale.
        mcmc.sigma0_vec = Eigen::VectorXd::Constant(2 << cfg.n, mcmc.sigma0);
        double eq = cfg.prior_params().eps_q();
        mcmc.sigma0_vec[0] *= eq * eq;
    }
    auto [report, chain] = run_scam(target, mcmc);
    auto [u_cm, v_cm] = split_cm(chain.cm, spec.prior);
    return {std::move(report), std::move(u_cm), std::move(v_cm), std::move(chain)};
}

}  // namespace deblur
