#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "deblur1d/convergence.hpp"
#include "deblur1d/experiment.hpp"

namespace py = pybind11;
using namespace deblur;

namespace {

Kernel kernel_from_args(const std::string& type, double width,
                        const std::vector<double>& table) {
    if (type == "periodized_gaussian") return Kernel::periodized_gaussian(width);
    if (type == "custom_table") return Kernel::custom_table(table);
    throw std::invalid_argument("kernel type must be periodized_gaussian or custom_table");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Edge-preserving Bayesian deconvolution of periodic 1-D signals";

    py::class_<MomentEstimate>(m, "MomentEstimate")
        .def_readonly("level", &MomentEstimate::level)
        .def_readonly("log_estimate", &MomentEstimate::log_estimate)
        .def_readonly("rel_std_error", &MomentEstimate::rel_std_error)
        .def("__repr__", [](const MomentEstimate& e) {
            return "MomentEstimate(level=" + std::to_string(e.level) +
                   ", log_estimate=" + std::to_string(e.log_estimate) +
                   ", rel_std_error=" + std::to_string(e.rel_std_error) + ")";
        });

    m.def(
        "sample_prior",
        [](int n, double epsilon, double q, std::uint64_t seed) {
            PriorModel model = PriorModel::build(n, PriorParams(epsilon, q));
            std::mt19937_64 rng(seed);
            PLFunction v = sample_v(model, rng);
            PLFunction u = sample_u_given_v(v, model, rng);
            return py::make_tuple(u.nodal, v.nodal);
        },
        py::arg("n"), py::arg("epsilon"), py::arg("q") = 4.0, py::arg("seed") = 0,
        "Draw (u, v) from the hierarchical prior; returns nodal values.");

    m.def(
        "forward_matrix",
        [](int n, int k, const std::string& kernel_type, double width,
           const std::vector<double>& table) {
            return assemble_a(kernel_from_args(kernel_type, width, table), n, k).A_mat;
        },
        py::arg("n"), py::arg("k"), py::arg("kernel_type") = "periodized_gaussian",
        py::arg("width") = 0.03, py::arg("table") = std::vector<double>{},
        "K x N matrix taking nodal values to measurement coordinates.");

    m.def(
        "synthesize",
        [](const Eigen::VectorXd& u_nodal, int k, const std::string& kernel_type, double width,
           const std::vector<double>& table, double sigma, std::uint64_t seed) {
            int n = 0;
            while ((1 << n) < u_nodal.size()) ++n;
            if ((1 << n) != u_nodal.size())
                throw std::invalid_argument("u_nodal length must be a power of two");
            ForwardOperator fop = assemble_a(kernel_from_args(kernel_type, width, table), n, k);
            std::mt19937_64 rng(seed);
            return synthesize(PLFunction{Mesh(n), u_nodal}, fop, sigma, rng).coeffs;
        },
        py::arg("u_nodal"), py::arg("k"), py::arg("kernel_type") = "periodized_gaussian",
        py::arg("width") = 0.03, py::arg("table") = std::vector<double>{},
        py::arg("sigma") = 1.0, py::arg("seed") = 0,
        "Blur a signal and add white noise in measurement coordinates.");

    m.def(
        "estimate",
        [](const Eigen::VectorXd& coeffs, int k, const std::string& config_json) {
            ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(config_json));
            cfg.validate();
            Measurement meas{k, coeffs, cfg.sigma, cfg.seed, "", ""};
            EstimateResult res = run_estimate(cfg, meas);
            py::dict out;
            out["u_cm"] = res.u_cm.nodal;
            out["v_cm"] = res.v_cm.nodal;
            out["acceptance"] = res.report.acceptance;
            out["samples"] = res.report.samples_used;
            out["time_s"] = res.report.wall_time_s;
            out["seed"] = res.report.seed;
            return out;
        },
        py::arg("coeffs"), py::arg("k"), py::arg("config_json") = "{}",
        "Run the SCAM sampler on a measurement; returns the CM estimate and run stats.");

    m.def(
        "log_posterior",
        [](const Eigen::VectorXd& w, const Eigen::VectorXd& coeffs, int k,
           const std::string& config_json) {
            ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(config_json));
            cfg.validate();
            PriorModel prior = PriorModel::build(cfg.n, cfg.prior_params());
            ForwardOperator fop = assemble_a(cfg.build_kernel(), cfg.n, cfg.k, cfg.quad_order);
            Measurement meas{k, coeffs, cfg.sigma, cfg.seed, "", ""};
            PosteriorSpec spec = PosteriorSpec::build(std::move(prior), std::move(fop), meas);
            return log_post(w, spec);
        },
        py::arg("w"), py::arg("coeffs"), py::arg("k"), py::arg("config_json") = "{}",
        "Log-posterior at coordinates w (u-block then v-block), pinned to 0 at w = 0.");

    m.def(
        "exp_moments",
        [](const std::vector<int>& levels, double b, int nsamples, double epsilon, double q,
           std::uint64_t seed) {
            return exp_moment_estimate(levels, b, nsamples, PriorParams(epsilon, q), seed);
        },
        py::arg("levels"), py::arg("b") = 1.0, py::arg("nsamples") = 2000,
        py::arg("epsilon") = 0.25, py::arg("q") = 4.0, py::arg("seed") = 0,
        "Monte Carlo log-moment estimates of the prior norm per level.");
}
