#include <doctest.h>

#include <cmath>
#include <random>

#include "deblur1d/scam.hpp"

using namespace deblur;

TEST_CASE("update_sigma rule") {
    ScamConfig cfg;
    cfg.sweeps = 100;
    cfg.burnin = 10;
    cfg.sigma0 = 0.5;

    Welford w;
    // history with two-pass variance exactly 0.1: {-sqrt(.1), +sqrt(.1)} repeated
    for (int i = 0; i < 50; ++i) {
        w.push(std::sqrt(0.1));
        w.push(-std::sqrt(0.1));
    }
    CHECK(w.variance() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(update_sigma(w, cfg, 50) == doctest::Approx(0.241));
    CHECK(update_sigma(w, cfg, 5) == doctest::Approx(0.5));  // burn-in keeps sigma0

    Welford flat;
    for (int i = 0; i < 20; ++i) flat.push(3.0);
    CHECK(update_sigma(flat, cfg, 50) == doctest::Approx(1e-3));  // floor
}

TEST_CASE("Welford matches two-pass variance") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(1.0, 3.0);
    std::vector<double> xs(5000);
    Welford w;
    for (auto& x : xs) {
        x = g(rng);
        w.push(x);
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= xs.size();
    CHECK(w.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(w.variance() == doctest::Approx(var).epsilon(1e-9));
}

TEST_CASE("config validation") {
    ScamConfig cfg;
    cfg.sweeps = 100;
    cfg.burnin = 100;  // must be < sweeps
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.burnin = 10;
    cfg.s = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.s = 2.4;
    cfg.delta = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.delta = 1e-3;
    cfg.validate();
    CHECK(cfg.effective_burnin() == 10);
    cfg.burnin = -1;
    CHECK(cfg.effective_burnin() == 10);
}

TEST_CASE("isotropic normal target centers at zero") {
    const int dim = 8;
    FunctionTarget target(dim, [](const Eigen::VectorXd& w) { return -0.5 * w.squaredNorm(); });
    ScamConfig cfg;
    cfg.sweeps = 100000;
    cfg.seed = 42;
    auto [report, chain] = run_scam(target, cfg);
    CHECK(report.samples_used == 90000);
    CHECK(report.acceptance > 0.0);
    CHECK(report.acceptance < 1.0);
    // effective sample size is smaller than the raw count; 4 standard
    // errors with a conservative autocorrelation factor of 20
    double se = std::sqrt(20.0 / report.samples_used);
    for (int j = 0; j < dim; ++j) CHECK(std::abs(chain.cm[j]) < 4.0 * se);
}

TEST_CASE("frozen adaptation reproduces target variances") {
    FunctionTarget target(2, [](const Eigen::VectorXd& w) {
        return -0.5 * (w[0] * w[0] / 4.0 + w[1] * w[1] / 0.25);
    });
    ScamConfig cfg;
    cfg.sweeps = 1000000;
    cfg.burnin = 100000;
    cfg.freeze_after_burnin = true;
    cfg.store_samples = true;
    cfg.thin = 10;
    cfg.seed = 7;
    auto [report, chain] = run_scam(target, cfg);
    REQUIRE(chain.samples.cols() > 1000);
    for (int j = 0; j < 2; ++j) {
        Eigen::ArrayXd row = chain.samples.row(j).array();
        double m = row.mean();
        double var = (row - m).square().mean();
        double want = j == 0 ? 4.0 : 0.25;
        CHECK(std::abs(var - want) < 0.05 * want);
    }
}

TEST_CASE("deterministic under a fixed seed") {
    auto make = [] {
        return FunctionTarget(4, [](const Eigen::VectorXd& w) { return -0.5 * w.squaredNorm(); });
    };
    ScamConfig cfg;
    cfg.sweeps = 5000;
    cfg.seed = 99;
    cfg.store_samples = true;
    auto t1 = make();
    auto t2 = make();
    auto [r1, c1] = run_scam(t1, cfg);
    auto [r2, c2] = run_scam(t2, cfg);
    CHECK((c1.cm - c2.cm).cwiseAbs().maxCoeff() == 0.0);
    CHECK((c1.samples - c2.samples).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r1.acceptance == r2.acceptance);
}

TEST_CASE("fixed_v freezes the upper half") {
    FunctionTarget target(6, [](const Eigen::VectorXd& w) { return -0.5 * w.squaredNorm(); });
    ScamConfig cfg;
    cfg.sweeps = 2000;
    cfg.fixed_v = true;
    cfg.seed = 3;
    auto [report, chain] = run_scam(target, cfg);
    for (int j = 3; j < 6; ++j) {
        CHECK(target.state()[j] == 0.0);
        CHECK(chain.cm[j] == 0.0);
        CHECK(report.per_coord_acceptance[j] == 0.0);
    }
    CHECK(target.state().head(3).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("cm_from_chain") {
    Eigen::MatrixXd chain(2, 6);
    chain << 1, 1, 1, 1, 1, 1, -2, -2, -2, -2, -2, -2;
    Eigen::VectorXd cm = cm_from_chain(chain, 2, 1);
    CHECK(cm[0] == doctest::Approx(1.0));
    CHECK(cm[1] == doctest::Approx(-2.0));
    CHECK_THROWS_AS(cm_from_chain(chain, 6, 1), std::invalid_argument);

    // thinning an i.i.d. chain only adds Monte Carlo noise
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    Eigen::MatrixXd big(1, 40000);
    for (int i = 0; i < big.cols(); ++i) big(0, i) = g(rng);
    double full = cm_from_chain(big, 0, 1)[0];
    double thinned = cm_from_chain(big, 0, 4)[0];
    CHECK(std::abs(full - thinned) < 5.0 / std::sqrt(10000.0));

    // streaming CM equals the stored-chain mean on the same run
    FunctionTarget target(3, [](const Eigen::VectorXd& w) { return -0.5 * w.squaredNorm(); });
    ScamConfig cfg;
    cfg.sweeps = 4000;
    cfg.seed = 11;
    cfg.store_samples = true;
    auto [report, out] = run_scam(target, cfg);
    Eigen::VectorXd mean = out.samples.rowwise().mean();
    CHECK((mean - out.cm).cwiseAbs().maxCoeff() < 1e-12);
}
