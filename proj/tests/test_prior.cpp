#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deblur1d/prior.hpp"

using namespace deblur;

namespace {

PLFunction random_pl(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mesh m{n};
    Eigen::VectorXd v(m.cells);
    for (int i = 0; i < m.cells; ++i) v[i] = g(rng);
    return {m, v};
}

}  // namespace

TEST_CASE("sample_v mean and Fourier variances") {
    PriorParams p(0.25, 4.0);
    auto model = PriorModel::build(5, p);
    const int N = model.mesh.cells;
    const int draws = 100000;
    std::mt19937_64 rng(101);

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(N);
    double c0 = 0.0, c0sq = 0.0;       // mean mode <v-1, 1>
    double c1r = 0.0, c1rsq = 0.0;     // cos mode j=1
    for (int s = 0; s < draws; ++s) {
        PLFunction v = sample_v(model, rng);
        mean += v.nodal;
        PLFunction d{v.mesh, v.nodal.array() - 1.0};
        double a0 = d.mean();
        c0 += a0;
        c0sq += a0 * a0;
        PLFunction cosmode = PLFunction::from_samples(
            model.mesh, [](double x) { return std::sqrt(2.0) * std::cos(2 * std::numbers::pi * x); });
        double a1 = inner(d, cosmode);
        c1r += a1;
        c1rsq += a1 * a1;
    }
    mean /= draws;
    // nodal sd of v is about sqrt(4 eps)=1; 5 standard errors
    CHECK((mean.array() - 1.0).abs().maxCoeff() < 5.0 * 1.2 / std::sqrt(double(draws)));

    double var0 = c0sq / draws - (c0 / draws) * (c0 / draws);
    double want0 = 4.0 * p.epsilon;  // j=0: (1/4eps)^{-1}
    CHECK(std::abs(var0 - want0) < 5.0 * want0 * std::sqrt(2.0 / draws));

    double var1 = c1rsq / draws - (c1r / draws) * (c1r / draws);
    double want1 = 1.0 / (1.0 / (4 * p.epsilon) + 4 * std::numbers::pi * std::numbers::pi * p.epsilon);
    // cos(2 pi x) is only approximately resolved at n=5; allow 5 SE plus 2% bias
    CHECK(std::abs(var1 - want1) < 5.0 * want1 * std::sqrt(2.0 / draws) + 0.02 * want1);
}

TEST_CASE("logpdf_v closed forms and isometry") {
    PriorParams p(0.25, 4.0);
    auto model = PriorModel::build(4, p);

    CHECK(logpdf_v(PLFunction::constant(model.mesh, 1.0), model) == doctest::Approx(0.0));
    double c = 0.7;
    CHECK(logpdf_v(PLFunction::constant(model.mesh, 1.0 + c), model) ==
          doctest::Approx(-c * c / 2.0));

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 4; ++rep) {
        PLFunction v = random_pl(4, rng);
        Eigen::VectorXd x = coords(PLFunction{v.mesh, v.nodal.array() - 1.0}, model.gbasis);
        CHECK(logpdf_v(v, model) == doctest::Approx(-0.5 * x.squaredNorm()).epsilon(1e-10));
    }
}

TEST_CASE("sample_u_given_v covariance matches C") {
    PriorParams p(1e-3, 4.0);
    auto model = PriorModel::build(2, p);
    PLFunction v = PLFunction::constant(model.mesh, 1.0);
    auto cov = build_c(v, model.fbasis, model.S, p);
    const int N = 4, draws = 200000;
    std::mt19937_64 rng(17);

    Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd sum1 = Eigen::VectorXd::Zero(N);
    for (int s = 0; s < draws; ++s) {
        PLFunction u = sample_u_given_v(v, model, rng);
        Eigen::VectorXd x = coords(u, model.fbasis);
        sum1 += x;
        sum2 += x * x.transpose();
    }
    Eigen::VectorXd m = sum1 / draws;
    Eigen::MatrixXd emp = sum2 / draws - m * m.transpose();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            // SE of a Gaussian covariance entry
            double se = std::sqrt((cov.C(i, i) * cov.C(j, j) + cov.C(i, j) * cov.C(i, j)) / draws);
            CHECK(std::abs(emp(i, j) - cov.C(i, j)) < 5.0 * se);
        }
}

TEST_CASE("logpdf_u_given_v against a dense Gaussian oracle") {
    PriorParams p(0.1, 4.0);
    auto model = PriorModel::build(3, p);
    std::mt19937_64 rng(23);
    PLFunction v = random_pl(3, rng);
    auto cov = build_c(v, model.fbasis, model.S, p);
    Eigen::LLT<Eigen::MatrixXd> llt(cov.C);

    // the two log densities may differ only by a u-independent constant
    double shift = 0.0;
    for (int rep = 0; rep < 6; ++rep) {
        PLFunction u = random_pl(3, rng);
        Eigen::VectorXd x = coords(u, model.fbasis);
        double oracle = 0.5 * cov.log_det() - 0.5 * x.dot(llt.solve(x));
        double got = logpdf_u_given_v(u, v, model);
        if (rep == 0)
            shift = got - oracle;
        else
            CHECK(got - oracle == doctest::Approx(shift).epsilon(1e-8));
    }

    // u = 0, v = 1, n=1 (N=2), eps=1e-3: density reduces to
    // +1/2 * sum log(eps^2 + 1) = log(1 + 1e-6) approx 1e-6
    PriorParams p2(1e-3, 4.0);
    auto m2 = PriorModel::build(1, p2);
    double lp = logpdf_u_given_v(PLFunction::constant(m2.mesh, 0.0),
                                 PLFunction::constant(m2.mesh, 1.0), m2);
    CHECK(lp == doctest::Approx(std::log1p(1e-6)).epsilon(1e-9));

    // symmetry: v and -v give identical conditionals
    PLFunction u = random_pl(3, rng);
    PLFunction vneg{v.mesh, -v.nodal};
    CHECK(logpdf_u_given_v(u, v, model) ==
          doctest::Approx(logpdf_u_given_v(u, vneg, model)).epsilon(1e-12));

    CHECK(logpdf_joint(u, v, model) ==
          doctest::Approx(logpdf_v(v, model) + logpdf_u_given_v(u, v, model)).epsilon(1e-12));
}

TEST_CASE("trace diagnostics stay below the uniform bound") {
    PriorParams p(1e-2, 4.0);
    CHECK(TraceDiagnostics{0, 0}.bound_cprime == 0);  // struct is plain data
    std::mt19937_64 rng(31);
    for (int n : {2, 4, 6}) {
        auto model = PriorModel::build(n, p);
        PLFunction v = sample_v(model, rng);
        auto td = trace_diagnostics(model, v);
        CHECK(td.bound_cprime ==
              doctest::Approx((1.0 / (p.epsilon * p.epsilon)) *
                              (std::pow(p.epsilon, -2 * p.q) + 1.0 / 12.0)));
        CHECK(td.trace_cun > 0.0);
        CHECK(td.trace_cun <= td.bound_cprime);
    }
}

TEST_CASE("exponential moments are finite and stable across levels") {
    PriorParams p(0.25, 4.0);
    auto est = exp_moment_estimate({2, 3, 4}, 0.1, 20000, p, 404);
    REQUIRE(est.size() == 3);
    for (const auto& e : est) {
        CHECK(std::isfinite(e.log_estimate));
        CHECK(e.log_estimate > 0.0);  // Jensen: E exp >= exp E||.|| > 1
        CHECK(e.rel_std_error > 0.0);
    }
    // same seed, same answer
    auto est2 = exp_moment_estimate({2, 3, 4}, 0.1, 20000, p, 404);
    CHECK(est2[1].log_estimate == est[1].log_estimate);
    // b -> 0 drives the moment to 1 (log to 0)
    auto small = exp_moment_estimate({3}, 1e-6, 20000, p, 7);
    CHECK(std::exp(small[0].log_estimate) == doctest::Approx(1.0).epsilon(1e-3));
    // common random numbers keep the log-estimates in a tight relative band
    CHECK(est[2].log_estimate < 2.0 * est[0].log_estimate);
    CHECK(est[0].log_estimate < 2.0 * est[2].log_estimate);
}
