#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "sqmc/fk.hpp"
#include "sqmc/models/lingauss.hpp"
#include "sqmc/models/msv.hpp"
#include "sqmc/models/neural.hpp"
#include "sqmc/models/toy.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

using namespace sqmc;
using namespace sqmc::models;

namespace {

// Plain dense Gaussian log-density, independent of the library helpers.
double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                  const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd inv = cov.inverse();
    const double quad = (x - mean).dot(inv * (x - mean));
    return -0.5 * quad - 0.5 * std::log(cov.determinant()) -
           0.5 * static_cast<double>(x.size()) * std::log(2.0 * M_PI);
}

// Joint density of the stacked observation vector: the whole model is one
// big Gaussian, so p(y_{0:T}) has a closed form without any filtering.
double joint_gaussian_loglik(const LinearGaussianParams& p,
                             const std::vector<Eigen::VectorXd>& obs) {
    const int t_len = static_cast<int>(obs.size());
    const int d = static_cast<int>(p.transition.rows());
    const int dy = static_cast<int>(p.observation.rows());

    // x_t = A^t (x_0 - m0) + sum_s A^{t-s} w_s + A^t m0 = M e + mean.
    const int e_dim = d * t_len;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * t_len, e_dim);
    Eigen::VectorXd mean_x(d * t_len);
    Eigen::MatrixXd sigma_e = Eigen::MatrixXd::Zero(e_dim, e_dim);
    sigma_e.topLeftCorner(d, d) = p.prior_cov;
    for (int t = 1; t < t_len; ++t)
        sigma_e.block(d * t, d * t, d, d) = p.transition_noise;

    Eigen::MatrixXd a_pow = Eigen::MatrixXd::Identity(d, d);
    for (int t = 0; t < t_len; ++t) {
        mean_x.segment(d * t, d) = a_pow * p.prior_mean;
        Eigen::MatrixXd coef = Eigen::MatrixXd::Identity(d, d);
        for (int s = t; s >= 0; --s) {
            m.block(d * t, d * s, d, d) = coef;
            coef = coef * p.transition;
        }
        a_pow = p.transition * a_pow;
    }

    Eigen::MatrixXd b_blk = Eigen::MatrixXd::Zero(dy * t_len, d * t_len);
    Eigen::MatrixXd r_blk = Eigen::MatrixXd::Zero(dy * t_len, dy * t_len);
    Eigen::VectorXd y(dy * t_len);
    for (int t = 0; t < t_len; ++t) {
        b_blk.block(dy * t, d * t, dy, d) = p.observation;
        r_blk.block(dy * t, dy * t, dy, dy) = p.observation_noise;
        y.segment(dy * t, dy) = obs[t];
    }
    const Eigen::MatrixXd cov_y =
        b_blk * m * sigma_e * m.transpose() * b_blk.transpose() + r_blk;
    return mvn_logpdf(y, b_blk * mean_x, cov_y);
}

}  // namespace

TEST_CASE("kalman T=0 equals the closed-form marginal") {
    const auto p = LinearGaussianParams::scalar(0.7, 0.5, 2.0, 0.3, 1.0, 0.8);
    std::vector<Eigen::VectorXd> obs{Eigen::VectorXd::Constant(1, 2.5)};
    const auto res = kalman_suite(p, obs);
    // y_0 ~ N(b m0, b^2 p0 + r)
    const double var = 2.0 * 2.0 * 0.8 + 0.3;
    const double expect =
        -0.5 * (2.5 - 2.0) * (2.5 - 2.0) / var - 0.5 * std::log(2.0 * M_PI * var);
    CHECK(res.loglik == doctest::Approx(expect).epsilon(1e-12));
    CHECK(res.partial_loglik[0] == doctest::Approx(expect).epsilon(1e-12));
    // Posterior update agrees with the scalar Bayes formula.
    const double gain = 2.0 * 0.8 / var;
    CHECK(res.filter_mean[0](0) ==
          doctest::Approx(1.0 + gain * (2.5 - 2.0)).epsilon(1e-12));
    CHECK(res.smoother_mean[0](0) == doctest::Approx(res.filter_mean[0](0)));
}

TEST_CASE("kalman matches the stacked joint Gaussian density, d=2") {
    LinearGaussianParams p;
    p.transition.resize(2, 2);
    p.transition << 0.8, 0.2, -0.1, 0.7;
    p.transition_noise.resize(2, 2);
    p.transition_noise << 1.0, 0.3, 0.3, 0.7;
    p.observation.resize(2, 2);
    p.observation << 1.0, 0.5, 0.0, 1.0;
    p.observation_noise.resize(2, 2);
    p.observation_noise << 0.5, 0.1, 0.1, 0.4;
    p.prior_mean = Eigen::Vector2d(0.3, -0.2);
    p.prior_cov = Eigen::Matrix2d::Identity();

    const auto obs = simulate_lingauss(p, 5, 17);
    const auto res = kalman_suite(p, obs);
    CHECK(res.loglik == doctest::Approx(joint_gaussian_loglik(p, obs)).epsilon(1e-10));
    // Partial likelihoods are increasing in information, ending at the total.
    CHECK(res.partial_loglik.back() == doctest::Approx(res.loglik));
    std::vector<Eigen::VectorXd> head(obs.begin(), obs.begin() + 3);
    CHECK(res.partial_loglik[2] ==
          doctest::Approx(joint_gaussian_loglik(p, head)).epsilon(1e-10));
}

TEST_CASE("kalman observation-dominated limit pins the filter mean to y") {
    auto p = LinearGaussianParams::scalar(0.9, 1.0, 1.0, 1e-10, 0.0, 1.0);
    const auto obs = simulate_lingauss(p, 10, 3);
    const auto res = kalman_suite(p, obs);
    for (int t = 0; t <= 10; ++t)
        CHECK(std::abs(res.filter_mean[t](0) - obs[t](0)) < 1e-4);
    // Smoother agrees with filter at the final time.
    CHECK(res.smoother_mean[10](0) == doctest::Approx(res.filter_mean[10](0)));
    CHECK(res.smoother_cov[10](0, 0) == doctest::Approx(res.filter_cov[10](0, 0)));
}

TEST_CASE("toy transition at u=0.5 returns the drift exactly") {
    ToyUnivariateParams p;
    const auto model = build_toy(p, std::vector<double>{0.0, 0.0, 0.0});
    const double x_prev = 1.7, u = 0.5;
    double x = 0.0;
    model->gamma_t(2, {&x_prev, 1}, {&u, 1}, {&x, 1});
    const double drift = p.b1 * x_prev + p.b2 * x_prev / (1.0 + x_prev * x_prev) +
                         p.b3 * std::cos(p.b4 * 2.0);
    CHECK(x == doctest::Approx(drift).epsilon(1e-14));

    // At x_prev = 0 the state-dependent part vanishes.
    const double zero = 0.0;
    model->gamma_t(3, {&zero, 1}, {&u, 1}, {&x, 1});
    CHECK(x == doctest::Approx(p.b3 * std::cos(p.b4 * 3.0)).epsilon(1e-14));
}

TEST_CASE("toy weight and transition density formulas") {
    ToyUnivariateParams p;
    const std::vector<double> obs{1.25, -0.5};
    const auto model = build_toy(p, obs);
    const double x = 3.0, x_prev = -2.0;
    const double z = obs[1] - x * x / p.a;
    CHECK(model->log_gt(1, {&x_prev, 1}, {&x, 1}) ==
          doctest::Approx(-0.5 * z * z - 0.5 * std::log(2.0 * M_PI)).epsilon(1e-13));

    REQUIRE(model->has_transition_density());
    const double drift = p.b1 * x_prev + p.b2 * x_prev / (1.0 + x_prev * x_prev) +
                         p.b3 * std::cos(p.b4 * 1.0);
    const double expect = -0.5 * (x - drift) * (x - drift) / p.sigma2 -
                          0.5 * std::log(2.0 * M_PI * p.sigma2);
    CHECK(model->log_transition_density(1, {&x_prev, 1}, {&x, 1}) ==
          doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("toy engines agree on the evidence within Monte Carlo error") {
    ToyUnivariateParams p;
    const auto obs = simulate_toy(p, 50, 5);
    const auto model = build_toy(p, obs);
    auto stats = [&](bool qmc, double& se) {
        const int reps = 20;
        std::vector<double> v(reps);
        double mean = 0.0;
        for (int s = 0; s < reps; ++s) {
            if (qmc) {
                SqmcConfig config;
                config.scheme = RandomizationScheme::owen(200 + s);
                v[s] = sqmc_run(*model, 512, 50, config).steps[50].log_z;
            } else {
                v[s] = smc_run(*model, 512, 50, Resampler::Systematic, 200 + s)
                           .steps[50]
                           .log_z;
            }
            mean += v[s];
        }
        mean /= reps;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        se = std::sqrt(var / (reps - 1) / reps);
        return mean;
    };
    double se_smc = 0.0, se_sqmc = 0.0;
    const double smc = stats(false, se_smc);
    const double sqmc = stats(true, se_sqmc);
    CHECK(std::abs(smc - sqmc) <
          3.0 * std::sqrt(se_smc * se_smc + se_sqmc * se_sqmc) + 0.05);
}

TEST_CASE("msv stationary covariance is the AR(1) fixed point") {
    const auto p = MsvParams::defaults(3);
    const Eigen::MatrixXd cov = msv_stationary_cov(p);
    const Eigen::VectorXd psi_sqrt = p.psi2_diag.cwiseSqrt();
    const Eigen::MatrixXd q =
        psi_sqrt.asDiagonal() * p.corr.bottomRightCorner(3, 3) * psi_sqrt.asDiagonal();
    const Eigen::MatrixXd phi = p.phi_diag.asDiagonal();
    CHECK((phi * cov * phi.transpose() + q - cov).norm() < 1e-12);
    // Marginal variance 0.1 / (1 - 0.81).
    for (int i = 0; i < 3; ++i)
        CHECK(cov(i, i) == doctest::Approx(0.1 / 0.19).epsilon(1e-12));
}

TEST_CASE("msv transition push-forward has the right moments") {
    const auto p = MsvParams::defaults(2);
    std::vector<Eigen::VectorXd> obs(3, Eigen::VectorXd::Zero(2));
    const auto model = build_msv(p, obs);

    const std::vector<double> x_prev{-8.0, -10.0};
    const Eigen::Map<const Eigen::Vector2d> xp(x_prev.data());
    const Eigen::VectorXd target_mean =
        p.mu + p.phi_diag.asDiagonal() * (xp - p.mu);
    const Eigen::VectorXd psi_sqrt = p.psi2_diag.cwiseSqrt();
    const Eigen::MatrixXd target_cov =
        psi_sqrt.asDiagonal() * p.corr.bottomRightCorner(2, 2) * psi_sqrt.asDiagonal();

    CounterRng rng(606, 0);
    const int n = 100000;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
    std::vector<double> u(2), x(2);
    for (int i = 0; i < n; ++i) {
        u[0] = rng.uniform();
        u[1] = rng.uniform();
        model->gamma_t(1, x_prev, u, x);
        const Eigen::Map<const Eigen::Vector2d> xv(x.data());
        mean += xv;
        second += xv * xv.transpose();
    }
    mean /= n;
    const Eigen::Matrix2d cov = second / n - mean * mean.transpose();
    for (int i = 0; i < 2; ++i) {
        const double se = std::sqrt(target_cov(i, i) / n);
        CHECK(std::abs(mean(i) - target_mean(i)) < 3.0 * se);
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(cov(i, j) - target_cov(i, j)) < 0.01);
    }
}

TEST_CASE("msv weights: no leverage makes G independent of the previous state") {
    const auto p = MsvParams::defaults_no_leverage(2);
    std::vector<Eigen::VectorXd> obs(2, Eigen::VectorXd::Constant(2, 0.01));
    const auto model = build_msv(p, obs);
    const std::vector<double> x{-9.1, -8.7};
    const std::vector<double> xa{-8.0, -9.5}, xb{-10.0, -8.5};
    CHECK(model->log_gt(1, xa, x) == doctest::Approx(model->log_gt(1, xb, x)).epsilon(1e-13));

    // Manual oracle: N(S^{-1/2} y; 0, C_eps) with the log-volatility Jacobian.
    const Eigen::Map<const Eigen::Vector2d> xv(x.data());
    const Eigen::Vector2d scaled =
        (-0.5 * xv.array()).exp().matrix().asDiagonal() * obs[1];
    const double expect =
        mvn_logpdf(scaled, Eigen::Vector2d::Zero(), p.corr.topLeftCorner(2, 2)) -
        0.5 * xv.sum();
    CHECK(model->log_gt(1, xa, x) == doctest::Approx(expect).epsilon(1e-12));

    // With leverage the weight does depend on the previous state.
    const auto leveraged = build_msv(MsvParams::defaults(2), obs);
    CHECK(leveraged->log_gt(1, xa, x) != leveraged->log_gt(1, xb, x));
}

TEST_CASE("msv transition density matches the dense Gaussian formula") {
    const auto p = MsvParams::defaults(2);
    std::vector<Eigen::VectorXd> obs(2, Eigen::VectorXd::Zero(2));
    const auto model = build_msv(p, obs);
    REQUIRE(model->has_transition_density());
    const std::vector<double> x_prev{-8.5, -9.5}, x{-9.2, -8.9};
    const Eigen::Map<const Eigen::Vector2d> xp(x_prev.data()), xv(x.data());
    const Eigen::VectorXd psi_sqrt = p.psi2_diag.cwiseSqrt();
    const Eigen::MatrixXd q =
        psi_sqrt.asDiagonal() * p.corr.bottomRightCorner(2, 2) * psi_sqrt.asDiagonal();
    const Eigen::VectorXd mean = p.mu + p.phi_diag.asDiagonal() * (xp - p.mu);
    CHECK(model->log_transition_density(1, x_prev, x) ==
          doctest::Approx(mvn_logpdf(xv, mean, q)).epsilon(1e-12));
}

TEST_CASE("msv parameter validation") {
    auto p = MsvParams::defaults(2);
    p.phi_diag(0) = 1.0;
    CHECK_THROWS(p.validate());
    p = MsvParams::defaults(2);
    p.psi2_diag(1) = 0.0;
    CHECK_THROWS(p.validate());
    p = MsvParams::defaults(2);
    p.corr(0, 1) = 2.0;  // asymmetric
    CHECK_THROWS(p.validate());
}

TEST_CASE("neural positions are exact integrals of the velocities") {
    const auto p = NeuralDecodingParams::defaults(7);
    std::vector<Eigen::VectorXd> obs(3, Eigen::VectorXd::Zero(p.d_y));
    const auto model = build_neural(p, obs);
    CHECK(model->dim() == 4);
    CHECK(model->rand_dim() == 2);

    CounterRng rng(99, 0);
    std::vector<double> x_prev(4), v(2), x(4);
    for (int rep = 0; rep < 100; ++rep) {
        for (auto& c : x_prev) c = 2.0 * rng.uniform() - 1.0;
        for (auto& c : v) c = rng.uniform();
        model->gamma_t(1, x_prev, v, x);
        CHECK(x[0] == x_prev[0] + p.delta * x[2]);
        CHECK(x[1] == x_prev[1] + p.delta * x[3]);
    }
    // Median uniforms leave the velocities unchanged.
    v = {0.5, 0.5};
    model->gamma_t(1, x_prev, v, x);
    CHECK(x[2] == x_prev[2]);
    CHECK(x[3] == x_prev[3]);
}

TEST_CASE("neural Poisson weight formula") {
    auto p = NeuralDecodingParams::defaults(7);
    std::vector<Eigen::VectorXd> obs(2, Eigen::VectorXd::Zero(p.d_y));
    obs[1](0) = 3.0;
    obs[1](4) = 1.0;
    const auto model = build_neural(p, obs);
    const std::vector<double> x_prev(4, 0.0), x{0.3, -0.2, 0.5, 0.1};
    const Eigen::Map<const Eigen::Vector4d> xv(x.data());
    double expect = 0.0;
    for (int i = 0; i < p.d_y; ++i) {
        const double log_rate = std::log(p.delta) + p.alpha(i) + p.beta.row(i).dot(xv);
        expect += obs[1](i) * log_rate - std::exp(log_rate) -
                  std::lgamma(obs[1](i) + 1.0);
    }
    CHECK(model->log_gt(1, x_prev, x) == doctest::Approx(expect).epsilon(1e-13));

    // All-zero counts reduce to minus the summed rates.
    double rates = 0.0;
    for (int i = 0; i < p.d_y; ++i)
        rates += p.delta * std::exp(p.alpha(i) + p.beta.row(i).dot(xv));
    CHECK(model->log_gt(0, x_prev, x) == doctest::Approx(-rates).epsilon(1e-13));
}

TEST_CASE("simulate / filter round trips are finite for every model") {
    {
        ToyUnivariateParams p;
        const auto obs = simulate_toy(p, 20, 1);
        CHECK(obs.size() == 21);
        const auto model = build_toy(p, obs);
        SqmcConfig config;
        config.scheme = RandomizationScheme::owen(1);
        CHECK(std::isfinite(sqmc_run(*model, 128, 20, config).steps[20].log_z));
    }
    {
        const auto p = MsvParams::defaults(2);
        const auto obs = simulate_msv(p, 30, 2);
        CHECK(obs.size() == 31);
        const auto model = build_msv(p, obs);
        CHECK(std::isfinite(
            smc_run(*model, 128, 30, Resampler::Systematic, 2).steps[30].log_z));
        SqmcConfig config;
        config.scheme = RandomizationScheme::owen(2);
        CHECK(std::isfinite(sqmc_run(*model, 128, 30, config).steps[30].log_z));
    }
    {
        const auto p = NeuralDecodingParams::defaults(7);
        const auto obs = simulate_neural(p, 15, 3);
        CHECK(obs.size() == 16);
        for (const auto& y : obs)
            for (int i = 0; i < p.d_y; ++i) {
                CHECK(y(i) >= 0.0);
                CHECK(y(i) == std::floor(y(i)));
            }
        const auto model = build_neural(p, obs);
        SqmcConfig config;
        config.scheme = RandomizationScheme::owen(3);
        CHECK(std::isfinite(sqmc_run(*model, 128, 15, config).steps[15].log_z));
    }
    {
        const auto p = LinearGaussianParams::scalar(0.9, 1.0, 1.0, 1.0, 0.0, 1.0);
        const auto obs = simulate_lingauss(p, 20, 4);
        CHECK(obs.size() == 21);
        const auto model = build_lingauss(p, obs);
        SqmcConfig config;
        config.scheme = RandomizationScheme::digital_shift(4);
        CHECK(std::isfinite(sqmc_run(*model, 128, 20, config).steps[20].log_z));
    }
}
