#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc {

// A parametrised state-space model: prior density on theta plus a builder
// producing the Feynman-Kac model for given theta (observations baked in).
// exact_loglik, when set, replaces the particle estimate (textbook MH).
struct ParameterModelFamily {
    int dim = 0;
    std::function<double(const Eigen::VectorXd&)> log_prior;
    std::function<std::unique_ptr<FeynmanKacModel>(const Eigen::VectorXd&)> builder;
    std::function<double(const Eigen::VectorXd&)> exact_loglik;  // optional
};

struct MarkovChainSample {
    Eigen::MatrixXd chain;          // n_iter x p
    std::vector<double> loglik;     // carried log-evidence trace
    std::vector<std::uint8_t> accepted;  // accepted[0] = 0 by convention
    Eigen::MatrixXd proposal_cov;
};

enum class PmmhEngine { Smc, Sqmc, Exact };

struct PmmhConfig {
    PmmhEngine engine = PmmhEngine::Sqmc;
    std::size_t n_particles = 128;
    int t_max = 0;                  // filter horizon (observations 0..t_max)
    std::size_t n_iter = 1000;
    std::uint64_t seed = 0;
};

// Random-walk particle marginal Metropolis-Hastings: theta' = theta + L z,
// accept with min(1, p(theta') Z(theta') / p(theta) Z(theta)) where Z is a
// fresh unbiased filter estimate; the current estimate is carried across
// rejections, never recomputed.
MarkovChainSample pmmh_run(const ParameterModelFamily& family,
                           const Eigen::VectorXd& theta0,
                           const Eigen::MatrixXd& sigma, const PmmhConfig& config);

// Accepted moves / (n_iter - 1).
double acceptance_rate(const MarkovChainSample& sample);

// n / (1 + 2 sum rho_k), autocorrelations truncated by the initial positive
// sequence rule. Throws on a constant chain.
double mcmc_ess(const MarkovChainSample& sample, int coordinate);

namespace models {

// Bivariate no-leverage MSV family. theta = (phi11, phi22, psi2_11, psi2_22,
// mu1, mu2, rho_eps, rho_nu), eight parameters. Priors: phi ~ Unif(0,1),
// 1/psi2 ~ Gamma(10 e^-10, 10 e^-3), flat mu, rho uniform on (-1, 1).
ParameterModelFamily msv2_no_leverage_family(std::vector<Eigen::VectorXd> observations);

// Maps a family theta to MsvParams (d = 2, no leverage).
Eigen::VectorXd msv2_default_theta();

}  // namespace models

}  // namespace sqmc
