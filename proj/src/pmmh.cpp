#include "sqmc/pmmh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqmc/models/msv.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp_u(double u) {
    constexpr double eps = 0x1.0p-53;
    return std::clamp(u, eps, 1.0 - eps);
}

double filter_loglik(const ParameterModelFamily& family, const Eigen::VectorXd& theta,
                     const PmmhConfig& config, std::uint64_t run_seed) {
    if (config.engine == PmmhEngine::Exact) return family.exact_loglik(theta);
    auto model = family.builder(theta);
    if (config.engine == PmmhEngine::Smc) {
        FilterOutput out = smc_run(*model, config.n_particles, config.t_max,
                                   Resampler::Systematic, run_seed);
        return out.steps.back().log_z;
    }
    SqmcConfig sqmc;
    sqmc.scheme = RandomizationScheme::owen(run_seed);
    FilterOutput out = sqmc_run(*model, config.n_particles, config.t_max, sqmc);
    return out.steps.back().log_z;
}

}  // namespace

MarkovChainSample pmmh_run(const ParameterModelFamily& family,
                           const Eigen::VectorXd& theta0,
                           const Eigen::MatrixXd& sigma, const PmmhConfig& config) {
    const int p = family.dim;
    if (theta0.size() != p) throw std::invalid_argument("pmmh_run: theta0 dimension");
    if (sigma.rows() != p || sigma.cols() != p ||
        !sigma.isApprox(sigma.transpose(), 1e-10))
        throw std::invalid_argument("pmmh_run: proposal covariance must be symmetric");
    if (config.n_iter < 1) throw std::invalid_argument("pmmh_run: n_iter must be >= 1");
    if (config.engine == PmmhEngine::Exact && !family.exact_loglik)
        throw std::invalid_argument("pmmh_run: family declares no exact loglik");

    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("pmmh_run: proposal covariance not positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();

    double log_prior = family.log_prior(theta0);
    if (log_prior == kNegInf)
        throw std::invalid_argument("pmmh_run: theta0 outside the prior support");

    MarkovChainSample out;
    out.chain.resize(config.n_iter, p);
    out.loglik.resize(config.n_iter);
    out.accepted.assign(config.n_iter, 0);
    out.proposal_cov = sigma;

    const std::uint64_t key = mix64(config.seed);
    Eigen::VectorXd theta = theta0;
    double loglik = filter_loglik(family, theta, config, hash_combine(key, 0));
    out.chain.row(0) = theta.transpose();
    out.loglik[0] = loglik;

    Eigen::VectorXd z(p), proposal(p);
    for (std::size_t iter = 1; iter < config.n_iter; ++iter) {
        CounterRng rng(config.seed, /*stream=*/0x9090 + iter);
        for (int j = 0; j < p; ++j) z(j) = norm_inv_cdf(clamp_u(rng.uniform()));
        proposal = theta + chol * z;

        const double prop_prior = family.log_prior(proposal);
        if (prop_prior > kNegInf) {
            const double prop_loglik =
                filter_loglik(family, proposal, config, hash_combine(key, iter));
            const double log_alpha = prop_prior + prop_loglik - log_prior - loglik;
            if (std::log(clamp_u(rng.uniform())) < log_alpha) {
                theta = proposal;
                log_prior = prop_prior;
                loglik = prop_loglik;
                out.accepted[iter] = 1;
            }
        }
        out.chain.row(iter) = theta.transpose();
        out.loglik[iter] = loglik;
    }
    return out;
}

double acceptance_rate(const MarkovChainSample& sample) {
    const std::size_t n = sample.accepted.size();
    if (n == 0) throw std::invalid_argument("acceptance_rate: empty chain");
    if (n == 1) return 0.0;
    std::size_t moves = 0;
    for (std::size_t i = 1; i < n; ++i) moves += sample.accepted[i];
    return static_cast<double>(moves) / static_cast<double>(n - 1);
}

double mcmc_ess(const MarkovChainSample& sample, int coordinate) {
    const Eigen::Index n = sample.chain.rows();
    if (n < 100) throw std::invalid_argument("mcmc_ess: chain shorter than 100");
    if (coordinate < 0 || coordinate >= sample.chain.cols())
        throw std::invalid_argument("mcmc_ess: coordinate out of range");
    const Eigen::VectorXd x = sample.chain.col(coordinate);
    const double mean = x.mean();
    const Eigen::VectorXd c = x.array() - mean;
    const double var = c.squaredNorm() / static_cast<double>(n);
    if (var <= 0.0) throw std::invalid_argument("mcmc_ess: constant chain");

    auto rho = [&](Eigen::Index k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + k < n; ++i) acc += c(i) * c(i + k);
        return acc / (static_cast<double>(n) * var);
    };

    // Geyer initial positive sequence: sum pair sums rho_{2k} + rho_{2k+1}
    // while they stay positive.
    double tail = 0.0;
    for (Eigen::Index k = 1; k + 1 < n; k += 2) {
        const double pair = rho(k) + rho(k + 1);
        if (pair <= 0.0) break;
        tail += pair;
    }
    return static_cast<double>(n) / (1.0 + 2.0 * tail);
}

namespace models {
namespace {

MsvParams theta_to_msv2(const Eigen::VectorXd& theta) {
    MsvParams p = MsvParams::defaults_no_leverage(2);
    p.phi_diag << theta(0), theta(1);
    p.psi2_diag << theta(2), theta(3);
    p.mu << theta(4), theta(5);
    const double rho_eps = theta(6), rho_nu = theta(7);
    p.corr.setIdentity();
    p.corr(0, 1) = p.corr(1, 0) = rho_eps;
    p.corr(2, 3) = p.corr(3, 2) = rho_nu;
    return p;
}

}  // namespace

Eigen::VectorXd msv2_default_theta() {
    Eigen::VectorXd theta(8);
    theta << 0.9, 0.9, 0.1, 0.1, -9.0, -9.0, 0.6, 0.8;
    return theta;
}

ParameterModelFamily msv2_no_leverage_family(std::vector<Eigen::VectorXd> observations) {
    ParameterModelFamily family;
    family.dim = 8;
    family.log_prior = [](const Eigen::VectorXd& theta) {
        const double phi1 = theta(0), phi2 = theta(1);
        const double psi2_1 = theta(2), psi2_2 = theta(3);
        const double rho_eps = theta(6), rho_nu = theta(7);
        if (phi1 <= 0.0 || phi1 >= 1.0 || phi2 <= 0.0 || phi2 >= 1.0) return kNegInf;
        if (psi2_1 <= 0.0 || psi2_2 <= 0.0) return kNegInf;
        if (std::abs(rho_eps) >= 1.0 || std::abs(rho_nu) >= 1.0) return kNegInf;
        // 1/psi2 ~ Gamma(a, b) induces p(psi2) prop psi2^{-(a+1)} exp(-b/psi2).
        const double a = 10.0 * std::exp(-10.0), b = 10.0 * std::exp(-3.0);
        double lp = 0.0;
        for (double psi2 : {psi2_1, psi2_2})
            lp += -(a + 1.0) * std::log(psi2) - b / psi2;
        return lp;  // phi, mu, rho priors are flat on their supports
    };
    family.builder = [obs = std::move(observations)](const Eigen::VectorXd& theta) {
        return build_msv(theta_to_msv2(theta), obs);
    };
    return family;
}

}  // namespace models
}  // namespace sqmc
