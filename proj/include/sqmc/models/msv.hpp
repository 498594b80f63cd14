#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc::models {

// Multivariate stochastic volatility: y_t = S_t^{1/2} eps_t with
// S_t = diag(exp(x_t)), x_t = mu + Phi (x_{t-1} - mu) + Psi^{1/2} nu_t, and
// (eps_t, nu_t) jointly Gaussian with correlation matrix C (2d x 2d), so the
// weight function depends on both x_{t-1} and x_t.
struct MsvParams {
    int d = 2;
    Eigen::VectorXd phi_diag;   // |phi_ii| < 1
    Eigen::VectorXd mu;
    Eigen::VectorXd psi2_diag;  // > 0
    Eigen::MatrixXd corr;       // 2d x 2d, unit diagonal, positive definite

    // phi = 0.9, mu = -9, psi^2 = 0.1 and the block-structured correlation
    // 0.6 J + 0.4 I (obs), -0.1 J - 0.2 I (cross), 0.8 J + 0.2 I (state).
    static MsvParams defaults(int d);
    // Same, but with independent observation and state noise (no leverage).
    static MsvParams defaults_no_leverage(int d);
    void validate() const;
};

std::vector<Eigen::VectorXd> simulate_msv(const MsvParams& params, int t_max,
                                          std::uint64_t seed);

std::unique_ptr<FeynmanKacModel> build_msv(const MsvParams& params,
                                           std::vector<Eigen::VectorXd> observations);

// Stationary AR(1) covariance of the latent log-volatility chain.
Eigen::MatrixXd msv_stationary_cov(const MsvParams& params);

}  // namespace sqmc::models
