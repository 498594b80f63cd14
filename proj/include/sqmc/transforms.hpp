#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace sqmc {

// Per-coordinate rescaled-logistic bounds mapping the state space into
// (0,1)^d ahead of Hilbert indexing.
struct PsiBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    PsiBounds() = default;
    PsiBounds(std::vector<double> lo, std::vector<double> hi);
    std::size_t dim() const { return lower.size(); }
};

// Inverse standard normal CDF, absolute error below 1e-9 on (0,1).
double norm_inv_cdf(double u);

// A Gaussian Markov kernel x' | x ~ N(mean_map(x), L L^T), with L lower
// triangular. The chain-rule inverse-CDF of this kernel is exactly
// mean + L * Phi^{-1}(u) applied coordinate-wise in declared state order.
struct GaussianKernelSpec {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> mean_map;
    Eigen::MatrixXd cholesky_lower;

    void validate() const;
};

Eigen::VectorXd gaussian_rosenblatt_inv(const GaussianKernelSpec& spec,
                                        const Eigen::VectorXd& x_prev,
                                        std::span<const double> u);

// Component-wise rescaled logistic map into (0,1)^d; output clamped to
// [eps, 1-eps] with eps = 2^-52 so Hilbert indexing never sees 0 or 1.
void psi_logistic(std::span<const double> x, const PsiBounds& b, std::span<double> out);
void psi_logistic_inv(std::span<const double> u, const PsiBounds& b, std::span<double> out);

std::vector<double> psi_logistic(std::span<const double> x, const PsiBounds& b);
std::vector<double> psi_logistic_inv(std::span<const double> u, const PsiBounds& b);

}  // namespace sqmc
