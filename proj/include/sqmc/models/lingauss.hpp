#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc::models {

// x_t = A x_{t-1} + w_t, w ~ N(0, Q); y_t = B x_t + v_t, v ~ N(0, R);
// x_0 ~ N(prior_mean, prior_cov). Exact Kalman/RTS oracle attached.
struct LinearGaussianParams {
    Eigen::MatrixXd transition;        // A, d x d
    Eigen::MatrixXd transition_noise;  // Q
    Eigen::MatrixXd observation;       // B, dy x d
    Eigen::MatrixXd observation_noise; // R
    Eigen::VectorXd prior_mean;
    Eigen::MatrixXd prior_cov;

    static LinearGaussianParams scalar(double a, double q, double b, double r,
                                       double m0, double p0);
};

std::vector<Eigen::VectorXd> simulate_lingauss(const LinearGaussianParams& params,
                                               int t_max, std::uint64_t seed);

// Bootstrap Feynman-Kac model for the observations (transition proposal,
// observation density weights).
std::unique_ptr<FeynmanKacModel> build_lingauss(
    const LinearGaussianParams& params, std::vector<Eigen::VectorXd> observations);

struct KalmanResult {
    double loglik = 0.0;
    std::vector<Eigen::VectorXd> filter_mean;
    std::vector<Eigen::MatrixXd> filter_cov;
    std::vector<Eigen::VectorXd> smoother_mean;  // Rauch-Tung-Striebel
    std::vector<Eigen::MatrixXd> smoother_cov;
    std::vector<double> partial_loglik;  // log p(y_{0:t}) per t
};

KalmanResult kalman_suite(const LinearGaussianParams& params,
                          const std::vector<Eigen::VectorXd>& observations);

}  // namespace sqmc::models
