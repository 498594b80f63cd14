#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc::models {

// Neural decoding: Poisson spike counts y_ti ~ Poi(delta * exp(alpha_i +
// beta_i^T x_t)) driven by a 4-dimensional state x_t = (p_t, pdot_t) where
// only the two velocity components receive noise; positions follow
// p_t = p_{t-1} + delta * pdot_t deterministically. The per-step randomness
// dimension is therefore 2 (point sets of dimension 3 in the filter).
struct NeuralDecodingParams {
    int d_y = 10;
    double delta = 0.03;
    double sigma2 = 0.019;
    Eigen::VectorXd alpha;  // d_y
    Eigen::MatrixXd beta;   // d_y x 4

    // alpha_i ~ N(2.5, 1), beta_i ~ Unif([0,1)^4), drawn from the seed.
    static NeuralDecodingParams defaults(std::uint64_t seed);
    void validate() const;
};

std::vector<Eigen::VectorXd> simulate_neural(const NeuralDecodingParams& params,
                                             int t_max, std::uint64_t seed);

std::unique_ptr<FeynmanKacModel> build_neural(const NeuralDecodingParams& params,
                                              std::vector<Eigen::VectorXd> observations);

}  // namespace sqmc::models
