#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc::models {

// Univariate nonlinear benchmark: y_t = x_t^2 / a + N(0,1) noise,
// x_t = b1 x_{t-1} + b2 x_{t-1}/(1+x_{t-1}^2) + b3 cos(b4 t) + N(0, sigma2).
struct ToyUnivariateParams {
    double a = 20.0;
    double b1 = 0.5;
    double b2 = 25.0;
    double b3 = 8.0;
    double b4 = 1.2;
    double sigma2 = 10.0;
    double x0_var = 2.0;

    void validate() const;
};

std::vector<double> simulate_toy(const ToyUnivariateParams& params, int t_max,
                                 std::uint64_t seed);

// Bootstrap model. Psi bounds come from a 10^4-step pilot simulation of the
// state chain (min/max widened by 10%); the chain is non-stationary.
std::unique_ptr<FeynmanKacModel> build_toy(const ToyUnivariateParams& params,
                                           std::vector<double> observations);

}  // namespace sqmc::models
