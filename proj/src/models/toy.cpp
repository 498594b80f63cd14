#include "sqmc/models/toy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc::models {
namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;

double clamp_u(double u) {
    constexpr double eps = 0x1.0p-53;
    return std::clamp(u, eps, 1.0 - eps);
}

double drift(const ToyUnivariateParams& p, int t, double x) {
    return p.b1 * x + p.b2 * x / (1.0 + x * x) + p.b3 * std::cos(p.b4 * t);
}

class ToyModel final : public FeynmanKacModel {
public:
    ToyModel(ToyUnivariateParams params, std::vector<double> obs)
        : p_(params), obs_(std::move(obs)), sigma_(std::sqrt(p_.sigma2)) {
        bounds_ = pilot_bounds();
    }

    int dim() const override { return 1; }

    void gamma0(std::span<const double> u, std::span<double> x) const override {
        x[0] = std::sqrt(p_.x0_var) * norm_inv_cdf(clamp_u(u[0]));
    }

    void gamma_t(int t, std::span<const double> x_prev, std::span<const double> u,
                 std::span<double> x) const override {
        x[0] = drift(p_, t, x_prev[0]) + sigma_ * norm_inv_cdf(clamp_u(u[0]));
    }

    double log_g0(std::span<const double> x) const override { return log_obs(0, x[0]); }

    double log_gt(int t, std::span<const double>, std::span<const double> x) const override {
        return log_obs(t, x[0]);
    }

    PsiBounds psi_bounds() const override { return bounds_; }

    bool has_transition_density() const override { return true; }

    double log_transition_density(int t, std::span<const double> x_prev,
                                  std::span<const double> x) const override {
        const double z = (x[0] - drift(p_, t, x_prev[0])) / sigma_;
        return -0.5 * z * z - std::log(sigma_) - kHalfLog2Pi;
    }

private:
    double log_obs(int t, double x) const {
        const double z = obs_.at(t) - x * x / p_.a;
        return -0.5 * z * z - kHalfLog2Pi;
    }

    PsiBounds pilot_bounds() const {
        CounterRng rng(0x7071, 0);
        double x = 0.0, lo = 0.0, hi = 0.0;
        for (int t = 1; t <= 10000; ++t) {
            x = drift(p_, t, x) + sigma_ * norm_inv_cdf(clamp_u(rng.uniform()));
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        const double margin = 0.1 * (hi - lo);
        return PsiBounds({lo - margin}, {hi + margin});
    }

    ToyUnivariateParams p_;
    std::vector<double> obs_;
    double sigma_;
    PsiBounds bounds_;
};

}  // namespace

void ToyUnivariateParams::validate() const {
    if (!(a > 0.0) || !(sigma2 > 0.0) || !(x0_var > 0.0))
        throw std::invalid_argument("toy params: a, sigma2, x0_var must be positive");
}

std::vector<double> simulate_toy(const ToyUnivariateParams& params, int t_max,
                                 std::uint64_t seed) {
    params.validate();
    CounterRng rng(seed, /*stream=*/0x70);
    auto normal = [&] { return norm_inv_cdf(clamp_u(rng.uniform())); };
    std::vector<double> obs;
    double x = std::sqrt(params.x0_var) * normal();
    obs.push_back(x * x / params.a + normal());
    for (int t = 1; t <= t_max; ++t) {
        x = drift(params, t, x) + std::sqrt(params.sigma2) * normal();
        obs.push_back(x * x / params.a + normal());
    }
    return obs;
}

std::unique_ptr<FeynmanKacModel> build_toy(const ToyUnivariateParams& params,
                                           std::vector<double> observations) {
    params.validate();
    return std::make_unique<ToyModel>(params, std::move(observations));
}

}  // namespace sqmc::models
