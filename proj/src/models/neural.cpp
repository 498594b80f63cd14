#include "sqmc/models/neural.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc::models {
namespace {

double clamp_u(double u) {
    constexpr double eps = 0x1.0p-53;
    return std::clamp(u, eps, 1.0 - eps);
}

class NeuralModel final : public FeynmanKacModel {
public:
    NeuralModel(NeuralDecodingParams params, std::vector<Eigen::VectorXd> obs)
        : p_(std::move(params)), obs_(std::move(obs)), sigma_(std::sqrt(p_.sigma2)) {
        bounds_ = pilot_bounds(static_cast<int>(obs_.size()));
    }

    int dim() const override { return 4; }
    int u_dim0() const override { return 4; }
    int rand_dim() const override { return 2; }  // velocities only

    void gamma0(std::span<const double> u, std::span<double> x) const override {
        for (int i = 0; i < 4; ++i) x[i] = norm_inv_cdf(clamp_u(u[i]));
    }

    void gamma_t(int, std::span<const double> x_prev, std::span<const double> v,
                 std::span<double> x) const override {
        x[2] = x_prev[2] + sigma_ * norm_inv_cdf(clamp_u(v[0]));
        x[3] = x_prev[3] + sigma_ * norm_inv_cdf(clamp_u(v[1]));
        x[0] = x_prev[0] + p_.delta * x[2];
        x[1] = x_prev[1] + p_.delta * x[3];
    }

    double log_g0(std::span<const double> x) const override { return log_obs(0, x); }

    double log_gt(int t, std::span<const double>, std::span<const double> x) const override {
        return log_obs(t, x);
    }

    PsiBounds psi_bounds() const override { return bounds_; }

private:
    double log_obs(int t, std::span<const double> x) const {
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), 4);
        const Eigen::VectorXd& y = obs_.at(t);
        double acc = 0.0;
        for (int i = 0; i < p_.d_y; ++i) {
            const double log_rate =
                std::log(p_.delta) + p_.alpha(i) + p_.beta.row(i).dot(xc);
            acc += y(i) * log_rate - std::exp(log_rate) - std::lgamma(y(i) + 1.0);
        }
        return acc;
    }

    // The chain is a random walk: bound the state range by replicate
    // simulations over the actual horizon.
    PsiBounds pilot_bounds(int t_len) const {
        CounterRng rng(0x4e5a, 0);
        std::vector<double> lo(4, -1.0), hi(4, 1.0);
        for (int rep = 0; rep < 200; ++rep) {
            double x[4];
            for (double& v : x) v = norm_inv_cdf(clamp_u(rng.uniform()));
            for (int t = 0; t < t_len; ++t) {
                if (t > 0) {
                    x[2] += sigma_ * norm_inv_cdf(clamp_u(rng.uniform()));
                    x[3] += sigma_ * norm_inv_cdf(clamp_u(rng.uniform()));
                    x[0] += p_.delta * x[2];
                    x[1] += p_.delta * x[3];
                }
                for (int i = 0; i < 4; ++i) {
                    lo[i] = std::min(lo[i], x[i]);
                    hi[i] = std::max(hi[i], x[i]);
                }
            }
        }
        for (int i = 0; i < 4; ++i) {
            const double margin = 0.1 * (hi[i] - lo[i]);
            lo[i] -= margin;
            hi[i] += margin;
        }
        return PsiBounds(std::move(lo), std::move(hi));
    }

    NeuralDecodingParams p_;
    std::vector<Eigen::VectorXd> obs_;
    double sigma_;
    PsiBounds bounds_;
};

}  // namespace

NeuralDecodingParams NeuralDecodingParams::defaults(std::uint64_t seed) {
    NeuralDecodingParams p;
    CounterRng rng(seed, /*stream=*/0xa1fa);
    p.alpha.resize(p.d_y);
    p.beta.resize(p.d_y, 4);
    for (int i = 0; i < p.d_y; ++i) {
        p.alpha(i) = 2.5 + norm_inv_cdf(clamp_u(rng.uniform()));
        for (int j = 0; j < 4; ++j) p.beta(i, j) = rng.uniform();
    }
    return p;
}

void NeuralDecodingParams::validate() const {
    if (d_y < 1 || !(delta > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("neural params: d_y, delta, sigma2 must be positive");
    if (alpha.size() != d_y || beta.rows() != d_y || beta.cols() != 4)
        throw std::invalid_argument("neural params: alpha/beta shape mismatch");
}

std::vector<Eigen::VectorXd> simulate_neural(const NeuralDecodingParams& params,
                                             int t_max, std::uint64_t seed) {
    params.validate();
    CounterRng rng(seed, /*stream=*/0x4e);
    const double sigma = std::sqrt(params.sigma2);
    double x[4];
    for (double& v : x) v = norm_inv_cdf(clamp_u(rng.uniform()));
    std::vector<Eigen::VectorXd> obs;
    for (int t = 0; t <= t_max; ++t) {
        if (t > 0) {
            x[2] += sigma * norm_inv_cdf(clamp_u(rng.uniform()));
            x[3] += sigma * norm_inv_cdf(clamp_u(rng.uniform()));
            x[0] += params.delta * x[2];
            x[1] += params.delta * x[3];
        }
        Eigen::VectorXd y(params.d_y);
        for (int i = 0; i < params.d_y; ++i) {
            const double rate =
                params.delta * std::exp(params.alpha(i) + params.beta(i, 0) * x[0] +
                                        params.beta(i, 1) * x[1] +
                                        params.beta(i, 2) * x[2] +
                                        params.beta(i, 3) * x[3]);
            std::poisson_distribution<long> poisson(rate);
            y(i) = static_cast<double>(poisson(rng));
        }
        obs.push_back(std::move(y));
    }
    return obs;
}

std::unique_ptr<FeynmanKacModel> build_neural(const NeuralDecodingParams& params,
                                              std::vector<Eigen::VectorXd> observations) {
    params.validate();
    return std::make_unique<NeuralModel>(params, std::move(observations));
}

}  // namespace sqmc::models
