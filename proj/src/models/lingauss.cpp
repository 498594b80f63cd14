#include "sqmc/models/lingauss.hpp"

#include <cmath>

#include "sqmc/models/common.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc::models {
namespace {

class LinearGaussianModel final : public FeynmanKacModel {
public:
    LinearGaussianModel(LinearGaussianParams params, std::vector<Eigen::VectorXd> obs)
        : p_(std::move(params)),
          obs_(std::move(obs)),
          prior_chol_(cholesky_lower(p_.prior_cov)),
          trans_chol_(cholesky_lower(p_.transition_noise)),
          obs_density_(p_.observation_noise),
          trans_density_(p_.transition_noise) {
        bounds_ = stationary_bounds();
    }

    int dim() const override { return static_cast<int>(p_.prior_mean.size()); }

    void gamma0(std::span<const double> u, std::span<double> x) const override {
        Eigen::VectorXd z(dim());
        for (int i = 0; i < dim(); ++i) z(i) = norm_inv_cdf(clamp_u(u[i]));
        Eigen::VectorXd v = p_.prior_mean + prior_chol_ * z;
        std::copy_n(v.data(), dim(), x.begin());
    }

    void gamma_t(int, std::span<const double> x_prev, std::span<const double> u,
                 std::span<double> x) const override {
        Eigen::VectorXd z(dim());
        for (int i = 0; i < dim(); ++i) z(i) = norm_inv_cdf(clamp_u(u[i]));
        Eigen::Map<const Eigen::VectorXd> xp(x_prev.data(), dim());
        Eigen::VectorXd v = p_.transition * xp + trans_chol_ * z;
        std::copy_n(v.data(), dim(), x.begin());
    }

    double log_g0(std::span<const double> x) const override { return log_obs(0, x); }

    double log_gt(int t, std::span<const double>, std::span<const double> x) const override {
        return log_obs(t, x);
    }

    PsiBounds psi_bounds() const override { return bounds_; }

    bool has_transition_density() const override { return true; }

    double log_transition_density(int, std::span<const double> x_prev,
                                  std::span<const double> x) const override {
        Eigen::Map<const Eigen::VectorXd> xp(x_prev.data(), dim());
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), dim());
        return trans_density_.logpdf(xc, p_.transition * xp);
    }

private:
    static double clamp_u(double u) {
        constexpr double eps = 0x1.0p-53;
        return std::clamp(u, eps, 1.0 - eps);
    }

    double log_obs(int t, std::span<const double> x) const {
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), dim());
        return obs_density_.logpdf(obs_.at(t), p_.observation * xc);
    }

    // Envelope of the mean +/- 2 sigma band along the Lyapunov iteration,
    // widened slightly; assumes a stable transition for tightness but stays
    // valid (only less sharp) otherwise.
    PsiBounds stationary_bounds() const {
        Eigen::VectorXd m = p_.prior_mean;
        Eigen::MatrixXd cov = p_.prior_cov;
        Eigen::VectorXd lo(dim()), hi(dim());
        for (int i = 0; i < dim(); ++i) {
            lo(i) = m(i) - 2.0 * std::sqrt(cov(i, i));
            hi(i) = m(i) + 2.0 * std::sqrt(cov(i, i));
        }
        for (int iter = 0; iter < 256; ++iter) {
            m = p_.transition * m;
            cov = p_.transition * cov * p_.transition.transpose() + p_.transition_noise;
            for (int i = 0; i < dim(); ++i) {
                lo(i) = std::min(lo(i), m(i) - 2.0 * std::sqrt(cov(i, i)));
                hi(i) = std::max(hi(i), m(i) + 2.0 * std::sqrt(cov(i, i)));
            }
        }
        std::vector<double> lower(lo.data(), lo.data() + dim());
        std::vector<double> upper(hi.data(), hi.data() + dim());
        return PsiBounds(std::move(lower), std::move(upper));
    }

    LinearGaussianParams p_;
    std::vector<Eigen::VectorXd> obs_;
    Eigen::MatrixXd prior_chol_, trans_chol_;
    MvnDensity obs_density_, trans_density_;
    PsiBounds bounds_;
};

}  // namespace

LinearGaussianParams LinearGaussianParams::scalar(double a, double q, double b,
                                                  double r, double m0, double p0) {
    LinearGaussianParams p;
    p.transition = Eigen::MatrixXd::Constant(1, 1, a);
    p.transition_noise = Eigen::MatrixXd::Constant(1, 1, q);
    p.observation = Eigen::MatrixXd::Constant(1, 1, b);
    p.observation_noise = Eigen::MatrixXd::Constant(1, 1, r);
    p.prior_mean = Eigen::VectorXd::Constant(1, m0);
    p.prior_cov = Eigen::MatrixXd::Constant(1, 1, p0);
    return p;
}

std::vector<Eigen::VectorXd> simulate_lingauss(const LinearGaussianParams& params,
                                               int t_max, std::uint64_t seed) {
    const int d = static_cast<int>(params.prior_mean.size());
    const int dy = static_cast<int>(params.observation.rows());
    const Eigen::MatrixXd lp = cholesky_lower(params.prior_cov);
    const Eigen::MatrixXd lq = cholesky_lower(params.transition_noise);
    const Eigen::MatrixXd lr = cholesky_lower(params.observation_noise);
    CounterRng rng(seed, /*stream=*/0x51);
    auto normal_vec = [&](int k) {
        Eigen::VectorXd z(k);
        for (int i = 0; i < k; ++i) z(i) = norm_inv_cdf(std::clamp(rng.uniform(), 0x1.0p-53, 1.0 - 0x1.0p-53));
        return z;
    };
    std::vector<Eigen::VectorXd> obs;
    Eigen::VectorXd x = params.prior_mean + lp * normal_vec(d);
    obs.push_back(params.observation * x + lr * normal_vec(dy));
    for (int t = 1; t <= t_max; ++t) {
        x = params.transition * x + lq * normal_vec(d);
        obs.push_back(params.observation * x + lr * normal_vec(dy));
    }
    return obs;
}

std::unique_ptr<FeynmanKacModel> build_lingauss(
    const LinearGaussianParams& params, std::vector<Eigen::VectorXd> observations) {
    return std::make_unique<LinearGaussianModel>(params, std::move(observations));
}

KalmanResult kalman_suite(const LinearGaussianParams& params,
                          const std::vector<Eigen::VectorXd>& observations) {
    const auto& A = params.transition;
    const auto& Q = params.transition_noise;
    const auto& B = params.observation;
    const auto& R = params.observation_noise;
    const int t_max = static_cast<int>(observations.size()) - 1;

    KalmanResult res;
    Eigen::VectorXd m = params.prior_mean;
    Eigen::MatrixXd p = params.prior_cov;
    std::vector<Eigen::VectorXd> pred_mean;  // one-step predictive, for RTS
    std::vector<Eigen::MatrixXd> pred_cov;

    for (int t = 0; t <= t_max; ++t) {
        if (t > 0) {
            m = A * m;
            p = A * p * A.transpose() + Q;
        }
        pred_mean.push_back(m);
        pred_cov.push_back(p);

        const Eigen::MatrixXd s = B * p * B.transpose() + R;
        MvnDensity marginal(s);
        res.loglik += marginal.logpdf(observations[t], B * m);
        res.partial_loglik.push_back(res.loglik);

        const Eigen::MatrixXd k =
            marginal.llt().solve(B * p.transpose()).transpose();  // P B^T S^-1
        m = m + k * (observations[t] - B * m);
        p = p - k * B * p;
        res.filter_mean.push_back(m);
        res.filter_cov.push_back(p);
    }

    res.smoother_mean.assign(t_max + 1, Eigen::VectorXd());
    res.smoother_cov.assign(t_max + 1, Eigen::MatrixXd());
    res.smoother_mean[t_max] = res.filter_mean[t_max];
    res.smoother_cov[t_max] = res.filter_cov[t_max];
    for (int t = t_max - 1; t >= 0; --t) {
        const Eigen::MatrixXd pp = pred_cov[t + 1];  // cov of x_{t+1} | y_{0:t}
        const Eigen::MatrixXd g =
            pp.llt().solve(A * res.filter_cov[t].transpose()).transpose();
        res.smoother_mean[t] =
            res.filter_mean[t] + g * (res.smoother_mean[t + 1] - pred_mean[t + 1]);
        res.smoother_cov[t] =
            res.filter_cov[t] + g * (res.smoother_cov[t + 1] - pp) * g.transpose();
    }
    return res;
}

}  // namespace sqmc::models
