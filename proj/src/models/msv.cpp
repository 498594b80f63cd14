#include "sqmc/models/msv.hpp"

#include <algorithm>
#include <cmath>

#include "sqmc/models/common.hpp"
#include "sqmc/rng.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc::models {
namespace {

double clamp_u(double u) {
    constexpr double eps = 0x1.0p-53;
    return std::clamp(u, eps, 1.0 - eps);
}

class MsvModel final : public FeynmanKacModel {
public:
    MsvModel(MsvParams params, std::vector<Eigen::VectorXd> obs)
        : p_(std::move(params)), obs_(std::move(obs)) {
        const int d = p_.d;
        const Eigen::MatrixXd c_oo = p_.corr.topLeftCorner(d, d);      // eps block
        const Eigen::MatrixXd c_os = p_.corr.topRightCorner(d, d);     // eps-nu
        const Eigen::MatrixXd c_ss = p_.corr.bottomRightCorner(d, d);  // nu block

        psi_sqrt_ = p_.psi2_diag.cwiseSqrt();
        const Eigen::MatrixXd q =
            psi_sqrt_.asDiagonal() * c_ss * psi_sqrt_.asDiagonal();
        trans_chol_ = cholesky_lower(q);
        trans_density_.reset(q);

        stationary_cov_ = msv_stationary_cov(p_);
        prior_chol_ = cholesky_lower(stationary_cov_);

        // eps | nu is Gaussian: mean M nu, covariance Sigma_c.
        Eigen::LLT<Eigen::MatrixXd> llt_ss(c_ss);
        if (llt_ss.info() != Eigen::Success)
            throw std::invalid_argument("msv: state correlation block not positive definite");
        cond_gain_ = llt_ss.solve(c_os.transpose()).transpose();  // C_os C_ss^-1
        cond_density_.reset(c_oo - cond_gain_ * c_os.transpose());
        marg_density_.reset(c_oo);

        std::vector<double> lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            const double s = std::sqrt(stationary_cov_(i, i));
            lo[i] = p_.mu(i) - 2.0 * s;
            hi[i] = p_.mu(i) + 2.0 * s;
        }
        bounds_ = PsiBounds(std::move(lo), std::move(hi));
    }

    int dim() const override { return p_.d; }

    void gamma0(std::span<const double> u, std::span<double> x) const override {
        Eigen::VectorXd z(p_.d);
        for (int i = 0; i < p_.d; ++i) z(i) = norm_inv_cdf(clamp_u(u[i]));
        Eigen::VectorXd v = p_.mu + prior_chol_ * z;
        std::copy_n(v.data(), p_.d, x.begin());
    }

    void gamma_t(int, std::span<const double> x_prev, std::span<const double> u,
                 std::span<double> x) const override {
        Eigen::VectorXd z(p_.d);
        for (int i = 0; i < p_.d; ++i) z(i) = norm_inv_cdf(clamp_u(u[i]));
        Eigen::Map<const Eigen::VectorXd> xp(x_prev.data(), p_.d);
        Eigen::VectorXd v =
            p_.mu + p_.phi_diag.asDiagonal() * (xp - p_.mu) + trans_chol_ * z;
        std::copy_n(v.data(), p_.d, x.begin());
    }

    double log_g0(std::span<const double> x) const override {
        // eps_0 has its marginal law: no state innovation to condition on.
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), p_.d);
        const Eigen::VectorXd scaled = scale_obs(0, xc);
        return marg_density_.logpdf(scaled, Eigen::VectorXd::Zero(p_.d)) -
               0.5 * xc.sum();
    }

    double log_gt(int t, std::span<const double> x_prev,
                  std::span<const double> x) const override {
        Eigen::Map<const Eigen::VectorXd> xp(x_prev.data(), p_.d);
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), p_.d);
        const Eigen::VectorXd nu = psi_sqrt_.cwiseInverse().asDiagonal() *
                                   (xc - p_.mu - p_.phi_diag.asDiagonal() * (xp - p_.mu));
        const Eigen::VectorXd scaled = scale_obs(t, xc);
        return cond_density_.logpdf(scaled, cond_gain_ * nu) - 0.5 * xc.sum();
    }

    PsiBounds psi_bounds() const override { return bounds_; }

    bool has_transition_density() const override { return true; }

    double log_transition_density(int, std::span<const double> x_prev,
                                  std::span<const double> x) const override {
        Eigen::Map<const Eigen::VectorXd> xp(x_prev.data(), p_.d);
        Eigen::Map<const Eigen::VectorXd> xc(x.data(), p_.d);
        return trans_density_.logpdf(
            xc, p_.mu + p_.phi_diag.asDiagonal() * (xp - p_.mu));
    }

private:
    // S_t^{-1/2} y_t; the -x.sum()/2 Jacobian term is handled by callers.
    Eigen::VectorXd scale_obs(int t, const Eigen::VectorXd& x) const {
        return (-0.5 * x.array()).exp().matrix().asDiagonal() * obs_.at(t);
    }

    MsvParams p_;
    std::vector<Eigen::VectorXd> obs_;
    Eigen::VectorXd psi_sqrt_;
    Eigen::MatrixXd trans_chol_, prior_chol_, stationary_cov_, cond_gain_;
    MvnDensity trans_density_, cond_density_, marg_density_;
    PsiBounds bounds_;
};

}  // namespace

MsvParams MsvParams::defaults(int d) {
    MsvParams p;
    p.d = d;
    p.phi_diag = Eigen::VectorXd::Constant(d, 0.9);
    p.mu = Eigen::VectorXd::Constant(d, -9.0);
    p.psi2_diag = Eigen::VectorXd::Constant(d, 0.1);
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(d, d);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    p.corr.resize(2 * d, 2 * d);
    p.corr.topLeftCorner(d, d) = 0.6 * ones + 0.4 * eye;
    p.corr.topRightCorner(d, d) = -0.1 * ones - 0.2 * eye;
    p.corr.bottomLeftCorner(d, d) = -0.1 * ones - 0.2 * eye;
    p.corr.bottomRightCorner(d, d) = 0.8 * ones + 0.2 * eye;
    return p;
}

MsvParams MsvParams::defaults_no_leverage(int d) {
    MsvParams p = defaults(d);
    p.corr.topRightCorner(d, d).setZero();
    p.corr.bottomLeftCorner(d, d).setZero();
    return p;
}

void MsvParams::validate() const {
    if (d < 1) throw std::invalid_argument("msv params: d must be >= 1");
    if (phi_diag.size() != d || mu.size() != d || psi2_diag.size() != d ||
        corr.rows() != 2 * d || corr.cols() != 2 * d)
        throw std::invalid_argument("msv params: shape mismatch");
    for (int i = 0; i < d; ++i) {
        if (!(std::abs(phi_diag(i)) < 1.0))
            throw std::invalid_argument("msv params: |phi_ii| must be < 1");
        if (!(psi2_diag(i) > 0.0))
            throw std::invalid_argument("msv params: psi2_ii must be > 0");
    }
    for (int i = 0; i < 2 * d; ++i)
        if (std::abs(corr(i, i) - 1.0) > 1e-12)
            throw std::invalid_argument("msv params: correlation diagonal must be 1");
    if (!corr.isApprox(corr.transpose(), 1e-12))
        throw std::invalid_argument("msv params: correlation matrix must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("msv params: correlation matrix not positive definite");
}

Eigen::MatrixXd msv_stationary_cov(const MsvParams& params) {
    const int d = params.d;
    const Eigen::VectorXd psi_sqrt = params.psi2_diag.cwiseSqrt();
    const Eigen::MatrixXd q = psi_sqrt.asDiagonal() *
                              params.corr.bottomRightCorner(d, d) *
                              psi_sqrt.asDiagonal();
    Eigen::MatrixXd cov(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            cov(i, j) = q(i, j) / (1.0 - params.phi_diag(i) * params.phi_diag(j));
    return cov;
}

std::vector<Eigen::VectorXd> simulate_msv(const MsvParams& params, int t_max,
                                          std::uint64_t seed) {
    params.validate();
    const int d = params.d;
    const Eigen::MatrixXd joint_chol = cholesky_lower(params.corr);
    const Eigen::MatrixXd prior_chol = cholesky_lower(msv_stationary_cov(params));
    const Eigen::MatrixXd marg_obs_chol =
        cholesky_lower(params.corr.topLeftCorner(d, d));
    CounterRng rng(seed, /*stream=*/0x535);
    auto normal_vec = [&](int k) {
        Eigen::VectorXd z(k);
        for (int i = 0; i < k; ++i) z(i) = norm_inv_cdf(clamp_u(rng.uniform()));
        return z;
    };
    auto volatility = [&](const Eigen::VectorXd& x) {
        return (0.5 * x.array()).exp().matrix();
    };

    std::vector<Eigen::VectorXd> obs;
    Eigen::VectorXd x = params.mu + prior_chol * normal_vec(d);
    obs.push_back(volatility(x).asDiagonal() * (marg_obs_chol * normal_vec(d)));
    for (int t = 1; t <= t_max; ++t) {
        const Eigen::VectorXd joint = joint_chol * normal_vec(2 * d);
        const Eigen::VectorXd eps = joint.head(d);
        const Eigen::VectorXd nu = joint.tail(d);
        x = params.mu +
            params.phi_diag.asDiagonal() * (x - params.mu).eval() +
            params.psi2_diag.cwiseSqrt().asDiagonal() * nu;
        obs.push_back(volatility(x).asDiagonal() * eps);
    }
    return obs;
}

std::unique_ptr<FeynmanKacModel> build_msv(const MsvParams& params,
                                           std::vector<Eigen::VectorXd> observations) {
    params.validate();
    return std::make_unique<MsvModel>(params, std::move(observations));
}

}  // namespace sqmc::models
