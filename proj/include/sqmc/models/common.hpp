#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace sqmc::models {

// Multivariate normal density with a precomputed Cholesky factor.
class MvnDensity {
public:
    MvnDensity() = default;
    explicit MvnDensity(const Eigen::MatrixXd& cov) { reset(cov); }

    void reset(const Eigen::MatrixXd& cov) {
        llt_.compute(cov);
        if (llt_.info() != Eigen::Success)
            throw std::invalid_argument("covariance matrix is not positive definite");
        const auto& L = llt_.matrixL();
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < cov.rows(); ++i) log_det += std::log(L(i, i));
        log_norm_ = -0.5 * static_cast<double>(cov.rows()) *
                        std::log(2.0 * EIGEN_PI) -
                    log_det;
    }

    double logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean) const {
        const Eigen::VectorXd z = llt_.matrixL().solve(x - mean);
        return log_norm_ - 0.5 * z.squaredNorm();
    }

    const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

private:
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_ = 0.0;
};

inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("covariance matrix is not positive definite");
    return llt.matrixL();
}

}  // namespace sqmc::models
