#include "sqmc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sqmc {

PsiBounds::PsiBounds(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("PsiBounds: dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("PsiBounds: lower must be < upper");
}

double norm_inv_cdf(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("norm_inv_cdf: argument must lie in (0,1)");

    // Acklam's rational approximation, then one Halley step through erfc
    // to push the absolute error to ~1e-15.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425, high = 1.0 - 0.02425;

    double z;
    if (u < low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (u <= high) {
        const double q = u - 0.5, r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-z / std::numbers::sqrt2) - u;
    const double f = std::exp(-0.5 * z * z) * 0.3989422804014326779;  // phi(z)
    if (f > 0.0) z -= e / (f + 0.5 * z * e);  // Halley refinement
    return z;
}

void GaussianKernelSpec::validate() const {
    const auto& L = cholesky_lower;
    if (L.rows() != L.cols() || L.rows() == 0)
        throw std::invalid_argument("GaussianKernelSpec: L must be square");
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        if (!(L(i, i) > 0.0))
            throw std::invalid_argument("GaussianKernelSpec: diagonal of L must be positive");
        for (Eigen::Index j = i + 1; j < L.cols(); ++j)
            if (L(i, j) != 0.0)
                throw std::invalid_argument("GaussianKernelSpec: L must be lower triangular");
    }
}

Eigen::VectorXd gaussian_rosenblatt_inv(const GaussianKernelSpec& spec,
                                        const Eigen::VectorXd& x_prev,
                                        std::span<const double> u) {
    const auto d = spec.cholesky_lower.rows();
    if (static_cast<Eigen::Index>(u.size()) != d)
        throw std::invalid_argument("gaussian_rosenblatt_inv: uniform dimension mismatch");
    Eigen::VectorXd z(d);
    for (Eigen::Index i = 0; i < d; ++i) z(i) = norm_inv_cdf(u[i]);
    return spec.mean_map(x_prev) + spec.cholesky_lower * z;
}

namespace {
constexpr double kClampEps = 0x1.0p-52;
}

void psi_logistic(std::span<const double> x, const PsiBounds& b, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double scale = b.upper[i] - b.lower[i];
        const double v = 1.0 / (1.0 + std::exp(-(x[i] - b.lower[i]) / scale));
        out[i] = std::clamp(v, kClampEps, 1.0 - kClampEps);
    }
}

void psi_logistic_inv(std::span<const double> u, const PsiBounds& b, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = std::clamp(u[i], kClampEps, 1.0 - kClampEps);
        out[i] = b.lower[i] - (b.upper[i] - b.lower[i]) * std::log(1.0 / v - 1.0);
    }
}

std::vector<double> psi_logistic(std::span<const double> x, const PsiBounds& b) {
    std::vector<double> out(x.size());
    psi_logistic(x, b, out);
    return out;
}

std::vector<double> psi_logistic_inv(std::span<const double> u, const PsiBounds& b) {
    std::vector<double> out(u.size());
    psi_logistic_inv(u, b, out);
    return out;
}

}  // namespace sqmc
