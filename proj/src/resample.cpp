#include "sqmc/resample.hpp"

#include <cmath>
#include <stdexcept>

#include "sqmc/rng.hpp"

namespace sqmc {

void validate_weights(std::span<const double> w) {
    if (w.empty()) throw std::invalid_argument("weights: empty");
    double sum = 0.0;
    bool any_positive = false;
    for (double v : w) {
        if (!(v >= 0.0)) throw std::invalid_argument("weights: negative or NaN entry");
        any_positive |= v > 0.0;
        sum += v;
    }
    if (!any_positive) throw std::invalid_argument("weights: total weight degeneracy");
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("weights: not normalized");
}

std::vector<std::size_t> inverse_transform_labels(std::span<const double> sorted_u,
                                                  std::span<const double> weights) {
    validate_weights(weights);
    for (std::size_t i = 1; i < sorted_u.size(); ++i)
        if (sorted_u[i] < sorted_u[i - 1])
            throw std::invalid_argument("inverse_transform_labels: u not sorted");

    const std::size_t n_w = weights.size();
    std::vector<std::size_t> labels(sorted_u.size());
    double s = weights[0];
    std::size_t m = 0;
    for (std::size_t n = 0; n < sorted_u.size(); ++n) {
        while (s < sorted_u[n] && m + 1 < n_w) {
            ++m;
            s += weights[m];
        }
        labels[n] = m;
    }
    return labels;
}

std::vector<std::size_t> systematic_labels(std::span<const double> weights, double u0,
                                           std::size_t n_out) {
    if (!(u0 >= 0.0 && u0 < 1.0))
        throw std::invalid_argument("systematic_labels: u0 must lie in [0,1)");
    std::vector<double> grid(n_out);
    for (std::size_t n = 0; n < n_out; ++n)
        grid[n] = (static_cast<double>(n) + u0) / static_cast<double>(n_out);
    return inverse_transform_labels(grid, weights);
}

std::vector<double> sorted_uniforms(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream) {
    if (n == 0) throw std::invalid_argument("sorted_uniforms: n must be >= 1");
    CounterRng rng(seed, stream);
    std::vector<double> u(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += -std::log1p(-rng.uniform());  // Exp(1) spacing
        u[i] = acc;
    }
    acc += -std::log1p(-rng.uniform());
    for (std::size_t i = 0; i < n; ++i) u[i] /= acc;
    return u;
}

}  // namespace sqmc
