#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sqmc {

// Normalized weights: nonnegative, sum 1 within 1e-12, at least one positive.
void validate_weights(std::span<const double> w);

// Inverse transform method for discrete distributions: a[n] is the smallest
// m with W[0]+...+W[m] >= u[n], via one linear scan over the sorted u's.
// Labels are 0-based. A boundary hit u[n] == cumsum(m) yields label m.
std::vector<std::size_t> inverse_transform_labels(std::span<const double> sorted_u,
                                                  std::span<const double> weights);

// Systematic resampling: the stratified grid u[n] = (n + u0) / N fed through
// the inverse transform. Draws exactly n_out labels.
std::vector<std::size_t> systematic_labels(std::span<const double> weights, double u0,
                                           std::size_t n_out);

// Nondecreasing values distributed as sorted i.i.d. uniforms, generated in
// O(n) by normalized cumulative exponential spacings.
std::vector<double> sorted_uniforms(std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream = 0);

}  // namespace sqmc
