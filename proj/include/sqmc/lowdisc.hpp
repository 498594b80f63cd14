#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sqmc {

// N points in [0,1)^d, stored row-major (point-major).
struct PointSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;  // n * d entries, each in [0,1)

    std::span<const double> point(std::size_t i) const {
        return {values.data() + i * d, d};
    }
    double operator()(std::size_t i, std::size_t j) const { return values[i * d + j]; }
};

enum class RandomizationKind { None, DigitalShift, OwenNested };

struct RandomizationScheme {
    RandomizationKind kind = RandomizationKind::None;
    std::uint64_t seed = 0;  // ignored when kind == None

    static RandomizationScheme none() { return {RandomizationKind::None, 0}; }
    static RandomizationScheme digital_shift(std::uint64_t s) {
        return {RandomizationKind::DigitalShift, s};
    }
    static RandomizationScheme owen(std::uint64_t s) {
        return {RandomizationKind::OwenNested, s};
    }
};

// First n points of the Sobol' sequence in dimension d (Gray-code order),
// randomized per scheme. Deterministic given (n, d, scheme).
PointSet sobol_points(std::size_t n, std::size_t d, const RandomizationScheme& scheme);

enum class DiscrepancyMode { Exact1d, GridExact, SampleEstimate };

// Star discrepancy D*(u^{1:N}). GridExact enumerates boxes anchored at the
// origin with corners on the grid induced by the point coordinates; it is
// guarded to d <= 3 and n <= 1024. SampleEstimate is a lower bound from
// random anchor boxes.
double star_discrepancy(const PointSet& ps, DiscrepancyMode mode,
                        std::size_t sample_count = 1 << 14, std::uint64_t seed = 0);

}  // namespace sqmc
