#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sqmc/resample.hpp"
#include "sqmc/rng.hpp"

using namespace sqmc;

namespace {

// Brute-force oracle: per u, scan the cumulative weights from scratch.
std::vector<std::size_t> brute_labels(const std::vector<double>& u,
                                      const std::vector<double>& w) {
    std::vector<std::size_t> out;
    for (double v : u) {
        double s = 0.0;
        std::size_t m = 0;
        for (; m < w.size(); ++m) {
            s += w[m];
            if (s >= v) break;
        }
        out.push_back(std::min(m, w.size() - 1));
    }
    return out;
}

std::vector<double> random_weights(std::size_t n, CounterRng& rng, bool with_zeros) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& v : w) {
        v = with_zeros && rng.uniform() < 0.2 ? 0.0 : rng.uniform();
        total += v;
    }
    if (total == 0.0) w[0] = total = 1.0;
    for (auto& v : w) v /= total;
    // Compensate rounding on the largest entry so the sum is 1 within the
    // validator's tolerance.
    double s = 0.0;
    for (double v : w) s += v;
    *std::max_element(w.begin(), w.end()) += 1.0 - s;
    return w;
}

}  // namespace

TEST_CASE("inverse transform worked examples") {
    CHECK(inverse_transform_labels(std::vector<double>{0.25, 0.75},
                                   std::vector<double>{0.5, 0.5}) ==
          std::vector<std::size_t>{0, 1});
    CHECK(inverse_transform_labels(std::vector<double>{0.1, 0.4, 0.9},
                                   std::vector<double>{1.0}) ==
          std::vector<std::size_t>{0, 0, 0});
    CHECK(inverse_transform_labels(std::vector<double>{0.1, 0.25, 0.6, 0.9},
                                   std::vector<double>{0.2, 0.3, 0.5}) ==
          std::vector<std::size_t>{0, 1, 2, 2});
}

TEST_CASE("boundary convention: u equal to a cumulative sum stays on that label") {
    CHECK(inverse_transform_labels(std::vector<double>{0.2, 0.5},
                                   std::vector<double>{0.2, 0.3, 0.5}) ==
          std::vector<std::size_t>{0, 1});
}

TEST_CASE("inverse transform equals brute force on 10^4 random instances") {
    CounterRng rng(1234, 0);
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 1 + rng() % 12;
        const std::size_t n_out = 1 + rng() % 12;
        const auto w = random_weights(n, rng, rep % 3 == 0);
        std::vector<double> u(n_out);
        for (auto& v : u) v = rng.uniform();
        std::sort(u.begin(), u.end());
        CHECK(inverse_transform_labels(u, w) == brute_labels(u, w));
    }
}

TEST_CASE("labels are monotone in u and inputs validated") {
    CounterRng rng(77, 0);
    const auto w = random_weights(16, rng, false);
    std::vector<double> u(64);
    for (auto& v : u) v = rng.uniform();
    std::sort(u.begin(), u.end());
    const auto labels = inverse_transform_labels(u, w);
    CHECK(std::is_sorted(labels.begin(), labels.end()));

    CHECK_THROWS(inverse_transform_labels(std::vector<double>{0.9, 0.1}, w));
    CHECK_THROWS(inverse_transform_labels(std::vector<double>{0.5},
                                          std::vector<double>{0.4, 0.4}));
    CHECK_THROWS(inverse_transform_labels(std::vector<double>{0.5},
                                          std::vector<double>{0.0, 0.0}));
}

TEST_CASE("systematic worked examples") {
    // Any interior u0 with uniform weights gives the identity; u0 = 0 hits
    // every bin boundary exactly, where the pinned convention keeps the
    // earlier label.
    const std::vector<double> uniform(8, 0.125);
    const auto id = systematic_labels(uniform, 0.5, 8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(id[i] == i);
    const auto boundary = systematic_labels(uniform, 0.0, 8);
    CHECK(boundary[0] == 0);
    for (std::size_t i = 1; i < 8; ++i) CHECK(boundary[i] == i - 1);

    CHECK(systematic_labels(std::vector<double>{0.75, 0.25}, 0.1, 4) ==
          std::vector<std::size_t>{0, 0, 0, 1});
}

TEST_CASE("systematic equals inverse transform on the stratified grid") {
    CounterRng rng(9, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 10;
        const auto w = random_weights(n, rng, false);
        const double u0 = rng.uniform();
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i)
            grid[i] = (static_cast<double>(i) + u0) / static_cast<double>(n);
        CHECK(systematic_labels(w, u0, n) == inverse_transform_labels(grid, w));
    }
}

TEST_CASE("systematic offspring counts are unbiased and tight") {
    const std::vector<double> w{0.42, 0.08, 0.27, 0.23};
    const std::size_t n = w.size();
    std::vector<double> mean(n, 0.0);
    CounterRng rng(3001, 0);
    const int reps = 10000;
    for (int rep = 0; rep < reps; ++rep) {
        const auto labels = systematic_labels(w, rng.uniform(), n);
        std::vector<int> count(n, 0);
        for (auto a : labels) ++count[a];
        for (std::size_t m = 0; m < n; ++m) {
            // Offspring counts can only straddle N * W^m.
            CHECK(count[m] >= static_cast<int>(std::floor(n * w[m])));
            CHECK(count[m] <= static_cast<int>(std::ceil(n * w[m])));
            mean[m] += count[m];
        }
    }
    for (std::size_t m = 0; m < n; ++m) {
        mean[m] /= reps;
        // Count is Bernoulli around floor(N w); 3 sigma of the replicate mean.
        const double frac = n * w[m] - std::floor(n * w[m]);
        const double se = std::sqrt(frac * (1.0 - frac) / reps);
        CHECK(std::abs(mean[m] - n * w[m]) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("multinomial offspring moments via sorted uniforms") {
    const std::vector<double> w{0.5, 0.3, 0.2};
    const std::size_t n = 32;
    const int reps = 10000;
    std::vector<double> mean(3, 0.0);
    for (int rep = 0; rep < reps; ++rep) {
        const auto labels =
            inverse_transform_labels(sorted_uniforms(n, 88, rep), w);
        std::vector<int> count(3, 0);
        for (auto a : labels) ++count[a];
        for (int m = 0; m < 3; ++m) mean[m] += count[m];
    }
    for (int m = 0; m < 3; ++m) {
        mean[m] /= reps;
        const double expect = n * w[m];
        const double se = std::sqrt(n * w[m] * (1.0 - w[m]) / reps);
        CHECK(std::abs(mean[m] - expect) <= 3.0 * se);
    }
}

TEST_CASE("sorted_uniforms shape and marginal distribution") {
    const auto u = sorted_uniforms(1000, 5, 0);
    CHECK(std::is_sorted(u.begin(), u.end()));
    CHECK(u.front() >= 0.0);
    CHECK(u.back() < 1.0);

    // n=1 marginal is Uniform[0,1): KS test over 10^4 draws.
    const int reps = 10000;
    std::vector<double> draws(reps);
    for (int i = 0; i < reps; ++i) draws[i] = sorted_uniforms(1, 42, i)[0];
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < reps; ++i) {
        ks = std::max(ks, std::abs((i + 1.0) / reps - draws[i]));
        ks = std::max(ks, std::abs(draws[i] - static_cast<double>(i) / reps));
    }
    CHECK(ks < 1.95 / std::sqrt(static_cast<double>(reps)));  // alpha ~ 0.001
}
