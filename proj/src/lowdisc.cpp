#include "sqmc/lowdisc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "sqmc/detail/sobol_joe_kuo.hpp"
#include "sqmc/rng.hpp"

namespace sqmc {
namespace {

// Points are carried as 53-bit integers; value = bits / 2^53, so every
// coordinate is strictly below 1 and exactly representable.
constexpr int kBits = 53;

// Direction numbers v_k (k = 1..kBits) for one dimension, scaled so that
// v_k occupies bit (kBits - k) and above.
std::vector<std::uint64_t> direction_numbers(std::size_t dim_index) {
    std::vector<std::uint64_t> v(kBits);
    if (dim_index == 0) {
        for (int k = 1; k <= kBits; ++k) v[k - 1] = 1ULL << (kBits - k);
        return v;
    }
    const std::size_t row = dim_index - 1;
    const int s = detail::kSobolDegree[row];
    const std::uint32_t poly = detail::kSobolPoly[row];
    std::vector<std::uint64_t> m(kBits);
    for (int k = 0; k < s; ++k)
        m[k] = detail::kSobolMinit[row * detail::kSobolMaxDegree + k];
    for (int k = s; k < kBits; ++k) {
        std::uint64_t mk = m[k - s] ^ (m[k - s] << s);
        for (int i = 1; i < s; ++i)
            if (poly >> (s - i) & 1U) mk ^= m[k - i] << i;
        m[k] = mk;
    }
    for (int k = 1; k <= kBits; ++k) v[k - 1] = m[k - 1] << (kBits - k);
    return v;
}

// Owen nested uniform scrambling in base 2 of one coordinate. The flip of
// the bit at depth k is keyed by the node path (the k more significant bits
// of the unscrambled value), so points sharing a dyadic prefix share the
// same permutation subtree without the tree ever being stored.
std::uint64_t owen_scramble(std::uint64_t x, std::uint64_t coord_key) {
    std::uint64_t out = 0;
    for (int k = 0; k < kBits; ++k) {
        const std::uint64_t prefix = (k == 0) ? 0 : (x >> (kBits - k));
        const std::uint64_t node = prefix | (1ULL << k);  // leading-one path marker
        const std::uint64_t flip = hash_combine(coord_key, node) & 1ULL;
        const std::uint64_t bit = (x >> (kBits - 1 - k)) & 1ULL;
        out = (out << 1) | (bit ^ flip);
    }
    return out;
}

double star_discrepancy_1d(const PointSet& ps) {
    std::vector<double> u(ps.values);
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(ps.n);
    double best = 0.0;
    for (std::size_t i = 0; i < ps.n; ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - u[i];
        const double lo = u[i] - static_cast<double>(i) / n;
        best = std::max({best, hi, lo});
    }
    return best;
}

// Exact star discrepancy in d=2 by sweeping the x-grid while keeping the
// y-coordinates of covered points sorted.
double star_discrepancy_2d(const PointSet& ps) {
    const std::size_t n = ps.n;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ps(a, 0) < ps(b, 0); });

    std::vector<double> xs;  // candidate x-corners
    for (std::size_t i = 0; i < n; ++i) xs.push_back(ps(i, 0));
    xs.push_back(1.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) ys.push_back(ps(i, 1));
    ys.push_back(1.0);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const double dn = static_cast<double>(n);
    double best = 0.0;
    std::vector<double> open_y, closed_y;  // y of points with x < bx / x <= bx
    std::size_t next = 0;
    for (double bx : xs) {
        open_y.resize(0);
        // points with x strictly below bx were inserted before; rebuild lazily:
        // closed set grows monotonically with bx, open set = closed set of the
        // previous distinct x value.
        while (next < n && ps(order[next], 0) <= bx) {
            closed_y.insert(std::upper_bound(closed_y.begin(), closed_y.end(),
                                             ps(order[next], 1)),
                            ps(order[next], 1));
            ++next;
        }
        std::size_t strict = next;
        while (strict > 0 && ps(order[strict - 1], 0) >= bx) --strict;
        // open_y: first `strict` points of order, sorted by y
        open_y.assign(closed_y.begin(), closed_y.end());
        if (strict < next) {
            for (std::size_t i = strict; i < next; ++i) {
                auto it = std::lower_bound(open_y.begin(), open_y.end(), ps(order[i], 1));
                open_y.erase(it);
            }
        }
        for (double by : ys) {
            const double vol = bx * by;
            const auto c_open = static_cast<double>(
                std::lower_bound(open_y.begin(), open_y.end(), by) - open_y.begin());
            const auto c_closed = static_cast<double>(
                std::upper_bound(closed_y.begin(), closed_y.end(), by) - closed_y.begin());
            best = std::max({best, vol - c_open / dn, c_closed / dn - vol});
        }
    }
    return best;
}

double star_discrepancy_3d(const PointSet& ps) {
    const std::size_t n = ps.n;
    std::vector<std::vector<double>> grid(3);
    for (int j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < n; ++i) grid[j].push_back(ps(i, j));
        grid[j].push_back(1.0);
        std::sort(grid[j].begin(), grid[j].end());
        grid[j].erase(std::unique(grid[j].begin(), grid[j].end()), grid[j].end());
    }
    const double dn = static_cast<double>(n);
    double best = 0.0;
    for (double bx : grid[0])
        for (double by : grid[1])
            for (double bz : grid[2]) {
                std::size_t open = 0, closed = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = ps(i, 0), y = ps(i, 1), z = ps(i, 2);
                    if (x < bx && y < by && z < bz) ++open;
                    if (x <= bx && y <= by && z <= bz) ++closed;
                }
                const double vol = bx * by * bz;
                best = std::max({best, vol - static_cast<double>(open) / dn,
                                 static_cast<double>(closed) / dn - vol});
            }
    return best;
}

}  // namespace

PointSet sobol_points(std::size_t n, std::size_t d, const RandomizationScheme& scheme) {
    if (n == 0) throw std::invalid_argument("sobol_points: point count must be >= 1");
    if (d < 1 || d > static_cast<std::size_t>(detail::kSobolMaxDim))
        throw std::invalid_argument(
            "sobol_points: dimension exceeds provisioned direction-number table");

    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.values.resize(n * d);

    std::vector<std::uint64_t> shift(d, 0);
    std::vector<std::uint64_t> owen_key(d, 0);
    if (scheme.kind == RandomizationKind::DigitalShift) {
        CounterRng rng(scheme.seed, /*stream=*/0x5b1f);
        for (std::size_t j = 0; j < d; ++j) shift[j] = rng() >> (64 - kBits);
    } else if (scheme.kind == RandomizationKind::OwenNested) {
        for (std::size_t j = 0; j < d; ++j)
            owen_key[j] = hash_combine(mix64(scheme.seed), 0xa11ce5ULL + j);
    }

    std::vector<std::uint64_t> state(d, 0);  // Gray-code running XOR
    for (std::size_t j = 0; j < d; ++j) {
        const auto v = direction_numbers(j);
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bits = x;
            switch (scheme.kind) {
                case RandomizationKind::None: break;
                case RandomizationKind::DigitalShift: bits ^= shift[j]; break;
                case RandomizationKind::OwenNested:
                    bits = owen_scramble(bits, owen_key[j]);
                    break;
            }
            ps.values[i * d + j] = static_cast<double>(bits) * 0x1.0p-53;
            x ^= v[std::countr_zero(i + 1)];
        }
    }
    return ps;
}

double star_discrepancy(const PointSet& ps, DiscrepancyMode mode,
                        std::size_t sample_count, std::uint64_t seed) {
    if (ps.n == 0) throw std::invalid_argument("star_discrepancy: empty point set");
    switch (mode) {
        case DiscrepancyMode::Exact1d:
            if (ps.d != 1)
                throw std::invalid_argument("star_discrepancy: exact-1d requires d=1");
            return star_discrepancy_1d(ps);
        case DiscrepancyMode::GridExact: {
            if (ps.d > 3 || ps.n > 1024)
                throw std::invalid_argument(
                    "star_discrepancy: grid-exact guarded to d <= 3 and n <= 1024");
            if (ps.d == 1) return star_discrepancy_1d(ps);
            if (ps.d == 2) return star_discrepancy_2d(ps);
            return star_discrepancy_3d(ps);
        }
        case DiscrepancyMode::SampleEstimate: {
            CounterRng rng(seed, 0xd15c);
            const double dn = static_cast<double>(ps.n);
            double best = 0.0;
            std::vector<double> b(ps.d);
            for (std::size_t s = 0; s < sample_count; ++s) {
                double vol = 1.0;
                for (std::size_t j = 0; j < ps.d; ++j) {
                    b[j] = rng.uniform();
                    vol *= b[j];
                }
                std::size_t open = 0, closed = 0;
                for (std::size_t i = 0; i < ps.n; ++i) {
                    bool in_open = true, in_closed = true;
                    for (std::size_t j = 0; j < ps.d; ++j) {
                        const double x = ps(i, j);
                        in_open &= x < b[j];
                        in_closed &= x <= b[j];
                    }
                    open += in_open;
                    closed += in_closed;
                }
                best = std::max({best, vol - static_cast<double>(open) / dn,
                                 static_cast<double>(closed) / dn - vol});
            }
            return best;
        }
    }
    throw std::logic_error("star_discrepancy: unknown mode");
}

}  // namespace sqmc
