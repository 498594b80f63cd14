#include "sqmc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sqmc {
namespace detail {
namespace {

// Transpose form: axis i holds every d-th bit of the index. The pack order
// puts axis 0's bit first within each m-level group, MSB-first.
std::uint64_t pack_transpose(std::span<const std::uint32_t> x, int d, int m) {
    std::uint64_t k = 0;
    for (int bit = m - 1; bit >= 0; --bit)
        for (int i = 0; i < d; ++i) k = (k << 1) | ((x[i] >> bit) & 1U);
    return k;
}

void unpack_transpose(std::uint64_t k, int d, int m, std::span<std::uint32_t> x) {
    for (int i = 0; i < d; ++i) x[i] = 0;
    for (int bit = m - 1; bit >= 0; --bit)
        for (int i = 0; i < d; ++i) {
            const int pos = bit * d + (d - 1 - i);
            x[i] |= static_cast<std::uint32_t>((k >> pos) & 1ULL) << bit;
        }
}

}  // namespace

std::uint64_t hilbert_axes_to_index(std::span<const std::uint32_t> axes, int m) {
    const int d = static_cast<int>(axes.size());
    std::vector<std::uint32_t> x(axes.begin(), axes.end());
    const std::uint32_t msb = 1U << (m - 1);
    // Inverse undo of the excess work, then Gray encode (Skilling 2004).
    for (std::uint32_t q = msb; q > 1; q >>= 1) {
        const std::uint32_t p = q - 1;
        for (int i = 0; i < d; ++i) {
            if (x[i] & q) {
                x[0] ^= p;
            } else {
                const std::uint32_t t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
    }
    for (int i = 1; i < d; ++i) x[i] ^= x[i - 1];
    std::uint32_t t = 0;
    for (std::uint32_t q = msb; q > 1; q >>= 1)
        if (x[d - 1] & q) t ^= q - 1;
    for (int i = 0; i < d; ++i) x[i] ^= t;
    return pack_transpose(x, d, m);
}

void hilbert_index_to_axes(std::uint64_t index, int d, int m,
                           std::span<std::uint32_t> axes) {
    unpack_transpose(index, d, m, axes);
    auto* x = axes.data();
    const std::uint32_t top = 2U << (m - 1);
    // Gray decode, then undo excess work.
    std::uint32_t t = x[d - 1] >> 1;
    for (int i = d - 1; i > 0; --i) x[i] ^= x[i - 1];
    x[0] ^= t;
    for (std::uint32_t q = 2; q != top; q <<= 1) {
        const std::uint32_t p = q - 1;
        for (int i = d - 1; i >= 0; --i) {
            if (x[i] & q) {
                x[0] ^= p;
            } else {
                const std::uint32_t s = (x[0] ^ x[i]) & p;
                x[0] ^= s;
                x[i] ^= s;
            }
        }
    }
}

}  // namespace detail

namespace {

void check_resolution(int d, int m) {
    if (d < 1) throw std::invalid_argument("hilbert: dimension must be >= 1");
    if (m < 1 || d * m > 64)
        throw std::invalid_argument("hilbert: resolution overflow, need 1 <= d*m <= 64");
}

std::uint32_t quantize(double v, int m) {
    if (!(v >= 0.0 && v < 1.0))
        throw std::invalid_argument("hilbert: coordinate out of [0,1)");
    const double scaled = v * static_cast<double>(1ULL << m);
    auto cell = static_cast<std::uint32_t>(scaled);
    const std::uint32_t last = (1ULL << m) - 1;
    return cell > last ? last : cell;
}

}  // namespace

HilbertIndex hilbert_index(std::span<const double> p, int m) {
    const int d = static_cast<int>(p.size());
    check_resolution(d, m);
    if (d == 1) return {static_cast<std::uint64_t>(quantize(p[0], m)), 1, m};
    std::vector<std::uint32_t> axes(d);
    for (int i = 0; i < d; ++i) axes[i] = quantize(p[i], m);
    return {detail::hilbert_axes_to_index(axes, m), d, m};
}

std::vector<double> hilbert_cell_center(const HilbertIndex& k) {
    check_resolution(k.d, k.m);
    const double scale = std::ldexp(1.0, -k.m);
    std::vector<double> center(k.d);
    if (k.d == 1) {
        center[0] = (static_cast<double>(k.bits) + 0.5) * scale;
        return center;
    }
    std::vector<std::uint32_t> axes(k.d);
    detail::hilbert_index_to_axes(k.bits, k.d, k.m, axes);
    for (int i = 0; i < k.d; ++i)
        center[i] = (static_cast<double>(axes[i]) + 0.5) * scale;
    return center;
}

std::vector<std::size_t> hilbert_sort(std::span<const double> points, int d, int m) {
    if (points.empty() || points.size() % d != 0)
        throw std::invalid_argument("hilbert_sort: point list shape mismatch");
    check_resolution(d, m);
    const std::size_t n = points.size() / d;
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i)
        keys[i] = hilbert_index(points.subspan(i * d, d), m).bits;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return perm;
}

std::vector<std::size_t> hilbert_sort(std::span<const double> points, int d,
                                      const HilbertResolution& res) {
    if (res.kind == HilbertResolution::Kind::Fixed)
        return hilbert_sort(points, d, res.m ? res.m : HilbertResolution::max_bits_per_axis(d));
    const std::size_t n = points.size() / std::max(d, 1);
    const int cap = HilbertResolution::max_bits_per_axis(d);
    int m = 1;
    while (m < cap && (1ULL << std::min<std::uint64_t>(63, static_cast<std::uint64_t>(m) * d)) < n)
        ++m;
    for (;; ++m) {
        auto perm = hilbert_sort(points, d, m);
        if (m >= cap) return perm;
        bool distinct = true;
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i < n && distinct; ++i) {
            const std::uint64_t k = hilbert_index(points.subspan(perm[i] * d, d), m).bits;
            if (i > 0 && k == prev) distinct = false;
            prev = k;
        }
        if (distinct) return perm;
    }
}

}  // namespace sqmc
