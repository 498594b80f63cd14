#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sqmc {

// Position along the order-m Hilbert curve in [0,1)^d, packed into d*m bits.
struct HilbertIndex {
    std::uint64_t bits = 0;
    int d = 1;
    int m = 1;
};

// Resolution policy for Hilbert sorting. Fixed uses m bits per axis; Auto
// starts from enough bits to separate n cells and doubles until either all
// particles map to distinct indices or the 64-bit pack is full.
struct HilbertResolution {
    enum class Kind { Fixed, Auto } kind = Kind::Fixed;
    int m = 0;  // Fixed only

    static HilbertResolution fixed(int m) { return {Kind::Fixed, m}; }
    static HilbertResolution automatic() { return {Kind::Auto, 0}; }
    static int max_bits_per_axis(int d) { return 64 / d; }
};

// Index of the hypercube cell of side 2^-m containing p. For d=1 this is
// floor(p * 2^m).
HilbertIndex hilbert_index(std::span<const double> p, int m);

// Center of the k-th cell along the order-m curve.
std::vector<double> hilbert_cell_center(const HilbertIndex& k);

// Stable permutation (0-based) ordering points by nondecreasing Hilbert
// index; ties keep original relative order.
std::vector<std::size_t> hilbert_sort(std::span<const double> points, int d, int m);
std::vector<std::size_t> hilbert_sort(std::span<const double> points, int d,
                                      const HilbertResolution& res);

namespace detail {
// Skilling transform between Hilbert index (packed, MSB-first interleave) and
// axis coordinates, each an m-bit integer. Exposed for exhaustive testing.
std::uint64_t hilbert_axes_to_index(std::span<const std::uint32_t> axes, int m);
void hilbert_index_to_axes(std::uint64_t index, int d, int m,
                           std::span<std::uint32_t> axes);
}  // namespace detail

}  // namespace sqmc
