#pragma once
// First 16 points of the unscrambled Sobol' sequence in d = 2, 5, 32,
// frozen from an independent generator for use as a bit-exact oracle.
namespace sqmc_test {
inline constexpr double kSobolRefD2[16][2] = {
    {0.0, 0.0},
    {0.5, 0.5},
    {0.75, 0.25},
    {0.25, 0.75},
    {0.375, 0.375},
    {0.875, 0.875},
    {0.625, 0.125},
    {0.125, 0.625},
    {0.1875, 0.3125},
    {0.6875, 0.8125},
    {0.9375, 0.0625},
    {0.4375, 0.5625},
    {0.3125, 0.1875},
    {0.8125, 0.6875},
    {0.5625, 0.4375},
    {0.0625, 0.9375},
};
inline constexpr double kSobolRefD5[16][5] = {
    {0.0, 0.0, 0.0, 0.0, 0.0},
    {0.5, 0.5, 0.5, 0.5, 0.5},
    {0.75, 0.25, 0.25, 0.25, 0.75},
    {0.25, 0.75, 0.75, 0.75, 0.25},
    {0.375, 0.375, 0.625, 0.875, 0.375},
    {0.875, 0.875, 0.125, 0.375, 0.875},
    {0.625, 0.125, 0.875, 0.625, 0.625},
    {0.125, 0.625, 0.375, 0.125, 0.125},
    {0.1875, 0.3125, 0.9375, 0.4375, 0.5625},
    {0.6875, 0.8125, 0.4375, 0.9375, 0.0625},
    {0.9375, 0.0625, 0.6875, 0.1875, 0.3125},
    {0.4375, 0.5625, 0.1875, 0.6875, 0.8125},
    {0.3125, 0.1875, 0.3125, 0.5625, 0.9375},
    {0.8125, 0.6875, 0.8125, 0.0625, 0.4375},
    {0.5625, 0.4375, 0.0625, 0.8125, 0.1875},
    {0.0625, 0.9375, 0.5625, 0.3125, 0.6875},
};
inline constexpr double kSobolRefD32[16][32] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
    {0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25, 0.75, 0.25, 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.25, 0.75, 0.25, 0.75, 0.25, 0.75, 0.25, 0.25},
    {0.25, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25, 0.25, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.25, 0.75, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75, 0.75, 0.25, 0.75, 0.25, 0.75, 0.25, 0.75, 0.75},
    {0.375, 0.375, 0.625, 0.875, 0.375, 0.125, 0.375, 0.875, 0.875, 0.625, 0.875, 0.375, 0.375, 0.625, 0.375, 0.875, 0.375, 0.875, 0.875, 0.125, 0.125, 0.125, 0.375, 0.875, 0.875, 0.875, 0.375, 0.625, 0.125, 0.125, 0.375, 0.125},
    {0.875, 0.875, 0.125, 0.375, 0.875, 0.625, 0.875, 0.375, 0.375, 0.125, 0.375, 0.875, 0.875, 0.125, 0.875, 0.375, 0.875, 0.375, 0.375, 0.625, 0.625, 0.625, 0.875, 0.375, 0.375, 0.375, 0.875, 0.125, 0.625, 0.625, 0.875, 0.625},
    {0.625, 0.125, 0.875, 0.625, 0.625, 0.875, 0.125, 0.125, 0.125, 0.375, 0.125, 0.625, 0.125, 0.875, 0.625, 0.625, 0.625, 0.625, 0.125, 0.375, 0.375, 0.875, 0.125, 0.625, 0.625, 0.125, 0.125, 0.375, 0.375, 0.875, 0.125, 0.375},
    {0.125, 0.625, 0.375, 0.125, 0.125, 0.375, 0.625, 0.625, 0.625, 0.875, 0.625, 0.125, 0.625, 0.375, 0.125, 0.125, 0.125, 0.125, 0.625, 0.875, 0.875, 0.375, 0.625, 0.125, 0.125, 0.625, 0.625, 0.875, 0.875, 0.375, 0.625, 0.875},
    {0.1875, 0.3125, 0.9375, 0.4375, 0.5625, 0.3125, 0.4375, 0.9375, 0.9375, 0.3125, 0.6875, 0.0625, 0.9375, 0.9375, 0.8125, 0.9375, 0.8125, 0.8125, 0.9375, 0.3125, 0.1875, 0.6875, 0.1875, 0.9375, 0.4375, 0.0625, 0.5625, 0.1875, 0.6875, 0.9375, 0.4375, 0.8125},
    {0.6875, 0.8125, 0.4375, 0.9375, 0.0625, 0.8125, 0.9375, 0.4375, 0.4375, 0.8125, 0.1875, 0.5625, 0.4375, 0.4375, 0.3125, 0.4375, 0.3125, 0.3125, 0.4375, 0.8125, 0.6875, 0.1875, 0.6875, 0.4375, 0.9375, 0.5625, 0.0625, 0.6875, 0.1875, 0.4375, 0.9375, 0.3125},
    {0.9375, 0.0625, 0.6875, 0.1875, 0.3125, 0.5625, 0.1875, 0.1875, 0.1875, 0.5625, 0.4375, 0.8125, 0.6875, 0.6875, 0.0625, 0.6875, 0.0625, 0.5625, 0.1875, 0.0625, 0.4375, 0.4375, 0.4375, 0.6875, 0.1875, 0.8125, 0.8125, 0.9375, 0.9375, 0.1875, 0.1875, 0.5625},
    {0.4375, 0.5625, 0.1875, 0.6875, 0.8125, 0.0625, 0.6875, 0.6875, 0.6875, 0.0625, 0.9375, 0.3125, 0.1875, 0.1875, 0.5625, 0.1875, 0.5625, 0.0625, 0.6875, 0.5625, 0.9375, 0.9375, 0.9375, 0.1875, 0.6875, 0.3125, 0.3125, 0.4375, 0.4375, 0.6875, 0.6875, 0.0625},
    {0.3125, 0.1875, 0.3125, 0.5625, 0.9375, 0.4375, 0.0625, 0.0625, 0.0625, 0.9375, 0.3125, 0.4375, 0.5625, 0.3125, 0.6875, 0.0625, 0.6875, 0.1875, 0.0625, 0.4375, 0.0625, 0.5625, 0.3125, 0.0625, 0.5625, 0.9375, 0.9375, 0.5625, 0.5625, 0.8125, 0.0625, 0.9375},
    {0.8125, 0.6875, 0.8125, 0.0625, 0.4375, 0.9375, 0.5625, 0.5625, 0.5625, 0.4375, 0.8125, 0.9375, 0.0625, 0.8125, 0.1875, 0.5625, 0.1875, 0.6875, 0.5625, 0.9375, 0.5625, 0.0625, 0.8125, 0.5625, 0.0625, 0.4375, 0.4375, 0.0625, 0.0625, 0.3125, 0.5625, 0.4375},
    {0.5625, 0.4375, 0.0625, 0.8125, 0.1875, 0.6875, 0.3125, 0.8125, 0.8125, 0.1875, 0.5625, 0.6875, 0.8125, 0.0625, 0.4375, 0.3125, 0.4375, 0.4375, 0.8125, 0.1875, 0.3125, 0.3125, 0.0625, 0.3125, 0.8125, 0.1875, 0.6875, 0.3125, 0.8125, 0.0625, 0.3125, 0.6875},
    {0.0625, 0.9375, 0.5625, 0.3125, 0.6875, 0.1875, 0.8125, 0.3125, 0.3125, 0.6875, 0.0625, 0.1875, 0.3125, 0.5625, 0.9375, 0.8125, 0.9375, 0.9375, 0.3125, 0.6875, 0.8125, 0.8125, 0.5625, 0.8125, 0.3125, 0.6875, 0.1875, 0.8125, 0.3125, 0.5625, 0.8125, 0.1875},
};
}  // namespace sqmc_test
