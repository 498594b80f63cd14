#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc {

// N_B trajectories in X^{T+1}; every state is one of the filter's stored
// time-t particles.
struct TrajectorySet {
    std::size_t n_b = 0;
    int d = 1;
    int t_max = 0;
    std::vector<double> states;  // n_b * (t_max+1) * d, trajectory-major

    std::span<const double> state(std::size_t traj, int t) const {
        return {states.data() + (traj * (t_max + 1) + t) * d,
                static_cast<std::size_t>(d)};
    }
};

// Per-t mean across trajectories; (t_max+1) x d, row-major.
std::vector<double> smoothed_means(const TrajectorySet& trajectories);

// Estimates of E[sum_{s<=t} phi_tilde(x_s) | y_{0:t}] for every t, computed by
// running the filter on the augmented chain z_t = (sum_{s<t} phi_tilde(x_s),
// x_t). Bounds for the running-sum coordinate come from a fixed-seed SMC
// pilot. Returns a (t_max+1)-vector.
std::vector<double> forward_smoothing_additive(
    const FeynmanKacModel& model,
    const std::function<double(std::span<const double>)>& phi_tilde,
    std::size_t n, int t_max, const SqmcConfig& config);

// Full-path forward smoothing: the filter carried over z_t = x_{0:t}, with
// the Hilbert sort on all (t+1)*d psi-mapped coordinates. Returns the final
// weighted trajectories. Limited to (t_max+1)*d <= 64 so every path still
// packs into one 64-bit Hilbert index.
struct WeightedPaths {
    TrajectorySet trajectories;
    std::vector<double> weights;  // normalized, one per trajectory
    double log_z = 0.0;
};

WeightedPaths forward_smoothing_paths(const FeynmanKacModel& model,
                                      std::size_t n, int t_max,
                                      const SqmcConfig& config);

// Backward pass over a stored filter output. Draws a point set in
// [0,1)^{T+1} (scrambled Sobol' when T+1 <= 32, i.i.d. fallback otherwise,
// or always i.i.d. with the test hook), picks final states by inverse
// transform against the time-T weights, then walks t = T-1..0 inverting the
// backward-weight CDF W_t^m m_t(x_{t+1} | x_t^m) / (normalizer). Requires the
// model to declare a transition density.
TrajectorySet backward_pass(const FilterOutput& output,
                            const FeynmanKacModel& model, std::size_t n_b,
                            const RandomizationScheme& scheme,
                            bool iid_uniforms = false);

}  // namespace sqmc
