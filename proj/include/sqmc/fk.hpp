#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqmc/hilbert.hpp"
#include "sqmc/lowdisc.hpp"
#include "sqmc/transforms.hpp"

namespace sqmc {

// A Feynman-Kac model: proposal kernels written as deterministic maps of
// uniforms (gamma0, gamma_t) plus weight functions (log_g0, log_gt).
// Log-weights may be -inf (zero weight).
class FeynmanKacModel {
public:
    virtual ~FeynmanKacModel() = default;

    virtual int dim() const = 0;          // state dimension d
    virtual int u_dim0() const { return dim(); }   // uniforms consumed at t=0
    virtual int rand_dim() const { return dim(); } // d_v, uniforms per step t>=1

    virtual void gamma0(std::span<const double> u, std::span<double> x) const = 0;
    virtual void gamma_t(int t, std::span<const double> x_prev,
                         std::span<const double> v, std::span<double> x) const = 0;

    virtual double log_g0(std::span<const double> x) const = 0;
    virtual double log_gt(int t, std::span<const double> x_prev,
                          std::span<const double> x) const = 0;

    virtual PsiBounds psi_bounds() const = 0;

    // Required for backward smoothing only.
    virtual bool has_transition_density() const { return false; }
    virtual double log_transition_density(int /*t*/, std::span<const double> /*x_prev*/,
                                          std::span<const double> /*x*/) const {
        throw std::logic_error("model declares no transition density");
    }
};

// All unnormalized weights vanished at some step.
class WeightCollapseError : public std::runtime_error {
public:
    explicit WeightCollapseError(int t)
        : std::runtime_error("all particle weights collapsed at t=" + std::to_string(t)),
          t_(t) {}
    int time_step() const { return t_; }

private:
    int t_;
};

struct ParticleSystem {
    int t = 0;
    std::size_t n = 0;
    int d = 1;
    std::vector<double> states;   // n * d, row-major
    std::vector<double> logw;     // unnormalized log-weights
    std::vector<double> weights;  // normalized
    double log_z = 0.0;           // running log Z_t^N

    std::span<const double> state(std::size_t i) const { return {states.data() + i * d, static_cast<std::size_t>(d)}; }
};

struct FilterStep {
    std::vector<double> states;   // n * d, sorted along the Hilbert curve
    std::vector<double> weights;  // normalized, same order
    double log_z = 0.0;
};

enum class EngineKind { Smc, Sqmc };
enum class Resampler { Multinomial, Systematic };

struct FilterOutput {
    EngineKind engine = EngineKind::Smc;
    int d = 1;
    std::size_t n = 0;
    RandomizationScheme scheme;
    std::uint64_t seed = 0;
    std::vector<FilterStep> steps;  // size T+1

    int horizon() const { return static_cast<int>(steps.size()) - 1; }
    double log_evidence_at(int t) const { return steps.at(t).log_z; }
};

FilterOutput smc_run(const FeynmanKacModel& model, std::size_t n, int t_max,
                     Resampler resampler, std::uint64_t seed);

struct SqmcConfig {
    RandomizationScheme scheme = RandomizationScheme::none();
    HilbertResolution resolution = HilbertResolution::automatic();
    bool iid_uniforms = false;  // test hook: i.i.d. uniforms instead of (R)QMC
};

FilterOutput sqmc_run(const FeynmanKacModel& model, std::size_t n, int t_max,
                      const SqmcConfig& config);

// Weighted moment estimate sum_n W_t^n phi(x_t^n).
std::vector<double> estimate_moment(
    const FilterOutput& output, int t,
    const std::function<std::vector<double>(std::span<const double>)>& phi);

// log Z_t^N: log of the product of per-step average unnormalized weights.
double log_evidence(const FilterOutput& output, int t);

}  // namespace sqmc
