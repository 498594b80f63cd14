#include "sqmc/fk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sqmc/resample.hpp"
#include "sqmc/rng.hpp"

namespace sqmc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log of the mean of exp(logw); throws on total collapse.
double log_mean_exp(std::span<const double> logw, int t) {
    const double max = *std::max_element(logw.begin(), logw.end());
    if (max == kNegInf) throw WeightCollapseError(t);
    double acc = 0.0;
    for (double v : logw) acc += std::exp(v - max);
    return max + std::log(acc / static_cast<double>(logw.size()));
}

void normalize(std::span<const double> logw, std::span<double> w, int t) {
    const double max = *std::max_element(logw.begin(), logw.end());
    if (max == kNegInf) throw WeightCollapseError(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < logw.size(); ++i) {
        w[i] = std::exp(logw[i] - max);
        sum += w[i];
    }
    for (auto& v : w) v /= sum;
}

// Order along the Hilbert curve of the psi-mapped states; plain scalar sort
// for d=1.
std::vector<std::size_t> state_order(std::span<const double> states, int d,
                                     const PsiBounds& bounds,
                                     const HilbertResolution& res) {
    const std::size_t n = states.size() / d;
    if (d == 1) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
            return states[a] < states[b];
        });
        return perm;
    }
    std::vector<double> mapped(states.size());
    for (std::size_t i = 0; i < n; ++i)
        psi_logistic(states.subspan(i * d, d), bounds,
                     std::span<double>(mapped.data() + i * d, d));
    return hilbert_sort(mapped, d, res);
}

void apply_permutation(const std::vector<std::size_t>& perm, int d,
                       std::vector<double>& states, std::vector<double>& logw,
                       std::vector<double>& weights) {
    const std::size_t n = perm.size();
    std::vector<double> s(n * d), lw(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(states.begin() + perm[i] * d, d, s.begin() + i * d);
        lw[i] = logw[perm[i]];
        w[i] = weights[perm[i]];
    }
    states.swap(s);
    logw.swap(lw);
    weights.swap(w);
}

std::vector<std::size_t> sort_by_first_coordinate(const PointSet& u) {
    std::vector<std::size_t> tau(u.n);
    std::iota(tau.begin(), tau.end(), std::size_t{0});
    std::stable_sort(tau.begin(), tau.end(),
                     [&](std::size_t a, std::size_t b) { return u(a, 0) < u(b, 0); });
    return tau;
}

PointSet iid_point_set(std::size_t n, std::size_t d, std::uint64_t seed,
                       std::uint64_t stream) {
    PointSet ps;
    ps.n = n;
    ps.d = d;
    ps.values.resize(n * d);
    CounterRng rng(seed, stream);
    for (auto& v : ps.values) v = rng.uniform();
    return ps;
}

}  // namespace

FilterOutput smc_run(const FeynmanKacModel& model, std::size_t n, int t_max,
                     Resampler resampler, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("smc_run: n must be >= 1");
    if (t_max < 0) throw std::invalid_argument("smc_run: horizon must be >= 0");
    const int d = model.dim();
    const int d0 = model.u_dim0();
    const int dv = model.rand_dim();
    const PsiBounds bounds = model.psi_bounds();

    FilterOutput out;
    out.engine = EngineKind::Smc;
    out.d = d;
    out.n = n;
    out.seed = seed;
    out.steps.reserve(t_max + 1);

    std::vector<double> states(n * d), logw(n), weights(n);
    std::vector<double> u0(d0);
    {
        CounterRng rng(seed, /*stream=*/0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < d0; ++j) u0[j] = rng.uniform();
            std::span<double> x(states.data() + i * d, d);
            model.gamma0(u0, x);
            logw[i] = model.log_g0(x);
        }
    }
    double log_z = log_mean_exp(logw, 0);
    normalize(logw, weights, 0);

    auto snapshot = [&](int t) {
        auto perm = state_order(states, d, bounds, HilbertResolution::automatic());
        FilterStep step;
        step.states.resize(n * d);
        step.weights.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(states.begin() + perm[i] * d, d, step.states.begin() + i * d);
            step.weights[i] = weights[perm[i]];
        }
        step.log_z = log_z;
        out.steps.push_back(std::move(step));
        (void)t;
    };
    snapshot(0);

    std::vector<double> prev(n * d), v(dv);
    for (int t = 1; t <= t_max; ++t) {
        std::vector<std::size_t> ancestors;
        const std::uint64_t stream = 2ULL * static_cast<std::uint64_t>(t);
        if (resampler == Resampler::Multinomial) {
            ancestors = inverse_transform_labels(sorted_uniforms(n, seed, stream), weights);
        } else {
            CounterRng rng(seed, stream);
            ancestors = systematic_labels(weights, rng.uniform(), n);
        }
        prev.swap(states);
        CounterRng rng(seed, stream + 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < dv; ++j) v[j] = rng.uniform();
            std::span<const double> xp(prev.data() + ancestors[i] * d, d);
            std::span<double> x(states.data() + i * d, d);
            model.gamma_t(t, xp, v, x);
            logw[i] = model.log_gt(t, xp, x);
        }
        log_z += log_mean_exp(logw, t);
        normalize(logw, weights, t);
        snapshot(t);
    }
    return out;
}

FilterOutput sqmc_run(const FeynmanKacModel& model, std::size_t n, int t_max,
                      const SqmcConfig& config) {
    if (n < 1) throw std::invalid_argument("sqmc_run: n must be >= 1");
    if (t_max < 0) throw std::invalid_argument("sqmc_run: horizon must be >= 0");
    const int d = model.dim();
    const int d0 = model.u_dim0();
    const int dv = model.rand_dim();
    const PsiBounds bounds = model.psi_bounds();
    const std::uint64_t seed = config.scheme.seed;

    auto step_points = [&](int t, std::size_t dim) {
        const std::uint64_t step_seed = hash_combine(mix64(seed), static_cast<std::uint64_t>(t));
        if (config.iid_uniforms) return iid_point_set(n, dim, seed, 16384ULL + t);
        RandomizationScheme scheme{config.scheme.kind, step_seed};
        return sobol_points(n, dim, scheme);
    };

    FilterOutput out;
    out.engine = EngineKind::Sqmc;
    out.d = d;
    out.n = n;
    out.scheme = config.scheme;
    out.seed = seed;
    out.steps.reserve(t_max + 1);

    std::vector<double> states(n * d), logw(n), weights(n);
    {
        const PointSet u = step_points(0, d0);
        for (std::size_t i = 0; i < n; ++i) {
            std::span<double> x(states.data() + i * d, d);
            model.gamma0(u.point(i), x);
            logw[i] = model.log_g0(x);
        }
    }
    double log_z = log_mean_exp(logw, 0);
    normalize(logw, weights, 0);

    // Particle arrays are kept physically sorted along the curve after each
    // step, so the sigma-permuted weight vector is just the stored order.
    auto sort_in_place = [&] {
        auto perm = state_order(states, d, bounds, config.resolution);
        apply_permutation(perm, d, states, logw, weights);
    };
    sort_in_place();

    auto snapshot = [&] {
        FilterStep step;
        step.states = states;
        step.weights = weights;
        step.log_z = log_z;
        out.steps.push_back(std::move(step));
    };
    snapshot();

    std::vector<double> prev(n * d);
    for (int t = 1; t <= t_max; ++t) {
        const PointSet u = step_points(t, 1 + dv);
        const auto tau = sort_by_first_coordinate(u);
        std::vector<double> u_first(n);
        for (std::size_t i = 0; i < n; ++i) u_first[i] = u(tau[i], 0);
        const auto ancestors = inverse_transform_labels(u_first, weights);

        prev.swap(states);
        for (std::size_t i = 0; i < n; ++i) {
            std::span<const double> xp(prev.data() + ancestors[i] * d, d);
            std::span<const double> v(u.values.data() + tau[i] * (1 + dv) + 1, dv);
            std::span<double> x(states.data() + i * d, d);
            model.gamma_t(t, xp, v, x);
            logw[i] = model.log_gt(t, xp, x);
        }
        log_z += log_mean_exp(logw, t);
        normalize(logw, weights, t);
        sort_in_place();
        snapshot();
    }
    return out;
}

std::vector<double> estimate_moment(
    const FilterOutput& output, int t,
    const std::function<std::vector<double>(std::span<const double>)>& phi) {
    const FilterStep& step = output.steps.at(t);
    const int d = output.d;
    std::vector<double> acc;
    for (std::size_t i = 0; i < output.n; ++i) {
        auto v = phi(std::span<const double>(step.states.data() + i * d, d));
        if (acc.empty()) acc.assign(v.size(), 0.0);
        for (std::size_t j = 0; j < v.size(); ++j) acc[j] += step.weights[i] * v[j];
    }
    return acc;
}

double log_evidence(const FilterOutput& output, int t) {
    return output.steps.at(t).log_z;
}

}  // namespace sqmc
