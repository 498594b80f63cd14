#include "sqmc/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sqmc/resample.hpp"
#include "sqmc/rng.hpp"

namespace sqmc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// z_t = (sum_{s<t} phi_tilde(x_s), x_t): the additive-function chain of the
// base model, with the running sum as coordinate 0.
class AdditiveChain final : public FeynmanKacModel {
public:
    AdditiveChain(const FeynmanKacModel& base,
                  std::function<double(std::span<const double>)> phi,
                  double sum_lo, double sum_hi)
        : base_(base), phi_(std::move(phi)) {
        const PsiBounds inner = base_.psi_bounds();
        std::vector<double> lo{sum_lo}, hi{sum_hi};
        lo.insert(lo.end(), inner.lower.begin(), inner.lower.end());
        hi.insert(hi.end(), inner.upper.begin(), inner.upper.end());
        bounds_ = PsiBounds(std::move(lo), std::move(hi));
    }

    int dim() const override { return base_.dim() + 1; }
    int u_dim0() const override { return base_.u_dim0(); }
    int rand_dim() const override { return base_.rand_dim(); }

    void gamma0(std::span<const double> u, std::span<double> z) const override {
        z[0] = 0.0;
        base_.gamma0(u, z.subspan(1));
    }

    void gamma_t(int t, std::span<const double> z_prev, std::span<const double> v,
                 std::span<double> z) const override {
        z[0] = z_prev[0] + phi_(z_prev.subspan(1));
        base_.gamma_t(t, z_prev.subspan(1), v, z.subspan(1));
    }

    double log_g0(std::span<const double> z) const override {
        return base_.log_g0(z.subspan(1));
    }

    double log_gt(int t, std::span<const double> z_prev,
                  std::span<const double> z) const override {
        return base_.log_gt(t, z_prev.subspan(1), z.subspan(1));
    }

    PsiBounds psi_bounds() const override { return bounds_; }

private:
    const FeynmanKacModel& base_;
    std::function<double(std::span<const double>)> phi_;
    PsiBounds bounds_;
};

std::vector<double> backward_point(std::size_t n_b, int t_max,
                                   const RandomizationScheme& scheme,
                                   bool iid_uniforms, std::vector<std::size_t>& tau) {
    const std::size_t dim = static_cast<std::size_t>(t_max) + 1;
    std::vector<double> u(n_b * dim);
    if (iid_uniforms || dim > 32) {
        CounterRng rng(scheme.seed, /*stream=*/0xbac);
        for (auto& v : u) v = rng.uniform();
    } else {
        u = sobol_points(n_b, dim, scheme).values;
    }
    tau.resize(n_b);
    std::iota(tau.begin(), tau.end(), std::size_t{0});
    std::stable_sort(tau.begin(), tau.end(), [&](std::size_t a, std::size_t b) {
        return u[a * dim] < u[b * dim];
    });
    return u;
}

}  // namespace

std::vector<double> smoothed_means(const TrajectorySet& trajectories) {
    const int d = trajectories.d;
    std::vector<double> out((trajectories.t_max + 1) * d, 0.0);
    for (std::size_t n = 0; n < trajectories.n_b; ++n)
        for (int t = 0; t <= trajectories.t_max; ++t) {
            auto x = trajectories.state(n, t);
            for (int j = 0; j < d; ++j) out[t * d + j] += x[j];
        }
    for (auto& v : out) v /= static_cast<double>(trajectories.n_b);
    return out;
}

std::vector<double> forward_smoothing_additive(
    const FeynmanKacModel& model,
    const std::function<double(std::span<const double>)>& phi_tilde,
    std::size_t n, int t_max, const SqmcConfig& config) {
    // Pilot pass with loose sum bounds to learn the running-sum range; the
    // bounds only shape the Hilbert sort, so a crude pilot is harmless.
    double lo = -1.0, hi = 1.0;
    {
        AdditiveChain crude(model, phi_tilde, -1.0, 1.0);
        const std::size_t pilot_n = std::min<std::size_t>(n, 256);
        FilterOutput pilot = smc_run(crude, pilot_n, t_max,
                                     Resampler::Systematic, /*seed=*/0xf0a);
        const int dz = crude.dim();
        for (const FilterStep& step : pilot.steps)
            for (std::size_t i = 0; i < pilot_n; ++i) {
                lo = std::min(lo, step.states[i * dz]);
                hi = std::max(hi, step.states[i * dz]);
            }
        const double margin = 0.1 * (hi - lo);
        lo -= margin;
        hi += margin;
    }

    AdditiveChain chain(model, phi_tilde, lo, hi);
    FilterOutput out = sqmc_run(chain, n, t_max, config);
    std::vector<double> estimates(t_max + 1);
    for (int t = 0; t <= t_max; ++t) {
        auto v = estimate_moment(out, t, [&](std::span<const double> z) {
            return std::vector<double>{z[0] + phi_tilde(z.subspan(1))};
        });
        estimates[t] = v[0];
    }
    return estimates;
}

WeightedPaths forward_smoothing_paths(const FeynmanKacModel& model, std::size_t n,
                                      int t_max, const SqmcConfig& config) {
    const int d = model.dim();
    if ((t_max + 1) * d > 64)
        throw std::invalid_argument(
            "forward_smoothing_paths: path dimension exceeds the 64-bit pack; "
            "use the additive variant");
    const int d0 = model.u_dim0();
    const int dv = model.rand_dim();
    const PsiBounds base_bounds = model.psi_bounds();
    const std::uint64_t seed = config.scheme.seed;

    auto step_points = [&](int t, std::size_t dim) {
        const std::uint64_t step_seed =
            hash_combine(mix64(seed), static_cast<std::uint64_t>(t));
        if (config.iid_uniforms) {
            PointSet ps;
            ps.n = n;
            ps.d = dim;
            ps.values.resize(n * dim);
            CounterRng rng(seed, 16384ULL + t);
            for (auto& v : ps.values) v = rng.uniform();
            return ps;
        }
        RandomizationScheme scheme{config.scheme.kind, step_seed};
        return sobol_points(n, dim, scheme);
    };

    std::vector<double> paths(n * d);  // n * (t+1) * d, grown per step
    std::vector<double> logw(n), weights(n);
    {
        const PointSet u = step_points(0, d0);
        for (std::size_t i = 0; i < n; ++i) {
            std::span<double> x(paths.data() + i * d, d);
            model.gamma0(u.point(i), x);
            logw[i] = model.log_g0(x);
        }
    }
    auto normalize = [&](int t) {
        const double max = *std::max_element(logw.begin(), logw.end());
        if (max == kNegInf) throw WeightCollapseError(t);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = std::exp(logw[i] - max);
            sum += weights[i];
        }
        for (auto& w : weights) w /= sum;
        return max + std::log(sum / static_cast<double>(n));
    };
    double log_z = normalize(0);

    auto sort_paths = [&](int t) {
        const int dz = (t + 1) * d;
        std::vector<double> mapped(n * dz);
        std::vector<double> seg(d), psi(d);
        for (std::size_t i = 0; i < n; ++i)
            for (int s = 0; s <= t; ++s) {
                std::copy_n(paths.begin() + (i * (t + 1) + s) * d, d, seg.begin());
                psi_logistic(seg, base_bounds, psi);
                std::copy_n(psi.begin(), d, mapped.begin() + i * dz + s * d);
            }
        auto perm = (dz == 1)
                        ? [&] {
                              std::vector<std::size_t> p(n);
                              std::iota(p.begin(), p.end(), std::size_t{0});
                              std::stable_sort(p.begin(), p.end(),
                                               [&](std::size_t a, std::size_t b) {
                                                   return mapped[a] < mapped[b];
                                               });
                              return p;
                          }()
                        : hilbert_sort(mapped, dz,
                                       HilbertResolution::fixed(
                                           HilbertResolution::max_bits_per_axis(dz)));
        std::vector<double> ps(n * (t + 1) * d), lw(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::copy_n(paths.begin() + perm[i] * (t + 1) * d, (t + 1) * d,
                        ps.begin() + i * (t + 1) * d);
            lw[i] = logw[perm[i]];
            w[i] = weights[perm[i]];
        }
        paths.swap(ps);
        logw.swap(lw);
        weights.swap(w);
    };
    sort_paths(0);

    for (int t = 1; t <= t_max; ++t) {
        const PointSet u = step_points(t, 1 + dv);
        std::vector<std::size_t> tau(n);
        std::iota(tau.begin(), tau.end(), std::size_t{0});
        std::stable_sort(tau.begin(), tau.end(),
                         [&](std::size_t a, std::size_t b) { return u(a, 0) < u(b, 0); });
        std::vector<double> u_first(n);
        for (std::size_t i = 0; i < n; ++i) u_first[i] = u(tau[i], 0);
        const auto ancestors = inverse_transform_labels(u_first, weights);

        std::vector<double> next(n * (t + 1) * d);
        for (std::size_t i = 0; i < n; ++i) {
            const double* src = paths.data() + ancestors[i] * t * d;
            double* dst = next.data() + i * (t + 1) * d;
            std::copy_n(src, t * d, dst);
            std::span<const double> xp(src + (t - 1) * d, d);
            std::span<const double> v(u.values.data() + tau[i] * (1 + dv) + 1, dv);
            std::span<double> x(dst + t * d, d);
            model.gamma_t(t, xp, v, x);
            logw[i] = model.log_gt(t, xp, x);
        }
        paths.swap(next);
        log_z += normalize(t);
        sort_paths(t);
    }

    WeightedPaths out;
    out.trajectories.n_b = n;
    out.trajectories.d = d;
    out.trajectories.t_max = t_max;
    out.trajectories.states = std::move(paths);
    out.weights = std::move(weights);
    out.log_z = log_z;
    return out;
}

TrajectorySet backward_pass(const FilterOutput& output, const FeynmanKacModel& model,
                            std::size_t n_b, const RandomizationScheme& scheme,
                            bool iid_uniforms) {
    if (!model.has_transition_density())
        throw std::invalid_argument(
            "backward_pass: model declares no transition density");
    if (n_b < 1) throw std::invalid_argument("backward_pass: n_b must be >= 1");
    const int t_max = output.horizon();
    const int d = output.d;
    const std::size_t n = output.n;
    const std::size_t dim = static_cast<std::size_t>(t_max) + 1;

    std::vector<std::size_t> tau;
    const std::vector<double> u = backward_point(n_b, t_max, scheme, iid_uniforms, tau);

    TrajectorySet traj;
    traj.n_b = n_b;
    traj.d = d;
    traj.t_max = t_max;
    traj.states.resize(n_b * dim * d);

    // Final states: inverse transform of the sorted time-T weights against
    // the sorted first coordinate; trajectory n follows point tau(n).
    {
        std::vector<double> u0(n_b);
        for (std::size_t i = 0; i < n_b; ++i) u0[i] = u[tau[i] * dim];
        const auto labels = inverse_transform_labels(u0, output.steps.at(t_max).weights);
        for (std::size_t i = 0; i < n_b; ++i)
            std::copy_n(output.steps[t_max].states.begin() + labels[i] * d, d,
                        traj.states.begin() + (i * dim + t_max) * d);
    }

    std::vector<double> cum(n), logw(n);
    for (int t = t_max - 1; t >= 0; --t) {
        const FilterStep& step = output.steps.at(t);
        for (std::size_t i = 0; i < n_b; ++i) {
            std::span<const double> x_next(
                traj.states.data() + (i * dim + t + 1) * d, static_cast<std::size_t>(d));
            double max = kNegInf;
            for (std::size_t m = 0; m < n; ++m) {
                std::span<const double> xm(step.states.data() + m * d,
                                           static_cast<std::size_t>(d));
                logw[m] = step.weights[m] <= 0.0
                              ? kNegInf
                              : std::log(step.weights[m]) +
                                    model.log_transition_density(t + 1, xm, x_next);
                max = std::max(max, logw[m]);
            }
            if (max == kNegInf) throw WeightCollapseError(t);
            double total = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                total += std::exp(logw[m] - max);
                cum[m] = total;
            }
            const double target = u[tau[i] * dim + (t_max - t)] * total;
            const auto it = std::lower_bound(cum.begin(), cum.end(), target);
            const std::size_t pick =
                std::min<std::size_t>(it - cum.begin(), n - 1);
            std::copy_n(step.states.begin() + pick * d, d,
                        traj.states.begin() + (i * dim + t) * d);
        }
    }
    return traj;
}

}  // namespace sqmc
