// Command-line front end: point sets and discrepancy, data simulation,
// filtering, smoothing, PMMH, and the benchmark harness.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "sqmc/bench.hpp"
#include "sqmc/fk.hpp"
#include "sqmc/lowdisc.hpp"
#include "sqmc/pmmh.hpp"
#include "sqmc/smoothing.hpp"

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

sqmc::RandomizationScheme parse_scheme(const std::string& kind, std::uint64_t seed) {
    if (kind == "none") return sqmc::RandomizationScheme::none();
    if (kind == "shift") return sqmc::RandomizationScheme::digital_shift(seed);
    if (kind == "owen") return sqmc::RandomizationScheme::owen(seed);
    throw CLI::ValidationError("--scheme", "expected none|shift|owen");
}

std::map<std::string, std::string> read_params_file(const std::string& path) {
    std::map<std::string, std::string> params;
    if (path.empty()) return params;
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--params", "cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty() && !value.empty()) params[key] = value;
    }
    return params;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CLI::ValidationError("--out", "cannot open " + path);
    return out;
}

struct CommonModelArgs {
    std::string model = "toy";
    int t = -1;
    std::uint64_t data_seed = 42;
    std::string params_file;

    sqmc::bench::BuiltModel build() const {
        return sqmc::bench::build_model(model, t, data_seed,
                                        read_params_file(params_file));
    }
    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model, "toy|msv1|msv2|msv4|neural|lingauss");
        cmd->add_option("--t", t, "horizon (default: the model's customary T)");
        cmd->add_option("--data-seed", data_seed, "seed for the simulated dataset");
        cmd->add_option("--params", params_file, "key=value parameter overrides");
    }
};

void write_filter_csv(const sqmc::FilterOutput& out, const std::string& moments,
                      double step_wall_ns, std::ostream& os) {
    os << "t,logZ_t";
    if (moments == "mean")
        for (int j = 0; j < out.d; ++j) os << ",mean_" << j;
    os << ",wall_ns_per_step\n";
    for (int t = 0; t <= out.horizon(); ++t) {
        os << t << ',' << num(out.steps[t].log_z);
        if (moments == "mean") {
            auto m = sqmc::estimate_moment(out, t, [&](std::span<const double> x) {
                return std::vector<double>(x.begin(), x.end());
            });
            for (double v : m) os << ',' << num(v);
        }
        os << ',' << num(step_wall_ns) << "\n";
    }
}

sqmc::FilterOutput run_filter(const sqmc::bench::BuiltModel& built,
                              const std::string& engine, std::size_t n,
                              const sqmc::RandomizationScheme& scheme,
                              std::uint64_t seed) {
    if (engine == "smc")
        return sqmc::smc_run(*built.model, n, built.t_max,
                             sqmc::Resampler::Systematic, seed);
    if (engine == "sqmc") {
        sqmc::SqmcConfig config;
        config.scheme = sqmc::RandomizationScheme{scheme.kind, seed};
        return sqmc::sqmc_run(*built.model, n, built.t_max, config);
    }
    throw CLI::ValidationError("--engine", "expected smc|sqmc");
}

Eigen::MatrixXd read_sigma(const std::string& path, int dim) {
    if (path.empty())
        return 0.011 * 0.011 * Eigen::MatrixXd::Identity(dim, dim);
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--sigma", "cannot open " + path);
    Eigen::MatrixXd sigma(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (!(in >> sigma(i, j)))
                throw CLI::ValidationError("--sigma", "expected a " +
                                                          std::to_string(dim) + "x" +
                                                          std::to_string(dim) +
                                                          " whitespace matrix");
    return sigma;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential quasi-Monte Carlo toolkit"};
    app.require_subcommand(1);

    // ---- discrepancy ----
    auto* disc = app.add_subcommand("discrepancy", "star discrepancy of a Sobol' set");
    std::size_t disc_n = 256, disc_dim = 2;
    std::string disc_scheme = "none", disc_mode = "grid-exact";
    std::uint64_t disc_seed = 0;
    disc->add_option("--n", disc_n)->required();
    disc->add_option("--dim", disc_dim)->required();
    disc->add_option("--scheme", disc_scheme, "none|shift|owen");
    disc->add_option("--seed", disc_seed);
    disc->add_option("--mode", disc_mode, "exact-1d|grid-exact|sample-estimate");
    disc->callback([&] {
        const auto ps =
            sqmc::sobol_points(disc_n, disc_dim, parse_scheme(disc_scheme, disc_seed));
        sqmc::DiscrepancyMode mode;
        if (disc_mode == "exact-1d") mode = sqmc::DiscrepancyMode::Exact1d;
        else if (disc_mode == "grid-exact") mode = sqmc::DiscrepancyMode::GridExact;
        else if (disc_mode == "sample-estimate") mode = sqmc::DiscrepancyMode::SampleEstimate;
        else throw CLI::ValidationError("--mode", "unknown mode " + disc_mode);
        std::cout << num(sqmc::star_discrepancy(ps, mode)) << "\n";
    });

    // ---- points ----
    auto* points = app.add_subcommand("points", "export a point set as CSV");
    std::size_t pts_n = 16, pts_dim = 2;
    std::string pts_scheme = "none", pts_out = "points.csv";
    std::uint64_t pts_seed = 0;
    points->add_option("--n", pts_n)->required();
    points->add_option("--dim", pts_dim)->required();
    points->add_option("--scheme", pts_scheme, "none|shift|owen");
    points->add_option("--seed", pts_seed);
    points->add_option("--out", pts_out)->required();
    points->callback([&] {
        const auto ps =
            sqmc::sobol_points(pts_n, pts_dim, parse_scheme(pts_scheme, pts_seed));
        auto out = open_out(pts_out);
        for (std::size_t i = 0; i < ps.n; ++i) {
            for (std::size_t j = 0; j < ps.d; ++j)
                out << (j ? "," : "") << num(ps(i, j));
            out << "\n";
        }
    });

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "simulate observations to CSV");
    CommonModelArgs sim_args;
    std::string sim_out = "obs.csv";
    std::uint64_t sim_seed = 42;
    sim->add_option("--model", sim_args.model, "toy|msv1|msv2|msv4|neural|lingauss");
    sim->add_option("--t", sim_args.t);
    sim->add_option("--seed", sim_seed, "data seed");
    sim->add_option("--params", sim_args.params_file);
    sim->add_option("--out", sim_out)->required();
    sim->callback([&] {
        sim_args.data_seed = sim_seed;
        const auto built = sim_args.build();
        auto out = open_out(sim_out);
        out << "t";
        for (std::size_t j = 0; j < built.observations.at(0).size(); ++j)
            out << ",y" << j;
        out << "\n";
        for (int t = 0; t <= built.t_max; ++t) {
            out << t;
            for (double y : built.observations[t]) out << ',' << num(y);
            out << "\n";
        }
    });

    // ---- filter ----
    auto* filter = app.add_subcommand("filter", "run a particle filter");
    CommonModelArgs flt_args;
    std::string flt_engine = "sqmc", flt_scheme = "owen", flt_moments = "mean",
                flt_out = "filter.csv";
    std::size_t flt_n = 1024;
    std::uint64_t flt_seed = 1;
    flt_args.attach(filter);
    filter->add_option("--engine", flt_engine, "smc|sqmc");
    filter->add_option("--n", flt_n);
    filter->add_option("--scheme", flt_scheme, "none|shift|owen (sqmc only)");
    filter->add_option("--seed", flt_seed);
    filter->add_option("--moments", flt_moments, "mean|none");
    filter->add_option("--out", flt_out)->required();
    filter->callback([&] {
        const auto built = flt_args.build();
        const auto start = std::chrono::steady_clock::now();
        const auto out = run_filter(built, flt_engine, flt_n,
                                    parse_scheme(flt_scheme, flt_seed), flt_seed);
        const auto stop = std::chrono::steady_clock::now();
        const double per_step =
            static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                    stop - start)
                                    .count()) /
            (built.t_max + 1);
        auto os = open_out(flt_out);
        write_filter_csv(out, flt_moments, per_step, os);
    });

    // ---- loglik ----
    auto* loglik = app.add_subcommand("loglik", "print the log-evidence estimate");
    CommonModelArgs ll_args;
    std::string ll_engine = "sqmc", ll_scheme = "owen";
    std::size_t ll_n = 1024;
    std::uint64_t ll_seed = 1;
    ll_args.attach(loglik);
    loglik->add_option("--engine", ll_engine, "smc|sqmc");
    loglik->add_option("--n", ll_n);
    loglik->add_option("--scheme", ll_scheme);
    loglik->add_option("--seed", ll_seed);
    loglik->callback([&] {
        const auto built = ll_args.build();
        const auto out = run_filter(built, ll_engine, ll_n,
                                    parse_scheme(ll_scheme, ll_seed), ll_seed);
        std::cout << num(out.steps.back().log_z) << "\n";
    });

    // ---- smooth ----
    auto* smooth = app.add_subcommand("smooth", "forward-additive or backward smoothing");
    CommonModelArgs sm_args;
    std::string sm_mode = "backward", sm_scheme = "owen", sm_out = "smooth.csv";
    std::size_t sm_n = 512, sm_nb = 512;
    std::uint64_t sm_seed = 1;
    sm_args.attach(smooth);
    smooth->add_option("--mode", sm_mode, "additive|backward");
    smooth->add_option("--n", sm_n, "filter particles");
    smooth->add_option("--nb", sm_nb, "backward trajectories");
    smooth->add_option("--scheme", sm_scheme);
    smooth->add_option("--seed", sm_seed);
    smooth->add_option("--out", sm_out)->required();
    smooth->callback([&] {
        const auto built = sm_args.build();
        auto os = open_out(sm_out);
        if (sm_mode == "additive") {
            sqmc::SqmcConfig config;
            config.scheme = sqmc::RandomizationScheme{
                parse_scheme(sm_scheme, sm_seed).kind, sm_seed};
            const auto est = sqmc::forward_smoothing_additive(
                *built.model,
                [](std::span<const double> x) { return x[0]; }, sm_n, built.t_max,
                config);
            os << "t,additive_estimate\n";
            for (int t = 0; t <= built.t_max; ++t)
                os << t << ',' << num(est[t]) << "\n";
        } else if (sm_mode == "backward") {
            sqmc::SqmcConfig config;
            config.scheme = sqmc::RandomizationScheme{
                parse_scheme(sm_scheme, sm_seed).kind, sm_seed};
            const auto filt = sqmc::sqmc_run(*built.model, sm_n, built.t_max, config);
            const auto traj = sqmc::backward_pass(
                filt, *built.model, sm_nb,
                sqmc::RandomizationScheme{config.scheme.kind, sm_seed ^ 0xb4c},
                false);
            const auto means = sqmc::smoothed_means(traj);
            os << "t";
            for (int j = 0; j < built.d; ++j) os << ",smoothed_mean_" << j;
            os << "\n";
            for (int t = 0; t <= built.t_max; ++t) {
                os << t;
                for (int j = 0; j < built.d; ++j)
                    os << ',' << num(means[t * built.d + j]);
                os << "\n";
            }
        } else {
            throw CLI::ValidationError("--mode", "expected additive|backward");
        }
    });

    // ---- pmmh ----
    auto* pmmh = app.add_subcommand("pmmh", "particle marginal Metropolis-Hastings");
    std::string pm_family = "msv2", pm_engine = "sqmc", pm_sigma, pm_out = "chain.csv";
    std::size_t pm_n = 100, pm_iters = 1000;
    int pm_t = -1;
    std::uint64_t pm_seed = 1, pm_data_seed = 42;
    pmmh->add_option("--model-family", pm_family, "msv2");
    pmmh->add_option("--engine", pm_engine, "smc|sqmc|exact");
    pmmh->add_option("--n", pm_n, "particles per likelihood estimate");
    pmmh->add_option("--iters", pm_iters);
    pmmh->add_option("--t", pm_t, "horizon of the simulated dataset");
    pmmh->add_option("--data-seed", pm_data_seed);
    pmmh->add_option("--sigma", pm_sigma, "proposal covariance file (default 0.011^2 I)");
    pmmh->add_option("--seed", pm_seed);
    pmmh->add_option("--out", pm_out)->required();
    pmmh->callback([&] {
        if (pm_family != "msv2")
            throw CLI::ValidationError("--model-family", "only msv2 is bundled");
        const auto built = sqmc::bench::build_model("msv2", pm_t, pm_data_seed, {});
        std::vector<Eigen::VectorXd> obs;
        for (const auto& y : built.observations)
            obs.push_back(Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()));
        auto family = sqmc::models::msv2_no_leverage_family(std::move(obs));

        sqmc::PmmhConfig config;
        if (pm_engine == "smc") config.engine = sqmc::PmmhEngine::Smc;
        else if (pm_engine == "sqmc") config.engine = sqmc::PmmhEngine::Sqmc;
        else if (pm_engine == "exact") config.engine = sqmc::PmmhEngine::Exact;
        else throw CLI::ValidationError("--engine", "expected smc|sqmc|exact");
        config.n_particles = pm_n;
        config.t_max = built.t_max;
        config.n_iter = pm_iters;
        config.seed = pm_seed;

        const auto sample = sqmc::pmmh_run(family, sqmc::models::msv2_default_theta(),
                                           read_sigma(pm_sigma, family.dim), config);
        auto os = open_out(pm_out);
        os << "iteration";
        for (int j = 0; j < family.dim; ++j) os << ",theta" << j;
        os << ",loglik,accepted\n";
        for (Eigen::Index i = 0; i < sample.chain.rows(); ++i) {
            os << i;
            for (int j = 0; j < family.dim; ++j) os << ',' << num(sample.chain(i, j));
            os << ',' << num(sample.loglik[i]) << ','
               << static_cast<int>(sample.accepted[i]) << "\n";
        }
        std::cout << "acceptance_rate " << num(sqmc::acceptance_rate(sample)) << "\n";
        for (int j = 0; j < family.dim; ++j) {
            std::string ess = "n/a";
            try {
                ess = num(sqmc::mcmc_ess(sample, j));
            } catch (const std::exception&) {
            }
            std::cout << "ess_theta" << j << ' ' << ess << "\n";
        }
    });

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "gain-factor experiment harness");
    std::string bench_spec, bench_dir = ".";
    int bench_workers = 1;
    bench->add_option("--spec", bench_spec)->required();
    bench->add_option("--out-dir", bench_dir);
    bench->add_option("--workers", bench_workers);
    bench->callback([&] {
        std::ifstream in(bench_spec);
        if (!in) throw CLI::ValidationError("--spec", "cannot open " + bench_spec);
        const auto spec = sqmc::bench::ExperimentSpec::parse(in);
        const auto table = sqmc::bench::run_experiment(spec, bench_workers);
        std::filesystem::create_directories(bench_dir);
        const auto dir = std::filesystem::path(bench_dir);
        {
            std::ofstream os(dir / "table.csv");
            sqmc::bench::write_table_csv(table, os);
        }
        {
            std::ofstream os(dir / "plot_mse_vs_n.svg");
            sqmc::bench::write_svg(table, sqmc::bench::BenchAxis::N, os);
        }
        {
            std::ofstream os(dir / "plot_mse_vs_time.svg");
            sqmc::bench::write_svg(table, sqmc::bench::BenchAxis::WallTime, os);
        }
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
