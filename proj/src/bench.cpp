#include "sqmc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sqmc/models/lingauss.hpp"
#include "sqmc/models/msv.hpp"
#include "sqmc/models/neural.hpp"
#include "sqmc/models/toy.hpp"

namespace sqmc::bench {
namespace {

using Params = std::map<std::string, std::string>;

double get_num(const Params& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : std::stod(it->second);
}

std::uint64_t get_u64(const Params& p, const std::string& key, std::uint64_t fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : std::stoull(it->second);
}

BuiltModel build_toy_instance(int t_max, std::uint64_t data_seed, const Params& p) {
    models::ToyUnivariateParams params;
    params.a = get_num(p, "toy.a", params.a);
    params.b1 = get_num(p, "toy.b1", params.b1);
    params.b2 = get_num(p, "toy.b2", params.b2);
    params.b3 = get_num(p, "toy.b3", params.b3);
    params.b4 = get_num(p, "toy.b4", params.b4);
    params.sigma2 = get_num(p, "toy.sigma2", params.sigma2);
    if (t_max < 0) t_max = 100;
    const std::vector<double> obs = simulate_toy(params, t_max, data_seed);
    BuiltModel out;
    out.name = "toy";
    out.d = 1;
    out.t_max = t_max;
    for (double y : obs) out.observations.push_back({y});
    out.model = build_toy(params, obs);
    return out;
}

BuiltModel build_msv_instance(int d, int t_max, std::uint64_t data_seed,
                              const Params& p) {
    models::MsvParams params = get_num(p, "msv.leverage", 1.0) != 0.0
                                   ? models::MsvParams::defaults(d)
                                   : models::MsvParams::defaults_no_leverage(d);
    params.phi_diag.setConstant(get_num(p, "msv.phi", 0.9));
    params.mu.setConstant(get_num(p, "msv.mu", -9.0));
    params.psi2_diag.setConstant(get_num(p, "msv.psi2", 0.1));
    if (t_max < 0) t_max = 399;
    auto obs = simulate_msv(params, t_max, data_seed);
    BuiltModel out;
    out.name = "msv" + std::to_string(d);
    out.d = d;
    out.t_max = t_max;
    for (const auto& y : obs)
        out.observations.emplace_back(y.data(), y.data() + y.size());
    out.model = build_msv(params, std::move(obs));
    return out;
}

BuiltModel build_neural_instance(int t_max, std::uint64_t data_seed, const Params& p) {
    auto params =
        models::NeuralDecodingParams::defaults(get_u64(p, "neural.param_seed", 7));
    params.delta = get_num(p, "neural.delta", params.delta);
    params.sigma2 = get_num(p, "neural.sigma2", params.sigma2);
    if (t_max < 0) t_max = 23;
    auto obs = simulate_neural(params, t_max, data_seed);
    BuiltModel out;
    out.name = "neural";
    out.d = 4;
    out.t_max = t_max;
    for (const auto& y : obs)
        out.observations.emplace_back(y.data(), y.data() + y.size());
    out.model = build_neural(params, std::move(obs));
    return out;
}

BuiltModel build_lingauss_instance(int t_max, std::uint64_t data_seed,
                                   const Params& p) {
    const double a = get_num(p, "lingauss.phi", 0.9);
    const double q = get_num(p, "lingauss.q", 1.0);
    const double r = get_num(p, "lingauss.r", 1.0);
    auto params = models::LinearGaussianParams::scalar(
        a, q, 1.0, r, 0.0, std::abs(a) < 1.0 ? q / (1.0 - a * a) : 1.0);
    if (t_max < 0) t_max = 20;
    auto obs = simulate_lingauss(params, t_max, data_seed);
    BuiltModel out;
    out.name = "lingauss";
    out.d = 1;
    out.t_max = t_max;
    for (const auto& y : obs)
        out.observations.emplace_back(y.data(), y.data() + y.size());
    out.exact_loglik = models::kalman_suite(params, obs).loglik;
    out.model = build_lingauss(params, std::move(obs));
    return out;
}

struct JobResult {
    double value = 0.0;
    double wall_ns = 0.0;
    bool ok = false;
};

double evaluate_target(const FilterOutput& out, const std::string& target, int t) {
    if (target == "logZ") return out.steps.at(t).log_z;
    if (target == "mean") {
        auto v = estimate_moment(out, t, [](std::span<const double> x) {
            return std::vector<double>{x[0]};
        });
        return v[0];
    }
    throw std::invalid_argument("unknown bench target: " + target);
}

JobResult run_one(const BuiltModel& built, const ExperimentSpec& spec,
                  const std::string& engine, std::size_t n, std::uint64_t seed) {
    JobResult r;
    try {
        const auto start = std::chrono::steady_clock::now();
        FilterOutput out;
        if (engine == "smc") {
            out = smc_run(*built.model, n, built.t_max, Resampler::Systematic, seed);
        } else if (engine == "sqmc") {
            SqmcConfig config;
            config.scheme = RandomizationScheme{spec.scheme, seed};
            out = sqmc_run(*built.model, n, built.t_max, config);
        } else {
            throw std::invalid_argument("unknown engine: " + engine);
        }
        const auto stop = std::chrono::steady_clock::now();
        const int t = spec.target_t < 0 ? built.t_max : spec.target_t;
        r.value = evaluate_target(out, spec.target, t);
        r.wall_ns = static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
        r.ok = std::isfinite(r.value);
    } catch (const std::exception&) {
        r.ok = false;
    }
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

}  // namespace

BuiltModel build_model(const std::string& name, int t_max, std::uint64_t data_seed,
                       const std::map<std::string, std::string>& params) {
    if (name == "toy") return build_toy_instance(t_max, data_seed, params);
    if (name == "msv1") return build_msv_instance(1, t_max, data_seed, params);
    if (name == "msv2") return build_msv_instance(2, t_max, data_seed, params);
    if (name == "msv4") return build_msv_instance(4, t_max, data_seed, params);
    if (name == "neural") return build_neural_instance(t_max, data_seed, params);
    if (name == "lingauss") return build_lingauss_instance(t_max, data_seed, params);
    throw std::invalid_argument("unknown model: " + name);
}

void ExperimentSpec::validate() const {
    if (replicates < 2) throw std::invalid_argument("experiment: replicates must be >= 2");
    if (n_grid.empty()) throw std::invalid_argument("experiment: n_grid is empty");
    if (engines.empty()) throw std::invalid_argument("experiment: engines is empty");
    if (target != "logZ" && target != "mean")
        throw std::invalid_argument("experiment: unknown target " + target);
    for (const auto& engine : engines)
        if (engine != "smc" && engine != "sqmc")
            throw std::invalid_argument("experiment: unknown engine " + engine);
}

ExperimentSpec ExperimentSpec::parse(std::istream& in) {
    ExperimentSpec spec;
    spec.n_grid.clear();
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
        if (key.empty() || value.empty()) continue;
        if (key == "model") {
            spec.model = value;
        } else if (key == "t") {
            spec.t_max = std::stoi(value);
        } else if (key == "data_seed") {
            spec.data_seed = std::stoull(value);
        } else if (key == "target") {
            spec.target = value;
        } else if (key == "target_t") {
            spec.target_t = std::stoi(value);
        } else if (key == "engines") {
            spec.engines = split(value, ',');
        } else if (key == "n_grid") {
            for (const auto& tok : split(value, ','))
                spec.n_grid.push_back(std::stoull(tok));
        } else if (key == "replicates") {
            spec.replicates = std::stoi(value);
        } else if (key == "seed_base") {
            spec.seed_base = std::stoull(value);
        } else if (key == "reference") {
            if (value == "kalman") spec.reference = ReferenceSource::Kalman;
            else if (value == "high-n") spec.reference = ReferenceSource::HighN;
            else if (value == "none") spec.reference = ReferenceSource::None;
            else throw std::invalid_argument("unknown reference source: " + value);
        } else if (key == "scheme") {
            if (value == "none") spec.scheme = RandomizationKind::None;
            else if (value == "shift") spec.scheme = RandomizationKind::DigitalShift;
            else if (value == "owen") spec.scheme = RandomizationKind::OwenNested;
            else throw std::invalid_argument("unknown scheme: " + value);
        } else if (key.find('.') != std::string::npos) {
            spec.model_params[key] = value;  // namespaced model overrides
        } else {
            throw std::invalid_argument("unknown experiment key: " + key);
        }
    }
    if (spec.n_grid.empty()) spec.n_grid = {64, 256, 1024};
    return spec;
}

double GainTable::gain(std::size_t n) const {
    double smc = -1.0, sqmc = -1.0;
    for (const auto& row : rows) {
        if (row.n != n) continue;
        if (row.engine == "smc") smc = row.mse;
        if (row.engine == "sqmc") sqmc = row.mse;
    }
    if (smc < 0.0 || sqmc <= 0.0)
        throw std::invalid_argument("gain: both engines with MSE required at this N");
    return smc / sqmc;
}

GainTable run_experiment(const ExperimentSpec& spec, int workers) {
    spec.validate();
    const BuiltModel built =
        build_model(spec.model, spec.t_max, spec.data_seed, spec.model_params);

    GainTable table;
    if (spec.reference == ReferenceSource::Kalman) {
        if (!built.exact_loglik || spec.target != "logZ" ||
            (spec.target_t >= 0 && spec.target_t != built.t_max))
            throw std::invalid_argument(
                "experiment: kalman reference needs the lingauss model and the "
                "final logZ target");
        table.has_reference = true;
        table.reference_value = *built.exact_loglik;
    } else if (spec.reference == ReferenceSource::HighN) {
        // Mean of 20 filter runs at 8x the largest grid N.
        const std::size_t n_ref =
            8 * *std::max_element(spec.n_grid.begin(), spec.n_grid.end());
        double acc = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            SqmcConfig config;
            config.scheme =
                RandomizationScheme{spec.scheme, spec.seed_base + 1000003ULL + rep};
            FilterOutput out = sqmc_run(*built.model, n_ref, built.t_max, config);
            const int t = spec.target_t < 0 ? built.t_max : spec.target_t;
            acc += evaluate_target(out, spec.target, t);
        }
        table.has_reference = true;
        table.reference_value = acc / 20.0;
    }

    struct Job {
        std::size_t engine_idx, n_idx;
        int replicate;
    };
    std::vector<Job> jobs;
    for (std::size_t e = 0; e < spec.engines.size(); ++e)
        for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni)
            for (int r = 0; r < spec.replicates; ++r) jobs.push_back({e, ni, r});

    std::vector<JobResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            results[i] = run_one(built, spec, spec.engines[job.engine_idx],
                                 spec.n_grid[job.n_idx],
                                 spec.seed_base + static_cast<std::uint64_t>(job.replicate));
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t e = 0; e < spec.engines.size(); ++e)
        for (std::size_t ni = 0; ni < spec.n_grid.size(); ++ni) {
            GainRow row;
            row.engine = spec.engines[e];
            row.n = spec.n_grid[ni];
            double sum = 0.0, wall = 0.0;
            std::vector<double> values;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].engine_idx != e || jobs[i].n_idx != ni) continue;
                if (!results[i].ok) {
                    ++row.failed;
                    continue;
                }
                values.push_back(results[i].value);
                sum += results[i].value;
                wall += results[i].wall_ns;
            }
            row.replicates = static_cast<int>(values.size());
            if (!values.empty()) {
                row.mean = sum / values.size();
                row.mean_wall_ns = wall / values.size();
                double var = 0.0, mse = 0.0;
                for (double v : values) {
                    var += (v - row.mean) * (v - row.mean);
                    mse += (v - table.reference_value) * (v - table.reference_value);
                }
                row.variance = values.size() > 1 ? var / (values.size() - 1) : 0.0;
                if (table.has_reference) row.mse = mse / values.size();
            }
            table.rows.push_back(std::move(row));
        }
    return table;
}

void write_table_csv(const GainTable& table, std::ostream& out) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "# reference=" << (table.has_reference ? num(table.reference_value) : "none")
        << "\n";
    out << "n,engine,replicates,mean,variance,mse,mean_wall_ns,failed\n";
    for (const auto& row : table.rows)
        out << row.n << ',' << row.engine << ',' << row.replicates << ','
            << num(row.mean) << ',' << num(row.variance) << ',' << num(row.mse) << ','
            << num(row.mean_wall_ns) << ',' << row.failed << "\n";
}

GainTable read_table_csv(std::istream& in) {
    GainTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# reference=", 0) == 0) {
            const std::string v = line.substr(12);
            if (v != "none") {
                table.has_reference = true;
                table.reference_value = std::stod(v);
            }
            continue;
        }
        if (line.rfind("n,engine", 0) == 0) continue;
        const auto f = split(line, ',');
        if (f.size() != 8) throw std::invalid_argument("malformed table row: " + line);
        GainRow row;
        row.n = std::stoull(f[0]);
        row.engine = f[1];
        row.replicates = std::stoi(f[2]);
        row.mean = std::stod(f[3]);
        row.variance = std::stod(f[4]);
        row.mse = std::stod(f[5]);
        row.mean_wall_ns = std::stod(f[6]);
        row.failed = std::stoi(f[7]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_svg(const GainTable& table, BenchAxis x_axis, std::ostream& out) {
    if (table.rows.empty()) throw std::invalid_argument("write_svg: empty table");
    const double width = 640, height = 480, ml = 70, mr = 20, mt = 20, mb = 50;

    struct Pt {
        double x, y;
    };
    std::map<std::string, std::vector<Pt>> series;
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& row : table.rows) {
        const double xv = x_axis == BenchAxis::N ? static_cast<double>(row.n)
                                                 : row.mean_wall_ns;
        const double yv = table.has_reference ? row.mse : row.variance;
        if (!(xv > 0.0) || !(yv > 0.0) || !std::isfinite(yv)) continue;
        const double lx = std::log10(xv), ly = std::log10(yv);
        series[row.engine].push_back({lx, ly});
        x_lo = std::min(x_lo, lx);
        x_hi = std::max(x_hi, lx);
        y_lo = std::min(y_lo, ly);
        y_hi = std::max(y_hi, ly);
    }
    if (series.empty()) throw std::invalid_argument("write_svg: no plottable rows");
    if (x_hi - x_lo < 1e-9) x_hi = x_lo + 1.0;
    if (y_hi - y_lo < 1e-9) y_hi = y_lo + 1.0;
    auto sx = [&](double lx) {
        return ml + (lx - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    auto sy = [&](double ly) {
        return height - mb - (ly - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
        << width - mr << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (width / 2) << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">log10 "
        << (x_axis == BenchAxis::N ? "N" : "wall-clock ns") << "</text>\n";
    out << "<text x=\"16\" y=\"" << (height / 2)
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (height / 2) << ")\">log10 " << (table.has_reference ? "MSE" : "variance")
        << "</text>\n";

    int ci = 0;
    for (auto& [engine, pts] : series) {
        std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
        const char* color = colors[ci % 4];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& pt : pts) out << sx(pt.x) << ',' << sy(pt.y) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - mr - 100 << "\" y=\"" << mt + 16 + 16 * ci
            << "\" font-size=\"13\" fill=\"" << color << "\">" << engine << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace sqmc::bench
