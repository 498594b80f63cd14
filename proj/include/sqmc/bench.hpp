#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqmc/fk.hpp"

namespace sqmc::bench {

// A bundled model instantiated on simulated data: the Feynman-Kac object,
// the raw observations (for CSV export), and an exact log-likelihood where
// one exists (linear-Gaussian only).
struct BuiltModel {
    std::unique_ptr<FeynmanKacModel> model;
    std::string name;
    int d = 1;
    int t_max = 0;
    std::vector<std::vector<double>> observations;  // per t
    std::optional<double> exact_loglik;
};

// Known names: toy, msv1, msv2, msv4, neural, lingauss. t_max = -1 picks the
// model's customary horizon. params holds optional key=value overrides,
// keys namespaced per model (e.g. toy.a, lingauss.phi).
BuiltModel build_model(const std::string& name, int t_max, std::uint64_t data_seed,
                       const std::map<std::string, std::string>& params = {});

enum class ReferenceSource { Kalman, HighN, None };

struct ExperimentSpec {
    std::string model = "toy";
    std::map<std::string, std::string> model_params;
    int t_max = -1;
    std::uint64_t data_seed = 42;

    std::string target = "logZ";  // logZ | mean (first state coordinate)
    int target_t = -1;            // -1: the final step

    std::vector<std::string> engines = {"smc", "sqmc"};
    std::vector<std::size_t> n_grid;
    int replicates = 100;
    std::uint64_t seed_base = 1;
    ReferenceSource reference = ReferenceSource::HighN;
    RandomizationKind scheme = RandomizationKind::OwenNested;

    void validate() const;
    // Flat key=value text, one pair per line; '#' starts a comment.
    static ExperimentSpec parse(std::istream& in);
};

struct GainRow {
    std::size_t n = 0;
    std::string engine;
    int replicates = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mse = std::numeric_limits<double>::quiet_NaN();
    double mean_wall_ns = 0.0;
    int failed = 0;
};

struct GainTable {
    std::vector<GainRow> rows;
    bool has_reference = false;
    double reference_value = 0.0;

    // MSE_smc / MSE_sqmc at the given N; requires both engines present.
    double gain(std::size_t n) const;
};

GainTable run_experiment(const ExperimentSpec& spec, int workers = 1);

void write_table_csv(const GainTable& table, std::ostream& out);
GainTable read_table_csv(std::istream& in);

// Log-log polyline chart, one polyline per engine; x is N or mean wall time.
enum class BenchAxis { N, WallTime };
void write_svg(const GainTable& table, BenchAxis x_axis, std::ostream& out);

}  // namespace sqmc::bench
