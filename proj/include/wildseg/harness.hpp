#pragma once

#include "wildseg/segmentation.hpp"
#include "wildseg/selection.hpp"
#include "wildseg/signals.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wildseg {

/// T^-1 sum (f_t - fhat_t)^2. Throws InvalidInputError on length mismatch.
double mse(std::span<const double> truth, std::span<const double> fitted);

enum class Stopping { Threshold, Ssic, FixedZeta };

/// A detection method as named on the command line:
///   wbs-ssic, bs-ssic        sSIC over the solution path
///   wbs-c1, bs-c1.3, ...     zeta = C * sigma_hat * sqrt(2 ln T)
///   wbs-z0.2, ...            fixed zeta
/// "wbs" variants use augmentation.
struct MethodSpec {
    std::string id;
    Method method = Method::Wild;
    Stopping stopping = Stopping::Ssic;
    double C = 1.0;
    double zeta = 0.0;
    SsicParams ssic;
};

MethodSpec parse_method_spec(std::string_view text);

/// A benchmark model: one of the standard test signals (optionally with a
/// noise override, "teeth10@0"), or a random signal described as
/// "random:navg=4:sjmp2=3:T=500:sigma=1".
struct ModelSpec {
    std::string id;
    std::string signal_name;
    std::optional<double> noise_sigma;
    std::optional<SimulationConfig> random;
};

ModelSpec parse_model_spec(std::string_view text);

struct BenchmarkConfig {
    std::vector<ModelSpec> models;
    std::vector<MethodSpec> methods;
    std::size_t replications = 100;
    std::uint64_t base_seed = 0;
    std::size_t M = 5000;
};

struct SummaryStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Bins of N_hat - N: <=-3, -2, -1, 0, 1, 2, >=3.
using ErrorHistogram = std::array<std::size_t, 7>;

struct CellReport {
    std::string model;
    std::string method;
    ErrorHistogram histogram{};
    SummaryStats summary;
    double mean_mse = 0.0;
    /// N_hat - N per completed replication, in replication order.
    std::vector<std::int64_t> errors;
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::vector<std::string> failures;
};

struct BenchmarkReport {
    std::uint64_t base_seed = 0;
    std::size_t replications = 0;
    std::size_t M = 0;
    /// All methods of a replication see the same noise draw; interval draws
    /// are independent per method.
    bool shared_noise = true;
    /// Ordered by model, then method, as configured.
    std::vector<CellReport> cells;
};

/// Stable 64-bit seed for a (base, model, replication[, method]) cell.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view model, std::uint64_t replication,
                          std::string_view method = {});

std::size_t histogram_bin(std::int64_t error) noexcept;

/// R-style summary (type 7 quantiles) of a nonempty sample.
SummaryStats summarize(std::vector<double> values);

/// Runs every (model, method) cell. Replications execute in parallel when
/// OpenMP is available; the report does not depend on the thread count.
BenchmarkReport run_benchmark(const BenchmarkConfig &config);

/// model,method,bin_le_m3,bin_m2,bin_m1,bin_0,bin_p1,bin_p2,bin_ge3,mean_mse
std::string distribution_csv(const BenchmarkReport &report);
/// model,method,min,q1,median,mean,q3,max
std::string summary_csv(const BenchmarkReport &report);
std::string report_json(const BenchmarkReport &report);

} // namespace wildseg
