#pragma once

#include "wildseg/harness.hpp"
#include "wildseg/segmentation.hpp"
#include "wildseg/selection.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wildseg::cli {

inline constexpr int kSchemaVersion = 1;

/// Bad flag combinations; the front end exits with status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DetectOptions {
    Method method = Method::Wild;
    Stopping stopping = Stopping::Ssic;
    double C = 1.0;
    std::size_t M = 5000;
    std::uint64_t seed = 0;
    bool augment = true;
    SsicParams ssic;
    std::optional<double> sigma;
    bool refine = false;
};

struct DetectOutput {
    Index length = 0;
    std::vector<Index> change_points;
    std::vector<double> fitted_means;
    std::optional<double> sigma_hat;
    DetectOptions options;
    /// Threshold actually applied (threshold stopping only).
    std::optional<double> zeta;
    std::optional<SsicSelection> selection;
    SolutionPath path;
    std::vector<std::string> warnings;
};

/// Full detection pipeline behind `wildseg detect`. Threshold stopping with
/// an estimated noise scale of zero is refused with InvalidInputError.
DetectOutput run_detect(const TimeSeries &x, const DetectOptions &options);

std::string to_json(const DetectOutput &output);

struct TtmapOptions {
    double zeta_min = 0.0;
    double zeta_max = 5.0;
    std::size_t M = 5000;
    std::uint64_t seed = 0;
    bool augment = true;
};

/// WBS at zeta = 0 followed by time_threshold_map.
std::vector<ThresholdLine> run_ttmap(const TimeSeries &x, const TtmapOptions &options);

/// location,zeta_low,zeta_high
std::string ttmap_csv(const std::vector<ThresholdLine> &lines);

/// Entry point of the `wildseg` executable. Returns the process exit code:
/// 0 success, 1 runtime error, 2 usage error.
int main(int argc, char **argv);

} // namespace wildseg::cli
