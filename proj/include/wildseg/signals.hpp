#pragma once

#include "wildseg/core_stats.hpp"
#include "wildseg/piecewise.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wildseg {

/// A benchmark signal together with the noise level it is studied at.
struct TestSignal {
    std::string name;
    PiecewiseConstantSignal signal;
    double noise_sigma = 0.0;
};

/// Names accepted by test_signal, in benchmark-table order.
const std::vector<std::string> &test_signal_names();

/// The standard benchmark signals: blocks, fms, mix, teeth10, stairs10.
/// Throws InvalidInputError for any other name.
TestSignal test_signal(std::string_view name);

/// Three nearby change-points (130, 150, 170) on T = 300 with levels
/// 0, 1, -1, 0: the middle jump is offset by its neighbours, so a CUSUM over
/// the whole domain misses all three.
PiecewiseConstantSignal demo_signal();

struct SimulationConfig {
    double N_avg = 4.0;
    double sigma2_jmp = 1.0;
    Index length = 500;
    double noise_sigma = 1.0;
    std::uint64_t seed = 0;
};

/// Poisson(N_avg) change-points placed at floor(u T) for u ~ U(0, 1), redrawn
/// on duplicates or when the index falls outside [1, T - 1]; starting level
/// 0 and N(0, sigma2_jmp) jumps. N is capped at T - 1.
PiecewiseConstantSignal random_signal(const SimulationConfig &config);

struct TrendPiece {
    /// First index covered by the piece (1-based); the first piece starts at 1.
    Index start = 1;
    double intercept = 0.0;
    /// Increment per step; value at t is intercept + slope * (t - start).
    double slope = 0.0;
};

struct TrendSignal {
    Index length = 0;
    std::vector<TrendPiece> pieces;
};

/// f_1..f_T of a piecewise-linear signal. Throws InvalidInputError unless
/// the pieces start at 1 and have strictly increasing starts within [1, T].
std::vector<double> linear_trend_signal(const TrendSignal &spec);

/// X_t = f_t + sigma Z_t with Z_t i.i.d. standard normal.
TimeSeries add_noise(std::span<const double> f, double sigma, std::uint64_t seed);

/// Single-column CSV, one value per line, no header; shortest round-trip
/// decimal form.
std::string to_csv(std::span<const double> values);

/// JSON descriptor {"T", "change_points", "values", "sigma"}.
std::string to_descriptor_json(const PiecewiseConstantSignal &signal, double sigma);

} // namespace wildseg
