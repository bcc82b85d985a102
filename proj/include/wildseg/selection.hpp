#pragma once

#include "wildseg/core_stats.hpp"
#include "wildseg/piecewise.hpp"
#include "wildseg/segmentation.hpp"

#include <cstddef>
#include <vector>

namespace wildseg {

/// Gaussian-consistency constant for the median absolute deviation.
inline constexpr double kMadConstant = 1.4826;

/// Noise scale from first differences: 1.4826 * MAD(diff(x) / sqrt(2)).
/// Requires T >= 3; may return 0 (e.g. constant or linear input).
double mad_sigma(const TimeSeries &x);

struct ThresholdSpec {
    double C = 1.0;
    double sigma = 1.0;
    Index length = 2;
};

/// sigma * C * sqrt(2 ln T).
double default_threshold(const ThresholdSpec &spec);

/// Maximum-likelihood residual variance T^-1 sum (X_t - fhat_t)^2 of the
/// piecewise-mean fit on `cps`.
double residual_variance(const TimeSeries &x, const ChangePointSet &cps);

struct SsicParams {
    double alpha = 1.01;
    std::size_t K = 20;
};

struct ModelScore {
    std::size_t k = 0;
    double sigma2_hat = 0.0;
    /// (T/2) ln sigma2_hat + k (ln T)^alpha; -inf when sigma2_hat == 0.
    double ssic = 0.0;
};

struct SsicSelection {
    std::size_t k_hat = 0;
    ChangePointSet change_points;
    std::vector<ModelScore> scores;
    /// k_hat equals the largest model considered; raising K may change it.
    bool boundary_hit = false;
};

/// Strengthened Schwarz criterion over the nested prefixes C_0..C_K of the
/// path. Smallest k wins ties; a zero residual variance scores -inf.
SsicSelection ssic_select(const TimeSeries &x, const SolutionPath &path, const SsicParams &params);

} // namespace wildseg
