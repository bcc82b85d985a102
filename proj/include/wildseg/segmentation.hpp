#pragma once

#include "wildseg/core_stats.hpp"
#include "wildseg/piecewise.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wildseg {

enum class Method { BinSeg, Wild };

std::string_view to_string(Method method) noexcept;

/// The random draw F_T^M: M intervals with 1 <= s < e <= T.
struct IntervalSet {
    Index series_length = 0;
    std::uint64_t seed = 0;
    std::vector<Interval> intervals;

    std::size_t size() const noexcept { return intervals.size(); }
};

/// Draws M intervals. Each endpoint pair is drawn uniformly with
/// replacement from {1..T}, redrawn when s == e and swapped so s < e; the
/// result is uniform over ordered pairs. Deterministic given the seed.
IntervalSet draw_intervals(Index length, std::size_t count, std::uint64_t seed);

/// ceil((9 T^2 / delta^2) * ln(T^2 / delta)), the number of draws that
/// makes a favourable interval around every change-point likely when the
/// minimum spacing is delta.
std::int64_t recommended_M(Index length, Index min_spacing);

struct DetectionParams {
    Method method = Method::Wild;
    std::size_t M = 5000;
    /// Also consider the whole current scope as candidate interval 0.
    bool augment = true;
    std::uint64_t seed = 0;
    double zeta = 0.0;
};

struct PathNode {
    Index location = 0;
    /// |CUSUM| at detection.
    double magnitude = 0.0;
    Interval generating_interval;
    Interval scope;
    /// min(magnitude, parent's survival threshold): the node is reported for
    /// every threshold strictly below this value.
    double survival_threshold = 0.0;
    std::optional<std::size_t> parent;
    /// Position in detection sequence (depth-first, left scope first).
    std::size_t order = 0;
};

struct ParamsFingerprint {
    Method method = Method::Wild;
    std::size_t M = 0;
    std::uint64_t seed = 0;
    bool augment = true;

    friend bool operator==(const ParamsFingerprint &, const ParamsFingerprint &) = default;
};

struct SolutionPath {
    Index series_length = 0;
    ParamsFingerprint fingerprint;
    /// Indexed by detection order.
    std::vector<PathNode> nodes;
};

/// Standard binary segmentation at threshold zeta. Every split whose |CUSUM|
/// exceeds zeta is recorded; run with zeta = 0 for the full path.
SolutionPath binseg(const TimeSeries &x, double zeta);

/// Wild binary segmentation at params.zeta over a pre-drawn interval set.
/// The per-interval CUSUM maximisation runs in parallel when OpenMP is
/// available; results do not depend on the thread count.
SolutionPath wbs(const TimeSeries &x, const DetectionParams &params, const IntervalSet &intervals);

/// Draws intervals from params.seed (WBS only) and runs the chosen method.
SolutionPath detect(const TimeSeries &x, const DetectionParams &params);

/// Sorted locations of nodes with survival threshold > zeta. Equal to the
/// set obtained by rerunning detection at zeta with the same intervals.
ChangePointSet apply_threshold(const SolutionPath &path, double zeta);

/// Nested models C_0 = {} ⊂ C_1 ⊂ ... ⊂ C_K: C_k holds the k nodes with the
/// largest survival thresholds (earlier detection first on ties). Truncated
/// at the path length.
std::vector<ChangePointSet> solution_path_prefixes(const SolutionPath &path, std::size_t max_k);

struct ThresholdLine {
    Index location = 0;
    double zeta_low = 0.0;
    double zeta_high = 0.0;
};

/// One vertical line per node surviving above zeta_min, spanning
/// [zeta_min, min(survival, zeta_max)], sorted by location.
std::vector<ThresholdLine> time_threshold_map(const SolutionPath &path, double zeta_min, double zeta_max);

struct RefinedLocations {
    ChangePointSet locations;
    /// Locations that two estimates were refined onto; collapsed to one.
    std::vector<Index> collisions;
};

/// Re-estimates each location as the CUSUM argmax on the interval between
/// the mid-points of its two adjacent segments.
RefinedLocations refine_locations(const TimeSeries &x, const ChangePointSet &cps);

/// Segment means of x between consecutive change-points.
PiecewiseConstantSignal fit_means(const TimeSeries &x, const ChangePointSet &cps);

namespace reference {

/// Serial, literal transcription of the recursive WildBinSeg procedure:
/// every scope rescans the full interval set and recomputes the CUSUM
/// argmax of each contained interval. Kept to cross-check wildseg::wbs.
SolutionPath wbs(const TimeSeries &x, const DetectionParams &params, const IntervalSet &intervals);

} // namespace reference

} // namespace wildseg
