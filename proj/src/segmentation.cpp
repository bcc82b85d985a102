#include "wildseg/segmentation.hpp"

#include "wildseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace wildseg {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_detectable(const TimeSeries &x) {
    if (x.length() < 2) {
        throw InvalidInputError("detection needs at least 2 observations, got " + std::to_string(x.length()));
    }
}

void require_threshold(double zeta) {
    if (!(zeta >= 0.0)) {
        throw InvalidInputError("threshold must be nonnegative");
    }
}

std::size_t record_node(SolutionPath &path, Index location, double magnitude, const Interval &generating,
                        const Interval &scope, std::optional<std::size_t> parent) {
    const double inherited = parent ? path.nodes[*parent].survival_threshold : kInfinity;
    PathNode node;
    node.location = location;
    node.magnitude = magnitude;
    node.generating_interval = generating;
    node.scope = scope;
    node.survival_threshold = std::min(magnitude, inherited);
    node.parent = parent;
    node.order = path.nodes.size();
    path.nodes.push_back(node);
    return node.order;
}

struct BinSegScope {
    Interval scope;
    std::optional<std::size_t> parent;
};

struct WildScope {
    Interval scope;
    std::optional<std::size_t> parent;
    // Indices into the interval set of the draws lying inside `scope`,
    // ascending so that the first maximum found is the smallest m.
    std::vector<std::uint32_t> candidates;
};

} // namespace

std::string_view to_string(Method method) noexcept {
    return method == Method::BinSeg ? "bs" : "wbs";
}

IntervalSet draw_intervals(Index length, std::size_t count, std::uint64_t seed) {
    if (length < 2) {
        throw InvalidInputError("cannot draw intervals for a series of length " + std::to_string(length));
    }
    IntervalSet set;
    set.series_length = length;
    set.seed = seed;
    set.intervals.reserve(count);

    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<Index> endpoint(1, length);
    while (set.intervals.size() < count) {
        Index s = endpoint(engine);
        Index e = endpoint(engine);
        if (s == e) {
            continue;
        }
        if (s > e) {
            std::swap(s, e);
        }
        set.intervals.push_back(Interval{s, e});
    }
    return set;
}

std::int64_t recommended_M(Index length, Index min_spacing) {
    if (min_spacing < 2 || min_spacing > length) {
        throw InvalidInputError("minimum spacing must lie in [2, T]");
    }
    const double t = static_cast<double>(length);
    const double d = static_cast<double>(min_spacing);
    return static_cast<std::int64_t>(std::ceil(9.0 * t * t / (d * d) * std::log(t * t / d)));
}

SolutionPath binseg(const TimeSeries &x, double zeta) {
    require_detectable(x);
    require_threshold(zeta);

    SolutionPath path;
    path.series_length = x.length();
    path.fingerprint = ParamsFingerprint{Method::BinSeg, 0, 0, true};

    const PrefixSums sums(x);
    std::vector<BinSegScope> stack{{Interval{1, x.length()}, std::nullopt}};
    while (!stack.empty()) {
        const BinSegScope current = stack.back();
        stack.pop_back();
        const Interval &scope = current.scope;
        if (scope.e - scope.s < 1) {
            continue;
        }
        const CusumPeak peak = cusum_argmax(sums, scope);
        if (!(peak.magnitude > zeta)) {
            continue;
        }
        const std::size_t id = record_node(path, peak.b, peak.magnitude, scope, scope, current.parent);
        // Right pushed first so the left scope is explored first.
        stack.push_back({Interval{peak.b + 1, scope.e}, id});
        stack.push_back({Interval{scope.s, peak.b}, id});
    }
    return path;
}

SolutionPath wbs(const TimeSeries &x, const DetectionParams &params, const IntervalSet &intervals) {
    require_detectable(x);
    require_threshold(params.zeta);
    if (intervals.series_length != x.length()) {
        throw InvalidInputError("interval set was drawn for length " + std::to_string(intervals.series_length) +
                                ", series has length " + std::to_string(x.length()));
    }
    if (intervals.size() == 0 && !params.augment) {
        throw InvalidInputError("WBS without augmentation needs at least one random interval");
    }
    if (intervals.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidInputError("too many intervals");
    }

    SolutionPath path;
    path.series_length = x.length();
    path.fingerprint = ParamsFingerprint{Method::Wild, intervals.size(), intervals.seed, params.augment};

    const PrefixSums sums(x);

    // The argmax over a fixed drawn interval does not depend on the scope it
    // is examined from, so every draw is maximised once up front.
    const auto count = static_cast<std::int64_t>(intervals.size());
    std::vector<CusumPeak> peaks(intervals.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t m = 0; m < count; ++m) {
        peaks[static_cast<std::size_t>(m)] = cusum_argmax(sums, intervals.intervals[static_cast<std::size_t>(m)]);
    }

    WildScope root{Interval{1, x.length()}, std::nullopt, {}};
    root.candidates.resize(intervals.size());
    std::iota(root.candidates.begin(), root.candidates.end(), 0U);

    std::vector<WildScope> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
        WildScope current = std::move(stack.back());
        stack.pop_back();
        const Interval scope = current.scope;
        if (scope.e - scope.s < 1) {
            continue;
        }

        bool found = false;
        CusumPeak best;
        Interval generating;
        if (params.augment) {
            best = cusum_argmax(sums, scope);
            generating = scope;
            found = true;
        }
        for (std::uint32_t m : current.candidates) {
            if (!found || peaks[m].magnitude > best.magnitude) {
                best = peaks[m];
                generating = intervals.intervals[m];
                found = true;
            }
        }
        if (!found || !(best.magnitude > params.zeta)) {
            continue;
        }

        const std::size_t id = record_node(path, best.b, best.magnitude, generating, scope, current.parent);

        WildScope left{Interval{scope.s, best.b}, id, {}};
        WildScope right{Interval{best.b + 1, scope.e}, id, {}};
        for (std::uint32_t m : current.candidates) {
            const Interval &iv = intervals.intervals[m];
            if (iv.e <= best.b) {
                left.candidates.push_back(m);
            } else if (iv.s > best.b) {
                right.candidates.push_back(m);
            }
        }
        current.candidates.clear();
        current.candidates.shrink_to_fit();
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    return path;
}

SolutionPath detect(const TimeSeries &x, const DetectionParams &params) {
    require_detectable(x);
    if (params.method == Method::BinSeg) {
        return binseg(x, params.zeta);
    }
    return wbs(x, params, draw_intervals(x.length(), params.M, params.seed));
}

ChangePointSet apply_threshold(const SolutionPath &path, double zeta) {
    if (!(zeta >= 0.0)) {
        throw InvalidInputError("threshold must be nonnegative");
    }
    std::vector<Index> locations;
    for (const PathNode &node : path.nodes) {
        if (node.survival_threshold > zeta) {
            locations.push_back(node.location);
        }
    }
    return ChangePointSet::make(std::move(locations), path.series_length);
}

std::vector<ChangePointSet> solution_path_prefixes(const SolutionPath &path, std::size_t max_k) {
    std::vector<std::size_t> ranked(path.nodes.size());
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return path.nodes[a].survival_threshold > path.nodes[b].survival_threshold;
    });

    const std::size_t depth = std::min(max_k, ranked.size());
    std::vector<ChangePointSet> models;
    models.reserve(depth + 1);
    std::vector<Index> locations;
    models.push_back(ChangePointSet{});
    for (std::size_t k = 0; k < depth; ++k) {
        locations.push_back(path.nodes[ranked[k]].location);
        models.push_back(ChangePointSet::make(locations, path.series_length));
    }
    return models;
}

std::vector<ThresholdLine> time_threshold_map(const SolutionPath &path, double zeta_min, double zeta_max) {
    if (!(zeta_min >= 0.0) || !(zeta_min < zeta_max)) {
        throw InvalidInputError("threshold map range must satisfy 0 <= zeta_min < zeta_max");
    }
    std::vector<ThresholdLine> lines;
    for (const PathNode &node : path.nodes) {
        if (node.survival_threshold > zeta_min) {
            lines.push_back({node.location, zeta_min, std::min(node.survival_threshold, zeta_max)});
        }
    }
    std::sort(lines.begin(), lines.end(),
              [](const ThresholdLine &a, const ThresholdLine &b) { return a.location < b.location; });
    return lines;
}

RefinedLocations refine_locations(const TimeSeries &x, const ChangePointSet &cps) {
    const Index length = x.length();
    const auto &eta = cps.locations();
    if (!eta.empty() && (eta.front() < 1 || eta.back() > length - 1)) {
        throw InvalidInputError("change-points do not fit the series");
    }

    const PrefixSums sums(x);
    std::vector<Index> refined;
    refined.reserve(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const Index prev = i == 0 ? 0 : eta[i - 1];
        const Index next = i + 1 == eta.size() ? length : eta[i + 1];
        // s <= eta[i] < e always holds, so the interval is valid.
        const Index s = (prev + 1 + eta[i]) / 2;
        const Index e = (eta[i] + 1 + next) / 2;
        refined.push_back(cusum_argmax(sums, Interval{s, e}).b);
    }

    std::sort(refined.begin(), refined.end());
    RefinedLocations out;
    for (std::size_t i = 1; i < refined.size(); ++i) {
        if (refined[i] == refined[i - 1] && (out.collisions.empty() || out.collisions.back() != refined[i])) {
            out.collisions.push_back(refined[i]);
        }
    }
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    out.locations = ChangePointSet::make(std::move(refined), length);
    return out;
}

PiecewiseConstantSignal fit_means(const TimeSeries &x, const ChangePointSet &cps) {
    const Index length = x.length();
    const auto &eta = cps.locations();
    std::vector<double> means;
    means.reserve(eta.size() + 1);
    Index start = 1;
    for (std::size_t i = 0; i <= eta.size(); ++i) {
        const Index end = i < eta.size() ? eta[i] : length;
        long double total = 0.0L;
        for (Index t = start; t <= end; ++t) {
            total += x(t);
        }
        means.push_back(static_cast<double>(total / static_cast<long double>(end - start + 1)));
        start = end + 1;
    }
    return PiecewiseConstantSignal(length, eta, std::move(means));
}

} // namespace wildseg
