#include "wildseg/errors.hpp"
#include "wildseg/segmentation.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace wildseg::reference {

namespace {

struct Recursion {
    const PrefixSums &sums;
    const DetectionParams &params;
    const IntervalSet &draws;
    SolutionPath &path;

    void run(Index s, Index e, std::optional<std::size_t> parent) {
        if (e - s < 1) {
            return;
        }
        const Interval scope{s, e};

        bool found = false;
        CusumPeak best;
        Interval generating;
        if (params.augment) {
            best = cusum_argmax(sums, scope);
            generating = scope;
            found = true;
        }
        for (const Interval &iv : draws.intervals) {
            if (!scope.contains(iv)) {
                continue;
            }
            const CusumPeak peak = cusum_argmax(sums, iv);
            if (!found || peak.magnitude > best.magnitude) {
                best = peak;
                generating = iv;
                found = true;
            }
        }
        if (!found || !(best.magnitude > params.zeta)) {
            return;
        }

        PathNode node;
        node.location = best.b;
        node.magnitude = best.magnitude;
        node.generating_interval = generating;
        node.scope = scope;
        node.survival_threshold =
            std::min(best.magnitude,
                     parent ? path.nodes[*parent].survival_threshold : std::numeric_limits<double>::infinity());
        node.parent = parent;
        node.order = path.nodes.size();
        path.nodes.push_back(node);

        const std::size_t id = node.order;
        run(s, best.b, id);
        run(best.b + 1, e, id);
    }
};

} // namespace

SolutionPath wbs(const TimeSeries &x, const DetectionParams &params, const IntervalSet &intervals) {
    if (x.length() < 2) {
        throw InvalidInputError("detection needs at least 2 observations");
    }
    if (!(params.zeta >= 0.0)) {
        throw InvalidInputError("threshold must be nonnegative");
    }
    if (intervals.series_length != x.length()) {
        throw InvalidInputError("interval set was drawn for a different length");
    }
    if (intervals.size() == 0 && !params.augment) {
        throw InvalidInputError("WBS without augmentation needs at least one random interval");
    }

    SolutionPath path;
    path.series_length = x.length();
    path.fingerprint = ParamsFingerprint{Method::Wild, intervals.size(), intervals.seed, params.augment};
    const PrefixSums sums(x);
    Recursion{sums, params, intervals, path}.run(1, x.length(), std::nullopt);
    return path;
}

} // namespace wildseg::reference
