#include "wildseg/selection.hpp"

#include "wildseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wildseg {

namespace {

double median_in_place(std::vector<double> &v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

} // namespace

double mad_sigma(const TimeSeries &x) {
    if (x.length() < 3) {
        throw InvalidInputError("noise estimation needs at least 3 observations, got " + std::to_string(x.length()));
    }
    const auto values = x.values();
    std::vector<double> diffs(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        diffs[i] = (values[i + 1] - values[i]) / std::sqrt(2.0);
    }
    std::vector<double> scratch = diffs;
    const double centre = median_in_place(scratch);
    for (double &d : diffs) {
        d = std::fabs(d - centre);
    }
    return kMadConstant * median_in_place(diffs);
}

double default_threshold(const ThresholdSpec &spec) {
    if (!(spec.C > 0.0) || !(spec.sigma >= 0.0) || spec.length < 2) {
        throw InvalidInputError("threshold needs C > 0, sigma >= 0 and T >= 2");
    }
    return spec.sigma * spec.C * std::sqrt(2.0 * std::log(static_cast<double>(spec.length)));
}

double residual_variance(const TimeSeries &x, const ChangePointSet &cps) {
    const PiecewiseConstantSignal fit = fit_means(x, cps);
    const auto &eta = fit.change_points();
    const auto &means = fit.values();
    long double total = 0.0L;
    Index start = 1;
    for (std::size_t i = 0; i < means.size(); ++i) {
        const Index end = i < eta.size() ? eta[i] : x.length();
        for (Index t = start; t <= end; ++t) {
            const long double r = static_cast<long double>(x(t)) - means[i];
            total += r * r;
        }
        start = end + 1;
    }
    return static_cast<double>(total / static_cast<long double>(x.length()));
}

SsicSelection ssic_select(const TimeSeries &x, const SolutionPath &path, const SsicParams &params) {
    if (!(params.alpha > 1.0)) {
        throw InvalidInputError("sSIC exponent alpha must exceed 1");
    }
    if (path.series_length != x.length()) {
        throw InvalidInputError("solution path does not belong to this series");
    }

    const double log_t = std::log(static_cast<double>(x.length()));
    const double penalty = std::pow(log_t, params.alpha);
    const double half_t = 0.5 * static_cast<double>(x.length());

    std::vector<ChangePointSet> models = solution_path_prefixes(path, params.K);
    SsicSelection out;
    out.scores.reserve(models.size());
    std::size_t best = 0;
    for (std::size_t k = 0; k < models.size(); ++k) {
        ModelScore score;
        score.k = k;
        score.sigma2_hat = residual_variance(x, models[k]);
        score.ssic = score.sigma2_hat == 0.0 ? -std::numeric_limits<double>::infinity()
                                             : half_t * std::log(score.sigma2_hat) + static_cast<double>(k) * penalty;
        out.scores.push_back(score);
        if (score.ssic < out.scores[best].ssic) {
            best = k;
        }
    }
    out.k_hat = best;
    out.change_points = std::move(models[best]);
    out.boundary_hit = best > 0 && best == params.K;
    return out;
}

} // namespace wildseg
