#include "wildseg/core_stats.hpp"

#include "wildseg/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wildseg {

namespace {

void require_split(const Interval &iv, Index b, Index length) {
    if (iv.s < 1 || iv.e <= iv.s || iv.e > length) {
        throw PreconditionError("interval [" + std::to_string(iv.s) + ", " + std::to_string(iv.e) +
                                "] is not valid for a series of length " + std::to_string(length));
    }
    if (b < iv.s || b >= iv.e) {
        throw PreconditionError("split " + std::to_string(b) + " outside [" + std::to_string(iv.s) + ", " +
                                std::to_string(iv.e - 1) + "]");
    }
}

void require_interval(const Interval &iv, Index length) {
    if (iv.s < 1 || iv.e <= iv.s || iv.e > length) {
        throw PreconditionError("interval [" + std::to_string(iv.s) + ", " + std::to_string(iv.e) +
                                "] is not valid for a series of length " + std::to_string(length));
    }
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidInputError("non-finite value at position " + std::to_string(i + 1));
        }
    }
}

Interval Interval::make(Index s, Index e) {
    if (s < 1 || e <= s) {
        throw PreconditionError("invalid interval [" + std::to_string(s) + ", " + std::to_string(e) + "]");
    }
    return Interval{s, e};
}

PrefixSums::PrefixSums(const TimeSeries &x) : PrefixSums(x.values()) {}

PrefixSums::PrefixSums(std::span<const double> x) : sums_(x.size() + 1, 0.0) {
    if (x.empty()) {
        return;
    }
    long double total = 0.0L;
    for (double v : x) {
        total += v;
    }
    offset_ = static_cast<double>(total / static_cast<long double>(x.size()));

    long double running = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        running += static_cast<long double>(x[i]) - offset_;
        sums_[i + 1] = static_cast<double>(running);
    }
}

double cusum(const PrefixSums &sums, const Interval &iv, Index b) {
    require_split(iv, b, sums.length());
    return detail::cusum_from_sums(sums.range_sum(iv.s, b), sums.range_sum(b + 1, iv.e), b - iv.s + 1, iv.e - b);
}

double cusum(const TimeSeries &x, const Interval &iv, Index b) {
    require_split(iv, b, x.length());
    long double left = 0.0L;
    long double right = 0.0L;
    for (Index t = iv.s; t <= b; ++t) {
        left += x(t);
    }
    for (Index t = b + 1; t <= iv.e; ++t) {
        right += x(t);
    }
    const auto nl = static_cast<long double>(b - iv.s + 1);
    const auto nr = static_cast<long double>(iv.e - b);
    return static_cast<double>(std::sqrt(nl * nr / (nl + nr)) * (left / nl - right / nr));
}

std::vector<double> contrast_vector(const Interval &iv, Index b) {
    require_split(iv, b, std::numeric_limits<Index>::max());
    const double n = static_cast<double>(iv.length());
    const double nl = static_cast<double>(b - iv.s + 1);
    const double nr = static_cast<double>(iv.e - b);
    const double left = std::sqrt(nr / (n * nl));
    const double right = -std::sqrt(nl / (n * nr));

    std::vector<double> psi(static_cast<std::size_t>(iv.length()));
    for (Index t = iv.s; t <= iv.e; ++t) {
        psi[static_cast<std::size_t>(t - iv.s)] = t <= b ? left : right;
    }
    return psi;
}

CusumPeak cusum_argmax(const PrefixSums &sums, const Interval &iv) {
    require_interval(iv, sums.length());
    CusumPeak best{iv.s, -1.0, 0.0};
    const double base = sums.at(iv.s - 1);
    const double top = sums.at(iv.e);
    for (Index b = iv.s; b < iv.e; ++b) {
        const double split = sums.at(b);
        const double value = detail::cusum_from_sums(split - base, top - split, b - iv.s + 1, iv.e - b);
        const double magnitude = std::fabs(value);
        if (magnitude > best.magnitude) {
            best = {b, magnitude, value};
        }
    }
    return best;
}

CusumPeak cusum_argmax(const TimeSeries &x, const Interval &iv) {
    require_interval(iv, x.length());
    return cusum_argmax(PrefixSums(x), iv);
}

Index least_squares_one_cp_oracle(const TimeSeries &x, const Interval &iv) {
    require_interval(iv, x.length());
    Index best_b = iv.s;
    double best_rss = std::numeric_limits<double>::infinity();
    for (Index b = iv.s; b < iv.e; ++b) {
        double rss = 0.0;
        for (const auto &[lo, hi] : {std::pair{iv.s, b}, std::pair{b + 1, iv.e}}) {
            long double mean = 0.0L;
            for (Index t = lo; t <= hi; ++t) {
                mean += x(t);
            }
            mean /= static_cast<long double>(hi - lo + 1);
            long double ss = 0.0L;
            for (Index t = lo; t <= hi; ++t) {
                const long double r = x(t) - mean;
                ss += r * r;
            }
            rss += static_cast<double>(ss);
        }
        if (rss < best_rss) {
            best_rss = rss;
            best_b = b;
        }
    }
    return best_b;
}

} // namespace wildseg
