#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace wildseg {

/// 1-based position in a series. A change-point at b means the segments
/// are [.., b] and [b + 1, ..].
using Index = std::int64_t;

/// Observed data X_1..X_T. All values are finite.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values);

    Index length() const noexcept { return static_cast<Index>(values_.size()); }
    bool empty() const noexcept { return values_.empty(); }

    /// 1-based access.
    double operator()(Index t) const { return values_[static_cast<std::size_t>(t - 1)]; }

    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Closed interval [s, e] of 1-based indices with s < e.
struct Interval {
    Index s = 1;
    Index e = 2;

    /// Throws PreconditionError unless 1 <= s < e.
    static Interval make(Index s, Index e);

    Index length() const noexcept { return e - s + 1; }
    bool contains(const Interval &other) const noexcept { return s <= other.s && other.e <= e; }

    friend bool operator==(const Interval &, const Interval &) = default;
};

/// Cumulative sums of a series. The series is centred on its mean before
/// accumulation (CUSUM contrasts are shift invariant) and the running sum is
/// carried in extended precision, which keeps S_b - S_{s-1} accurate for
/// long series with a large offset.
class PrefixSums {
public:
    explicit PrefixSums(const TimeSeries &x);
    explicit PrefixSums(std::span<const double> x);

    Index length() const noexcept { return static_cast<Index>(sums_.size()) - 1; }

    /// Sum of the centred values over [s, e] (1-based, inclusive).
    double range_sum(Index s, Index e) const noexcept {
        return sums_[static_cast<std::size_t>(e)] - sums_[static_cast<std::size_t>(s - 1)];
    }

    /// Cumulative centred sum up to t, S_0 = 0.
    double at(Index t) const noexcept { return sums_[static_cast<std::size_t>(t)]; }

    /// The offset subtracted before accumulation.
    double offset() const noexcept { return offset_; }

private:
    std::vector<double> sums_;
    double offset_ = 0.0;
};

struct CusumPeak {
    Index b = 0;
    double magnitude = 0.0;
    double signed_value = 0.0;
};

/// Signed CUSUM contrast of [s, e] at split b, evaluated in O(1).
double cusum(const PrefixSums &sums, const Interval &iv, Index b);

/// Same statistic by direct summation over the raw values.
double cusum(const TimeSeries &x, const Interval &iv, Index b);

/// Zero-sum, unit-norm contrast weights whose inner product with
/// (X_s, .., X_e) is the CUSUM statistic at b.
std::vector<double> contrast_vector(const Interval &iv, Index b);

/// Split b in [s, e - 1] maximising |CUSUM|; the smallest b wins ties.
CusumPeak cusum_argmax(const PrefixSums &sums, const Interval &iv);
CusumPeak cusum_argmax(const TimeSeries &x, const Interval &iv);

/// Brute-force single change-point least-squares fit: for every split,
/// fit two means and compute the residual sum of squares. Independent of
/// the CUSUM code path; used to check cusum_argmax.
Index least_squares_one_cp_oracle(const TimeSeries &x, const Interval &iv);

namespace detail {

/// CUSUM from two partial sums and their lengths:
/// sqrt(nl * nr / n) * (mean_left - mean_right). The mean form gives an
/// exact zero whenever both partial sums are exact multiples of one level.
inline double cusum_from_sums(double left_sum, double right_sum, Index n_left, Index n_right) noexcept {
    const double nl = static_cast<double>(n_left);
    const double nr = static_cast<double>(n_right);
    return std::sqrt(nl * nr / (nl + nr)) * (left_sum / nl - right_sum / nr);
}

} // namespace detail

} // namespace wildseg
