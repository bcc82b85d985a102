#pragma once

#include "wildseg/core_stats.hpp"

#include <vector>

namespace wildseg {

/// Estimated change-point locations, strictly increasing, each in [1, T - 1].
class ChangePointSet {
public:
    ChangePointSet() = default;

    /// Sorts and validates. Throws InvalidInputError on duplicates or
    /// locations outside [1, length - 1].
    static ChangePointSet make(std::vector<Index> locations, Index length);

    const std::vector<Index> &locations() const noexcept { return locations_; }
    std::size_t size() const noexcept { return locations_.size(); }
    bool empty() const noexcept { return locations_.empty(); }

    bool contains(Index location) const;
    /// Subset test on locations.
    bool is_subset_of(const ChangePointSet &other) const;

    friend bool operator==(const ChangePointSet &, const ChangePointSet &) = default;

private:
    std::vector<Index> locations_;
};

/// Piecewise-constant f_t. values[i] applies on [cp_i + 1, cp_{i+1}] with
/// cp_0 = 0 and cp_{N+1} = T.
class PiecewiseConstantSignal {
public:
    PiecewiseConstantSignal() = default;

    /// Throws InvalidInputError unless values.size() == change_points.size() + 1
    /// and the change-points form a valid ChangePointSet for `length`.
    PiecewiseConstantSignal(Index length, std::vector<Index> change_points, std::vector<double> values);

    Index length() const noexcept { return length_; }
    const std::vector<Index> &change_points() const noexcept { return change_points_; }
    const std::vector<double> &values() const noexcept { return values_; }
    std::size_t num_change_points() const noexcept { return change_points_.size(); }

    /// f_1..f_T.
    std::vector<double> evaluate() const;

    /// True when every listed change-point is a genuine jump. Generated
    /// signals always satisfy this; fitted ones need not.
    bool has_distinct_levels() const;

    ChangePointSet change_point_set() const;

private:
    Index length_ = 0;
    std::vector<Index> change_points_;
    std::vector<double> values_;
};

} // namespace wildseg
