#include "wildseg/piecewise.hpp"

#include "wildseg/errors.hpp"

#include <algorithm>
#include <string>

namespace wildseg {

ChangePointSet ChangePointSet::make(std::vector<Index> locations, Index length) {
    std::sort(locations.begin(), locations.end());
    if (std::adjacent_find(locations.begin(), locations.end()) != locations.end()) {
        throw InvalidInputError("duplicate change-point locations");
    }
    for (Index loc : locations) {
        if (loc < 1 || loc > length - 1) {
            throw InvalidInputError("change-point " + std::to_string(loc) + " outside [1, " +
                                    std::to_string(length - 1) + "]");
        }
    }
    ChangePointSet out;
    out.locations_ = std::move(locations);
    return out;
}

bool ChangePointSet::contains(Index location) const {
    return std::binary_search(locations_.begin(), locations_.end(), location);
}

bool ChangePointSet::is_subset_of(const ChangePointSet &other) const {
    return std::includes(other.locations_.begin(), other.locations_.end(), locations_.begin(), locations_.end());
}

PiecewiseConstantSignal::PiecewiseConstantSignal(Index length, std::vector<Index> change_points,
                                                 std::vector<double> values)
    : length_(length), change_points_(std::move(change_points)), values_(std::move(values)) {
    if (length_ < 1) {
        throw InvalidInputError("signal length must be positive");
    }
    if (values_.size() != change_points_.size() + 1) {
        throw InvalidInputError("expected " + std::to_string(change_points_.size() + 1) + " segment values, got " +
                                std::to_string(values_.size()));
    }
    if (!std::is_sorted(change_points_.begin(), change_points_.end())) {
        throw InvalidInputError("change-points must be increasing");
    }
    ChangePointSet::make(change_points_, length_);
}

std::vector<double> PiecewiseConstantSignal::evaluate() const {
    std::vector<double> f(static_cast<std::size_t>(length_));
    Index start = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Index end = i < change_points_.size() ? change_points_[i] : length_;
        std::fill(f.begin() + start, f.begin() + end, values_[i]);
        start = end;
    }
    return f;
}

bool PiecewiseConstantSignal::has_distinct_levels() const {
    return std::adjacent_find(values_.begin(), values_.end()) == values_.end();
}

ChangePointSet PiecewiseConstantSignal::change_point_set() const {
    return ChangePointSet::make(change_points_, length_);
}

} // namespace wildseg
