#pragma once

#include <cstddef>
#include <vector>

#include "bbo/errors.hpp"

namespace bbo {

// A point in problem coordinates.
using Point = std::vector<double>;

// Axis-aligned hypercube with per-dimension bounds, lower[i] < upper[i].
// Immutable value type; all operations return new objects.
class SearchSpace {
public:
    SearchSpace(std::vector<double> lower, std::vector<double> upper);

    // [lo, hi]^dim.
    static SearchSpace cube(double lo, double hi, std::size_t dim);

    std::size_t dim() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    double width(std::size_t i) const { return upper_[i] - lower_[i]; }
    double volume() const;

    Point center() const;

    /// Boundary-inclusive membership test.
    bool contains(const Point& x) const;

    // Affine maps between this space and the unit cube.
    Point to_unit(const Point& x) const;
    Point from_unit(const Point& u) const;

    /// Partition along axis `dim` into K equal-width subspaces, ordered by
    /// ascending lower bound. Interior boundaries are computed as
    /// lower + i*width/K so repeated splits stay bit-stable.
    std::vector<SearchSpace> split_dimension(std::size_t dim, int k) const;

    bool operator==(const SearchSpace& other) const {
        return lower_ == other.lower_ && upper_ == other.upper_;
    }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

} // namespace bbo
