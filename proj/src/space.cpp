#include "bbo/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bbo {

SearchSpace::SearchSpace(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw std::invalid_argument("SearchSpace: bounds must be non-empty and equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
            throw std::invalid_argument("SearchSpace: requires finite lower[i] < upper[i] at axis " +
                                        std::to_string(i));
        }
    }
}

SearchSpace SearchSpace::cube(double lo, double hi, std::size_t dim) {
    return SearchSpace(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double SearchSpace::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        v *= width(i);
    }
    return v;
}

Point SearchSpace::center() const {
    Point c(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        c[i] = (lower_[i] + upper_[i]) / 2.0;
    }
    return c;
}

bool SearchSpace::contains(const Point& x) const {
    if (x.size() != dim()) {
        throw std::invalid_argument("contains: point dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); ++i) {
        if (x[i] < lower_[i] || x[i] > upper_[i]) {
            return false;
        }
    }
    return true;
}

Point SearchSpace::to_unit(const Point& x) const {
    if (!contains(x)) {
        throw OutOfBounds("to_unit: point outside space");
    }
    Point u(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        u[i] = (x[i] - lower_[i]) / width(i);
    }
    return u;
}

Point SearchSpace::from_unit(const Point& u) const {
    if (u.size() != dim()) {
        throw std::invalid_argument("from_unit: point dimension mismatch");
    }
    Point x(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (u[i] < 0.0 || u[i] > 1.0) {
            throw OutOfBounds("from_unit: coordinate outside [0,1]");
        }
        x[i] = lower_[i] + u[i] * width(i);
    }
    return x;
}

std::vector<SearchSpace> SearchSpace::split_dimension(std::size_t dim_index, int k) const {
    if (dim_index >= dim()) {
        throw std::invalid_argument("split_dimension: axis index out of range");
    }
    if (k < 1) {
        throw std::invalid_argument("split_dimension: K must be >= 1");
    }
    const double lo = lower_[dim_index];
    const double w = width(dim_index);
    std::vector<SearchSpace> parts;
    parts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        std::vector<double> plo = lower_;
        std::vector<double> phi = upper_;
        // The outer edges reuse the parent's bounds exactly.
        if (i > 0) {
            plo[dim_index] = lo + static_cast<double>(i) * w / k;
        }
        if (i < k - 1) {
            phi[dim_index] = lo + static_cast<double>(i + 1) * w / k;
        }
        parts.emplace_back(std::move(plo), std::move(phi));
    }
    return parts;
}

} // namespace bbo
