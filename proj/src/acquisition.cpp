#include "bbo/acquisition.hpp"

#include <cmath>
#include <numbers>

namespace bbo {

namespace {

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

} // namespace

double expected_improvement(double mu, double sigma, double f_min) {
    if (sigma <= 0.0) {
        return 0.0;
    }
    const double z = (f_min - mu) / sigma;
    const double ei = sigma * normal_pdf(z) + (f_min - mu) * normal_cdf(z);
    return ei > 0.0 ? ei : 0.0;
}

} // namespace bbo
