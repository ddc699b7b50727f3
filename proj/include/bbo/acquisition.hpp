#pragma once

#include <cstddef>
#include <vector>

#include "bbo/gp.hpp"
#include "bbo/rng.hpp"
#include "bbo/space.hpp"

namespace bbo {

// Closed-form expected improvement under N(mu, sigma^2) against the
// incumbent f_min (minimization). Zero when sigma is zero.
double expected_improvement(double mu, double sigma, double f_min);

struct AcqOptions {
    int candidates_per_dim = 1000; // uniform random scan size = d * this
    int top_refine = 5;            // candidates polished by pattern search
    int pattern_iters = 100;       // sweeps; step starts at width/10, halves on stall
};

struct AcquisitionQuery {
    double f_min;
    const Surrogate* model;
    const SearchSpace* space;
};

namespace detail {

template <class Model>
double ei_at(const Model& model, double f_min, const Point& x) {
    const auto p = model.predict(x);
    return expected_improvement(p.mean, std::sqrt(p.var), f_min);
}

// Greedy per-coordinate pattern search, step halving on a full sweep
// without improvement. Moves only on strict improvement, so the result
// never scores below the starting point.
template <class Model>
void pattern_refine(const Model& model, double f_min, const SearchSpace& space,
                    Point& x, double& ei, int iters) {
    const std::size_t d = space.dim();
    std::vector<double> step(d);
    for (std::size_t j = 0; j < d; ++j) {
        step[j] = space.width(j) / 10.0;
    }
    Point probe = x;
    for (int it = 0; it < iters; ++it) {
        bool improved = false;
        for (std::size_t j = 0; j < d; ++j) {
            for (double sign : {1.0, -1.0}) {
                double c = x[j] + sign * step[j];
                c = std::min(space.upper()[j], std::max(space.lower()[j], c));
                if (c == x[j]) {
                    continue;
                }
                probe[j] = c;
                const double v = ei_at(model, f_min, probe);
                if (v > ei) {
                    x[j] = c;
                    ei = v;
                    improved = true;
                    break;
                }
                probe[j] = x[j];
            }
            probe[j] = x[j];
        }
        if (!improved) {
            for (double& s : step) {
                s *= 0.5;
            }
        }
    }
}

} // namespace detail

// Maximizes EI over the space: a seeded uniform scan of
// candidates_per_dim * d points, then pattern-search polish of the best
// top_refine of them. Returns a point whose EI is >= that of every
// candidate examined; ties broken by earliest candidate index.
template <class Model>
Point maximize_acquisition(double f_min, const Model& model, const SearchSpace& space,
                           Rng& rng, const AcqOptions& opt = {}) {
    const std::size_t d = space.dim();
    const std::size_t n = static_cast<std::size_t>(opt.candidates_per_dim) * d;

    struct Scored {
        Point x;
        double ei;
        std::size_t order;
    };
    std::vector<Scored> top; // best top_refine candidates, scan order preserved
    for (std::size_t i = 0; i < n; ++i) {
        Point x(d);
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = rng.uniform(space.lower()[j], space.upper()[j]);
        }
        const double ei = detail::ei_at(model, f_min, x);
        if (top.size() < static_cast<std::size_t>(opt.top_refine)) {
            top.push_back({std::move(x), ei, i});
        } else {
            std::size_t worst = 0;
            for (std::size_t t = 1; t < top.size(); ++t) {
                if (top[t].ei < top[worst].ei ||
                    (top[t].ei == top[worst].ei && top[t].order > top[worst].order)) {
                    worst = t;
                }
            }
            if (ei > top[worst].ei) {
                top[worst] = {std::move(x), ei, i};
            }
        }
    }

    for (Scored& s : top) {
        detail::pattern_refine(model, f_min, space, s.x, s.ei, opt.pattern_iters);
    }

    std::size_t win = 0;
    for (std::size_t t = 1; t < top.size(); ++t) {
        if (top[t].ei > top[win].ei ||
            (top[t].ei == top[win].ei && top[t].order < top[win].order)) {
            win = t;
        }
    }
    return top[win].x;
}

inline Point maximize_acquisition(const AcquisitionQuery& query, Rng& rng,
                                  const AcqOptions& opt = {}) {
    return maximize_acquisition(query.f_min, *query.model, *query.space, rng, opt);
}

} // namespace bbo
