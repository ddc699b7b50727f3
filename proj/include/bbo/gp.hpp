#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "bbo/rng.hpp"
#include "bbo/space.hpp"

namespace bbo {

enum class KernelKind { SquaredExponential, Matern52 };

// Kernel parameterization with sigma_f as a linear output scale and a
// single shared length scale dividing the squared distance:
//   r^2 = ||x - x'||^2 / length
//   SE:  sigma_f * exp(-r^2 / 2)
//   M52: sigma_f * (1 + sqrt(5 r^2) + 5 r^2 / 3) * exp(-sqrt(5 r^2))
struct KernelParams {
    KernelKind kind = KernelKind::SquaredExponential;
    double sigma_f = 1.0;
    double length = 1.0;
};

double kernel_from_sq_dist(const KernelParams& params, double sq_dist);
double kernel_value(const KernelParams& params, const Point& x, const Point& x2);

struct Dataset {
    std::vector<Point> points;
    std::vector<double> values;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }
    void add(Point x, double y) {
        points.push_back(std::move(x));
        values.push_back(y);
    }
    double min_value() const;
};

// Exact GP posterior backed by a Cholesky factor of K + jitter*I.
// Immutable after fit; safe to share read-only across threads.
class GpModel {
public:
    struct Prediction {
        double mean = 0.0;
        double var = 0.0;
    };

    // Builds the Gram matrix, adds jitter (base_jitter * sigma_f) and
    // factorizes, escalating jitter x10 up to cap_jitter * sigma_f.
    // Throws NotPositiveDefinite if the factorization still fails at the cap.
    static GpModel fit(Dataset data, const KernelParams& params,
                       double base_jitter = 1e-8, double cap_jitter = 1e-2);

    Prediction predict(const Point& x) const;

    double log_marginal_likelihood() const;

    const Dataset& data() const { return data_; }
    const KernelParams& params() const { return params_; }
    double jitter() const { return jitter_; }
    const Eigen::MatrixXd& factor() const { return factor_; } // lower triangular
    const Eigen::VectorXd& alpha() const { return alpha_; }

private:
    Dataset data_;
    KernelParams params_;
    double jitter_ = 0.0;
    Eigen::MatrixXd factor_;
    Eigen::VectorXd alpha_;
};

struct HyperBounds {
    double sigma_f_lo = 1e-3;
    double sigma_f_hi = 1e3;
    double length_lo = 1e-4;
    double length_hi = 1e2;
};

// Maximizes the log marginal likelihood over a log-space search: the
// initial params plus `starts` log-uniform random starts, each refined by
// `iterations` golden-section steps alternating between the two
// coordinates. Deterministic given the rng state; never returns params
// outside the bounds. Falls back to the initial params when every
// candidate fails to factorize.
KernelParams optimize_hyperparameters(const Dataset& data, KernelKind kind,
                                      const HyperBounds& bounds,
                                      const KernelParams& init, Rng& rng,
                                      int starts = 32, int iterations = 50);

// GP over a search space: inputs are mapped to the unit cube and outputs
// optionally standardized before fitting; predictions are returned on the
// original scale. Hyperparameters are re-optimized on every fit (t >= 2).
class Surrogate {
public:
    struct Options {
        KernelKind kind = KernelKind::SquaredExponential;
        HyperBounds bounds;
        KernelParams init{KernelKind::SquaredExponential, 1.0, 0.25};
        bool standardize_y = true;
        int starts = 32;
        int iterations = 50;
    };

    static Surrogate fit(const SearchSpace& space, const Dataset& raw,
                         const Options& options, Rng& rng);

    GpModel::Prediction predict(const Point& x) const;

    const KernelParams& params() const { return gp_->params(); }
    const GpModel& gp() const { return *gp_; }

private:
    SearchSpace space_{std::vector<double>{0.0}, std::vector<double>{1.0}};
    double y_shift_ = 0.0;
    double y_scale_ = 1.0;
    std::optional<GpModel> gp_;
};

} // namespace bbo
