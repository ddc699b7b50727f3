#include "bbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bbo/errors.hpp"

namespace bbo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

Eigen::MatrixXd squared_distance_matrix(const std::vector<Point>& pts) {
    const Eigen::Index t = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd d2(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        d2(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < t; ++j) {
            const double v = squared_distance(pts[static_cast<std::size_t>(i)],
                                              pts[static_cast<std::size_t>(j)]);
            d2(i, j) = v;
            d2(j, i) = v;
        }
    }
    return d2;
}

Eigen::MatrixXd gram_from_sq_dist(const Eigen::MatrixXd& d2, const KernelParams& params) {
    const Eigen::Index t = d2.rows();
    Eigen::MatrixXd k(t, t);
    for (Eigen::Index i = 0; i < t; ++i) {
        k(i, i) = params.sigma_f;
        for (Eigen::Index j = i + 1; j < t; ++j) {
            const double v = kernel_from_sq_dist(params, d2(i, j));
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

struct Factorization {
    Eigen::MatrixXd factor; // lower triangular L with L L^T = K + jitter I
    Eigen::VectorXd alpha;  // (K + jitter I)^{-1} y
    double jitter = 0.0;
};

// Jitter escalation shared by fit() and the hyperparameter search.
std::optional<Factorization> factorize(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y,
                                       double sigma_f, double base_jitter, double cap_jitter) {
    Eigen::MatrixXd work = gram;
    const Eigen::Index t = gram.rows();
    for (double jitter = base_jitter * sigma_f;; jitter *= 10.0) {
        for (Eigen::Index i = 0; i < t; ++i) {
            work(i, i) = gram(i, i) + jitter;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(work);
        if (llt.info() == Eigen::Success) {
            Factorization f;
            f.factor = llt.matrixL();
            f.alpha = llt.solve(y);
            f.jitter = jitter;
            return f;
        }
        if (jitter >= cap_jitter * sigma_f) {
            return std::nullopt;
        }
    }
}

double log_likelihood_from_factor(const Factorization& f, const Eigen::VectorXd& y) {
    const double t = static_cast<double>(y.size());
    return -0.5 * y.dot(f.alpha) - f.factor.diagonal().array().log().sum() -
           0.5 * t * std::log(2.0 * std::numbers::pi);
}

} // namespace

double kernel_from_sq_dist(const KernelParams& params, double sq_dist) {
    const double r2 = sq_dist / params.length;
    switch (params.kind) {
    case KernelKind::SquaredExponential:
        return params.sigma_f * std::exp(-0.5 * r2);
    case KernelKind::Matern52: {
        const double s = std::sqrt(5.0 * r2);
        return params.sigma_f * (1.0 + s + 5.0 * r2 / 3.0) * std::exp(-s);
    }
    }
    return 0.0;
}

double kernel_value(const KernelParams& params, const Point& x, const Point& x2) {
    if (x.size() != x2.size()) {
        throw std::invalid_argument("kernel_value: dimension mismatch");
    }
    return kernel_from_sq_dist(params, squared_distance(x, x2));
}

double Dataset::min_value() const {
    if (values.empty()) {
        throw std::logic_error("Dataset::min_value: empty dataset");
    }
    return *std::min_element(values.begin(), values.end());
}

GpModel GpModel::fit(Dataset data, const KernelParams& params,
                     double base_jitter, double cap_jitter) {
    if (data.size() < 1) {
        throw std::invalid_argument("GpModel::fit: needs at least one observation");
    }
    if (params.sigma_f <= 0.0 || params.length <= 0.0) {
        throw std::invalid_argument("GpModel::fit: kernel params must be positive");
    }
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(data.values.data(),
                                          static_cast<Eigen::Index>(data.values.size()));
    const Eigen::MatrixXd gram = gram_from_sq_dist(squared_distance_matrix(data.points), params);
    auto f = factorize(gram, y, params.sigma_f, base_jitter, cap_jitter);
    if (!f) {
        throw NotPositiveDefinite("GpModel::fit: factorization failed at the jitter cap");
    }
    GpModel model;
    model.data_ = std::move(data);
    model.params_ = params;
    model.jitter_ = f->jitter;
    model.factor_ = std::move(f->factor);
    model.alpha_ = std::move(f->alpha);
    return model;
}

GpModel::Prediction GpModel::predict(const Point& x) const {
    const Eigen::Index t = static_cast<Eigen::Index>(data_.size());
    Eigen::VectorXd k(t);
    for (Eigen::Index i = 0; i < t; ++i) {
        k(i) = kernel_from_sq_dist(params_,
                                   squared_distance(x, data_.points[static_cast<std::size_t>(i)]));
    }
    Prediction out;
    out.mean = k.dot(alpha_);
    const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>().solve(k);
    out.var = std::max(0.0, params_.sigma_f - v.squaredNorm());
    return out;
}

double GpModel::log_marginal_likelihood() const {
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(data_.values.data(),
                                          static_cast<Eigen::Index>(data_.values.size()));
    Factorization f;
    f.factor = factor_;
    f.alpha = alpha_;
    return log_likelihood_from_factor(f, y);
}

namespace {

// Negative log likelihood over log-space params, with the squared-distance
// matrix precomputed once per dataset.
class NllObjective {
public:
    NllObjective(const Dataset& data, KernelKind kind)
        : d2_(squared_distance_matrix(data.points)),
          y_(Eigen::Map<const Eigen::VectorXd>(data.values.data(),
                                               static_cast<Eigen::Index>(data.values.size()))),
          kind_(kind) {}

    double operator()(double log_sigma_f, double log_length) const {
        KernelParams p{kind_, std::exp(log_sigma_f), std::exp(log_length)};
        const Eigen::MatrixXd gram = gram_from_sq_dist(d2_, p);
        auto f = factorize(gram, y_, p.sigma_f, 1e-8, 1e-2);
        if (!f) {
            return kInf;
        }
        const double ll = log_likelihood_from_factor(*f, y_);
        return std::isfinite(ll) ? -ll : kInf;
    }

private:
    Eigen::MatrixXd d2_;
    Eigen::VectorXd y_;
    KernelKind kind_;
};

} // namespace

KernelParams optimize_hyperparameters(const Dataset& data, KernelKind kind,
                                      const HyperBounds& bounds, const KernelParams& init,
                                      Rng& rng, int starts, int iterations) {
    if (data.size() < 2) {
        throw std::invalid_argument("optimize_hyperparameters: needs t >= 2");
    }
    const NllObjective nll(data, kind);

    const double lo[2] = {std::log(bounds.sigma_f_lo), std::log(bounds.length_lo)};
    const double hi[2] = {std::log(bounds.sigma_f_hi), std::log(bounds.length_hi)};

    double best_nll = kInf;
    double best_p[2] = {std::clamp(std::log(init.sigma_f), lo[0], hi[0]),
                        std::clamp(std::log(init.length), lo[1], hi[1])};
    const double init_p[2] = {best_p[0], best_p[1]};

    auto eval = [&](const double p[2]) { return nll(p[0], p[1]); };
    auto consider = [&](const double p[2], double v) {
        if (v < best_nll) {
            best_nll = v;
            best_p[0] = p[0];
            best_p[1] = p[1];
        }
    };

    constexpr double inv_phi = 0.6180339887498949; // (sqrt(5)-1)/2
    // Golden-section steps are spread over rounds that alternate between
    // the two coordinates, re-centering the bracket each round.
    const int rounds = 5;
    const int steps = std::max(1, iterations / (rounds * 2));

    for (int s = 0; s < starts + 1; ++s) {
        double p[2];
        if (s == 0) {
            p[0] = init_p[0];
            p[1] = init_p[1];
        } else {
            p[0] = rng.uniform(lo[0], hi[0]);
            p[1] = rng.uniform(lo[1], hi[1]);
        }
        double fp = eval(p);
        consider(p, fp);
        if (!std::isfinite(fp)) {
            continue;
        }
        double halfwidth[2] = {(hi[0] - lo[0]) / 2.0, (hi[1] - lo[1]) / 2.0};
        for (int round = 0; round < rounds; ++round) {
            for (int c = 0; c < 2; ++c) {
                double a = std::max(lo[c], p[c] - halfwidth[c]);
                double b = std::min(hi[c], p[c] + halfwidth[c]);
                double x1 = b - inv_phi * (b - a);
                double x2 = a + inv_phi * (b - a);
                double probe[2] = {p[0], p[1]};
                probe[c] = x1;
                double f1 = eval(probe);
                consider(probe, f1);
                probe[c] = x2;
                double f2 = eval(probe);
                consider(probe, f2);
                for (int it = 0; it < steps; ++it) {
                    if (f1 <= f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - inv_phi * (b - a);
                        probe[c] = x1;
                        f1 = eval(probe);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + inv_phi * (b - a);
                        probe[c] = x2;
                        f2 = eval(probe);
                    }
                    consider(probe, f1 <= f2 ? f1 : f2);
                }
                const double px = f1 <= f2 ? x1 : x2;
                const double pf = std::min(f1, f2);
                if (pf < fp) {
                    p[c] = px;
                    fp = pf;
                }
            }
            halfwidth[0] *= 0.15;
            halfwidth[1] *= 0.15;
        }
    }

    if (!std::isfinite(best_nll)) {
        return KernelParams{kind, std::exp(init_p[0]), std::exp(init_p[1])};
    }
    return KernelParams{kind, std::exp(best_p[0]), std::exp(best_p[1])};
}

Surrogate Surrogate::fit(const SearchSpace& space, const Dataset& raw,
                         const Options& options, Rng& rng) {
    Surrogate s;
    s.space_ = space;

    Dataset unit;
    unit.points.reserve(raw.size());
    for (const Point& x : raw.points) {
        unit.points.push_back(space.to_unit(x));
    }
    if (options.standardize_y && raw.size() >= 2) {
        double mean = 0.0;
        for (double v : raw.values) {
            mean += v;
        }
        mean /= static_cast<double>(raw.size());
        double var = 0.0;
        for (double v : raw.values) {
            var += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(var / static_cast<double>(raw.size()));
        s.y_shift_ = mean;
        s.y_scale_ = sd > 0.0 ? sd : 1.0;
    }
    unit.values.reserve(raw.size());
    for (double v : raw.values) {
        unit.values.push_back((v - s.y_shift_) / s.y_scale_);
    }

    KernelParams params{options.kind, options.init.sigma_f, options.init.length};
    if (unit.size() >= 2) {
        params = optimize_hyperparameters(unit, options.kind, options.bounds, params, rng,
                                          options.starts, options.iterations);
    }
    s.gp_ = GpModel::fit(std::move(unit), params);
    return s;
}

GpModel::Prediction Surrogate::predict(const Point& x) const {
    GpModel::Prediction p = gp_->predict(space_.to_unit(x));
    p.mean = p.mean * y_scale_ + y_shift_;
    p.var *= y_scale_ * y_scale_;
    return p;
}

} // namespace bbo
