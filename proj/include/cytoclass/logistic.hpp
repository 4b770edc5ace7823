#ifndef CYTOCLASS_LOGISTIC_HPP
#define CYTOCLASS_LOGISTIC_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

struct LogisticFitParams {
    std::size_t max_iter = 200;
    double grad_tol = 1e-6;  // gradient max-norm stopping criterion
    double l2 = 1e-6;        // ridge penalty on weights (not the intercept)
};

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double final_grad_norm = 0.0;
    std::vector<std::string> schema;
    std::vector<double> objective_trace;  // penalized log-likelihood per accepted step
};

/// Overflow-safe sigmoid.
inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// log(1 + e^z) without overflow.
inline double log1p_exp(double z) {
    if (z > 0.0) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

namespace detail {

// Penalized log-likelihood: sum(y*s - log(1+e^s)) - l2/2 * |w|^2, s = w.x + b.
inline double logistic_objective(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y, const std::vector<double>& w,
                                 double b, double l2) {
    double obj = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = b;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[i][j];
        obj += static_cast<double>(y[i]) * s - log1p_exp(s);
    }
    double penalty = 0.0;
    for (double wj : w) penalty += wj * wj;
    return obj - 0.5 * l2 * penalty;
}

// Gradient over (w_0..w_{d-1}, b).
inline std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                             const std::vector<int>& y,
                                             const std::vector<double>& w, double b, double l2) {
    const std::size_t d = w.size();
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = b;
        for (std::size_t j = 0; j < d; ++j) s += w[j] * x[i][j];
        const double resid = static_cast<double>(y[i]) - sigmoid(s);
        for (std::size_t j = 0; j < d; ++j) g[j] += resid * x[i][j];
        g[d] += resid;
    }
    for (std::size_t j = 0; j < d; ++j) g[j] -= l2 * w[j];
    return g;
}

// Solve H * step = g for the Newton direction; H is the negated Hessian
// X^T S X + l2 I (positive definite). Gaussian elimination with partial
// pivoting; returns false when the system is numerically singular.
inline bool solve_spd(std::vector<std::vector<double>> h, std::vector<double> g,
                      std::vector<double>& step) {
    const std::size_t d = g.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(h[r][col]) > std::abs(h[pivot][col])) pivot = r;
        if (std::abs(h[pivot][col]) < 1e-12) return false;
        std::swap(h[pivot], h[col]);
        std::swap(g[pivot], g[col]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double f = h[r][col] / h[col][col];
            for (std::size_t c = col; c < d; ++c) h[r][c] -= f * h[col][c];
            g[r] -= f * g[col];
        }
    }
    step.assign(d, 0.0);
    for (std::size_t col = d; col-- > 0;) {
        double v = g[col];
        for (std::size_t c = col + 1; c < d; ++c) v -= h[col][c] * step[c];
        step[col] = v / h[col][col];
    }
    return true;
}

}  // namespace detail

/// Fit on raw rows; y entries are 1 for A and 0 for N. Damped Newton ascent
/// with backtracking: every accepted step does not decrease the penalized
/// log-likelihood; falls back to the gradient direction when the Newton solve
/// fails.
inline LogisticModel logit_fit_raw(const std::vector<std::vector<double>>& x,
                                   const std::vector<int>& y, std::size_t width,
                                   const LogisticFitParams& params = {}) {
    bool has_a = false, has_n = false;
    for (int yi : y) (yi ? has_a : has_n) = true;
    if (!has_a || !has_n)
        throw NumericError("logistic fit requires both classes in the training set");

    const std::size_t d = width;
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    LogisticModel m;

    double obj = detail::logistic_objective(x, y, w, b, params.l2);
    m.objective_trace.push_back(obj);

    for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
        auto g = detail::logistic_gradient(x, y, w, b, params.l2);
        double gnorm = 0.0;
        for (double gi : g) gnorm = std::max(gnorm, std::abs(gi));
        m.final_grad_norm = gnorm;
        m.iterations = iter;
        if (gnorm < params.grad_tol) {
            m.converged = true;
            break;
        }

        // Negated Hessian: X^T S X + l2 I over (w, b), S = p(1-p).
        std::vector<std::vector<double>> h(d + 1, std::vector<double>(d + 1, 0.0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            double s = b;
            for (std::size_t j = 0; j < d; ++j) s += w[j] * x[i][j];
            const double p = sigmoid(s);
            const double sii = p * (1.0 - p);
            for (std::size_t j = 0; j <= d; ++j) {
                const double xj = j < d ? x[i][j] : 1.0;
                for (std::size_t k = j; k <= d; ++k) {
                    const double xk = k < d ? x[i][k] : 1.0;
                    h[j][k] += sii * xj * xk;
                }
            }
        }
        for (std::size_t j = 0; j < d; ++j) h[j][j] += params.l2;
        for (std::size_t j = 0; j <= d; ++j)
            for (std::size_t k = 0; k < j; ++k) h[j][k] = h[k][j];

        std::vector<double> step;
        if (!detail::solve_spd(h, g, step)) step = g;  // gradient-ascent fallback

        // Backtracking line search on the penalized log-likelihood.
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> w2 = w;
            for (std::size_t j = 0; j < d; ++j) w2[j] += alpha * step[j];
            const double b2 = b + alpha * step[d];
            const double obj2 = detail::logistic_objective(x, y, w2, b2, params.l2);
            if (std::isfinite(obj2) && obj2 >= obj) {
                w = std::move(w2);
                b = b2;
                obj = obj2;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no ascent direction left at machine precision
        m.objective_trace.push_back(obj);
    }
    if (!std::isfinite(obj)) throw NumericError("logistic objective diverged");

    m.weights = std::move(w);
    m.intercept = b;
    return m;
}

inline LogisticModel logit_fit(const Dataset& train, const LogisticFitParams& params = {}) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    x.reserve(train.size());
    y.reserve(train.size());
    for (const Sample& s : train.samples()) {
        x.push_back(s.features);
        y.push_back(s.diagnosis == Diagnosis::A ? 1 : 0);
    }
    LogisticModel m = logit_fit_raw(x, y, train.width(), params);
    m.schema = train.schema();
    return m;
}

inline double predict_proba(const LogisticModel& m, std::span<const double> features) {
    if (features.size() != m.weights.size())
        throw DataError("predict_proba: schema mismatch (" + std::to_string(features.size()) +
                        " vs " + std::to_string(m.weights.size()) + ")");
    double s = m.intercept;
    for (std::size_t j = 0; j < features.size(); ++j) s += m.weights[j] * features[j];
    double p = sigmoid(s);
    // Keep probabilities strictly inside (0,1) even for extreme scores.
    return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

struct LogitPrediction {
    Diagnosis label;
    double confidence;  // max(p, 1-p)
};

inline LogitPrediction logit_predict(const LogisticModel& m, std::span<const double> features,
                                     double threshold = 0.5) {
    const double p = predict_proba(m, features);
    // p == threshold assigns A: missing a malignant case costs most.
    if (p >= threshold) return {Diagnosis::A, std::max(p, 1.0 - p)};
    return {Diagnosis::N, std::max(p, 1.0 - p)};
}

}  // namespace cyto

#endif  // CYTOCLASS_LOGISTIC_HPP
