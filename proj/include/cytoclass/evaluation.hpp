#ifndef CYTOCLASS_EVALUATION_HPP
#define CYTOCLASS_EVALUATION_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

/// 2x2 actual-vs-predicted counts. Row = actual, column = predicted, class
/// order A then N; so tp() is actual-A predicted-A.
struct ConfusionMatrix {
    std::size_t counts[2][2] = {{0, 0}, {0, 0}};

    static std::size_t index(Diagnosis d) { return d == Diagnosis::A ? 0 : 1; }

    std::size_t tp() const { return counts[0][0]; }  // actual A, predicted A
    std::size_t fn() const { return counts[0][1]; }  // actual A, predicted N
    std::size_t fp() const { return counts[1][0]; }  // actual N, predicted A
    std::size_t tn() const { return counts[1][1]; }  // actual N, predicted N
    std::size_t total() const { return tp() + fn() + fp() + tn(); }

    bool operator==(const ConfusionMatrix& o) const {
        return tp() == o.tp() && fn() == o.fn() && fp() == o.fp() && tn() == o.tn();
    }
};

inline ConfusionMatrix confusion(const std::vector<std::pair<Diagnosis, Diagnosis>>& pairs) {
    if (pairs.empty()) throw DataError("confusion: empty prediction list");
    ConfusionMatrix cm;
    for (const auto& [actual, predicted] : pairs)
        ++cm.counts[ConfusionMatrix::index(actual)][ConfusionMatrix::index(predicted)];
    return cm;
}

/// Error rates in two families that must never be conflated:
///  - fnr / fpr here use predicted-column denominators (standard names:
///    false omission rate FN/(FN+TN) and false discovery rate FP/(TP+FP));
///  - sensitivity/specificity use the usual actual-row denominators.
/// A rate whose denominator is empty is left unset.
struct RateReport {
    double overall_error = 0.0;
    std::optional<double> fnr_paper;  // FN / predicted-N total
    std::optional<double> fpr_paper;  // FP / predicted-A total
    std::optional<double> sensitivity;
    std::optional<double> specificity;
};

inline RateReport rates(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DataError("rates: empty confusion matrix");
    RateReport r;
    const double total = static_cast<double>(cm.total());
    r.overall_error = static_cast<double>(cm.fp() + cm.fn()) / total;
    const std::size_t pred_n = cm.fn() + cm.tn();
    const std::size_t pred_a = cm.tp() + cm.fp();
    const std::size_t actual_a = cm.tp() + cm.fn();
    const std::size_t actual_n = cm.fp() + cm.tn();
    if (pred_n > 0) r.fnr_paper = static_cast<double>(cm.fn()) / static_cast<double>(pred_n);
    if (pred_a > 0) r.fpr_paper = static_cast<double>(cm.fp()) / static_cast<double>(pred_a);
    if (actual_a > 0) r.sensitivity = static_cast<double>(cm.tp()) / static_cast<double>(actual_a);
    if (actual_n > 0) r.specificity = static_cast<double>(cm.tn()) / static_cast<double>(actual_n);
    return r;
}

/// Round half away from zero to `decimals` places, for display.
inline double round_half_away(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return (v >= 0.0 ? std::floor(v * scale + 0.5) : std::ceil(v * scale - 0.5)) / scale;
}

namespace detail {

inline std::string fmt2(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", round_half_away(*v, 2));
    return buf;
}

}  // namespace detail

/// Comparison table: one row per rate, one column per model. Values printed to
/// 2 decimals (half away from zero); use the CSV emitters for full precision.
inline std::string compare_models(const std::vector<std::pair<std::string, RateReport>>& reports) {
    if (reports.empty()) throw DataError("compare_models: no reports");
    std::ostringstream out;
    out << "Rate";
    for (const auto& [name, r] : reports) out << "," << name;
    out << "\n";
    auto row = [&](const std::string& label, auto getter) {
        out << label;
        for (const auto& [name, r] : reports) out << "," << detail::fmt2(getter(r));
        out << "\n";
    };
    row("Overall Error Rate", [](const RateReport& r) { return std::optional<double>(r.overall_error); });
    row("False Negative Rate", [](const RateReport& r) { return r.fnr_paper; });
    row("False Positive Rate", [](const RateReport& r) { return r.fpr_paper; });
    row("Sensitivity", [](const RateReport& r) { return r.sensitivity; });
    row("Specificity", [](const RateReport& r) { return r.specificity; });
    return out.str();
}

}  // namespace cyto

#endif  // CYTOCLASS_EVALUATION_HPP
