#ifndef CYTOCLASS_STATS_HPP
#define CYTOCLASS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

struct FeatureStats {
    double mean = 0.0;
    double std = 0.0;       // sample std, n-1 denominator
    double min = 0.0;
    double max = 0.0;
    double skewness = 0.0;  // g1 = m3 / m2^(3/2), moments with denominator n
    double kurtosis = 0.0;  // excess, g2 = m4 / m2^2 - 3
    bool moments_defined = false;  // false when std == 0
    std::size_t n = 0;
};

inline FeatureStats compute_stats(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw NumericError("compute_stats requires n >= 2");
    for (double v : series)
        if (!std::isfinite(v)) throw NumericError("non-finite value in series");

    FeatureStats st;
    st.n = n;
    st.min = *std::min_element(series.begin(), series.end());
    st.max = *std::max_element(series.begin(), series.end());
    double sum = 0.0;
    for (double v : series) sum += v;
    st.mean = sum / static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0, ss = 0.0;
    for (double v : series) {
        const double d = v - st.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        ss += d2;
    }
    const double dn = static_cast<double>(n);
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    st.std = std::sqrt(ss / (dn - 1.0));
    if (m2 > 0.0) {
        st.skewness = m3 / std::pow(m2, 1.5);
        st.kurtosis = m4 / (m2 * m2) - 3.0;
        st.moments_defined = true;
    }
    return st;
}

inline std::vector<double> zscore(std::span<const double> series) {
    FeatureStats st = compute_stats(series);
    if (st.std == 0.0) throw NumericError("zscore undefined for zero-variance series");
    std::vector<double> out;
    out.reserve(series.size());
    for (double v : series) out.push_back((v - st.mean) / st.std);
    return out;
}

struct OutlierEntry {
    std::string sample_id;
    std::string feature;
    double value;
    double z;
};

struct OutlierReport {
    std::vector<OutlierEntry> entries;  // advisory only, no sample is removed
    double threshold;
};

inline OutlierReport detect_outliers(const Dataset& ds, double threshold = 4.0) {
    OutlierReport report;
    report.threshold = threshold;
    for (std::size_t j = 0; j < ds.width(); ++j) {
        auto col = ds.column(j);
        FeatureStats st = compute_stats(col);
        if (st.std == 0.0)
            throw NumericError("feature '" + ds.schema()[j] + "' has zero variance");
        for (std::size_t i = 0; i < col.size(); ++i) {
            const double z = (col[i] - st.mean) / st.std;
            if (std::abs(z) > threshold)
                report.entries.push_back({ds.samples()[i].id, ds.schema()[j], col[i], z});
        }
    }
    return report;
}

struct NormalityEntry {
    std::string feature;
    double skewness;
    double kurtosis;
    bool pass;  // |skew| <= bound and |kurt| <= bound
};

struct NormalityScreen {
    std::vector<NormalityEntry> entries;
    double bound;
};

inline NormalityScreen normality_screen(const Dataset& ds, double bound = 2.0) {
    NormalityScreen screen;
    screen.bound = bound;
    for (std::size_t j = 0; j < ds.width(); ++j) {
        auto col = ds.column(j);
        if (col.size() < 4)
            throw NumericError("normality screen requires n >= 4 per feature");
        FeatureStats st = compute_stats(col);
        if (!st.moments_defined)
            throw NumericError("feature '" + ds.schema()[j] + "' has zero variance");
        screen.entries.push_back({ds.schema()[j], st.skewness, st.kurtosis,
                                  std::abs(st.skewness) <= bound && std::abs(st.kurtosis) <= bound});
    }
    return screen;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw NumericError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw NumericError("pearson requires n >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw NumericError("pearson undefined for zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CorrelationMatrix {
    std::vector<std::string> features;
    std::vector<std::vector<double>> r;  // symmetric, unit diagonal

    double at(const std::string& a, const std::string& b) const {
        return r[index(a)][index(b)];
    }

    std::size_t index(const std::string& name) const {
        auto it = std::find(features.begin(), features.end(), name);
        if (it == features.end()) throw DataError("unknown feature '" + name + "'");
        return static_cast<std::size_t>(it - features.begin());
    }
};

inline CorrelationMatrix correlation_matrix(const Dataset& ds) {
    CorrelationMatrix cm;
    cm.features = ds.schema();
    const std::size_t d = ds.width();
    std::vector<std::vector<double>> cols;
    cols.reserve(d);
    for (std::size_t j = 0; j < d; ++j) cols.push_back(ds.column(j));
    cm.r.assign(d, std::vector<double>(d, 1.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            cm.r[i][j] = cm.r[j][i] = pearson(cols[i], cols[j]);
    return cm;
}

struct DropRecommendation {
    std::string pivot;
    std::vector<std::pair<std::string, double>> dropped;  // (feature, |r| to pivot)
    double tau;

    std::vector<std::string> retained(const std::vector<std::string>& schema) const {
        std::vector<std::string> keep;
        for (const std::string& f : schema) {
            bool is_dropped = false;
            for (const auto& [name, r] : dropped)
                if (name == f) is_dropped = true;
            if (!is_dropped) keep.push_back(f);
        }
        return keep;
    }
};

/// Drop every feature whose |r| to the pivot meets tau; the pivot itself is kept.
inline DropRecommendation recommend_drops(const CorrelationMatrix& cm, const std::string& pivot,
                                          double tau = 0.65) {
    const std::size_t p = cm.index(pivot);
    DropRecommendation rec;
    rec.pivot = pivot;
    rec.tau = tau;
    for (std::size_t j = 0; j < cm.features.size(); ++j) {
        if (j == p) continue;
        const double r = std::abs(cm.r[p][j]);
        if (r >= tau) rec.dropped.emplace_back(cm.features[j], r);
    }
    return rec;
}

}  // namespace cyto

#endif  // CYTOCLASS_STATS_HPP
