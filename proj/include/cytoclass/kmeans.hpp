#ifndef CYTOCLASS_KMEANS_HPP
#define CYTOCLASS_KMEANS_HPP

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"
#include "cytoclass/stats.hpp"

namespace cyto {

struct KMeansParams {
    std::size_t k = 2;
    long long seed = 0;
    std::size_t restarts = 10;
    std::size_t max_iter = 100;
    double tol = 1e-6;  // max centroid coordinate movement
};

struct KMeansModel {
    std::size_t k;
    std::vector<std::vector<double>> centroids;  // k x d
    long long seed;
    double wcss;  // sum of squared distances to nearest centroid
    std::size_t iterations;
    std::size_t restarts;
    std::vector<double> wcss_trace;  // per-iteration wcss of the winning restart

    std::size_t assign(std::span<const double> x) const {
        if (x.size() != centroids[0].size())
            throw DataError("assign: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                            std::to_string(centroids[0].size()) + ")");
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            double d = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double diff = x[j] - centroids[c][j];
                d += diff * diff;
            }
            if (d < best_d) {  // ties break toward the lower index
                best_d = d;
                best = c;
            }
        }
        return best;
    }
};

namespace detail {

inline double sqdist(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        d += diff * diff;
    }
    return d;
}

struct LloydResult {
    std::vector<std::vector<double>> centroids;
    double wcss;
    std::size_t iterations;
    std::vector<double> wcss_trace;
};

inline double total_wcss(const std::vector<std::vector<double>>& points,
                         const std::vector<std::vector<double>>& centroids) {
    double wcss = 0.0;
    for (const auto& p : points) {
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& c : centroids) best_d = std::min(best_d, sqdist(p, c));
        wcss += best_d;
    }
    return wcss;
}

inline LloydResult lloyd(const std::vector<std::vector<double>>& points,
                         std::vector<std::vector<double>> centroids, std::size_t max_iter,
                         double tol) {
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    const std::size_t d = points[0].size();
    std::vector<std::size_t> assignment(n, 0);
    std::vector<double> trace;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double dist = sqdist(points[i], centroids[c]);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            assignment[i] = best;
        }

        std::vector<std::vector<double>> next(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) next[assignment[i]][j] += points[i][j];
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Reseed an empty cluster with the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dist = sqdist(points[i], centroids[assignment[i]]);
                    if (dist > far_d) {
                        far_d = dist;
                        far = i;
                    }
                }
                next[c] = points[far];
            } else {
                for (std::size_t j = 0; j < d; ++j) next[c][j] /= static_cast<double>(counts[c]);
            }
        }

        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < d; ++j)
                movement = std::max(movement, std::abs(next[c][j] - centroids[c][j]));
        centroids = std::move(next);
        trace.push_back(total_wcss(points, centroids));
        if (movement < tol) {
            ++iter;
            break;
        }
    }

    const double wcss = total_wcss(points, centroids);
    return {std::move(centroids), wcss, iter, std::move(trace)};
}

}  // namespace detail

inline KMeansModel kmeans_fit(const Dataset& ds, const KMeansParams& params = {}) {
    if (params.k < 2) throw DataError("kmeans requires k >= 2");
    if (ds.size() < params.k)
        throw DataError("kmeans: fewer samples (" + std::to_string(ds.size()) + ") than k");

    std::vector<std::vector<double>> points;
    points.reserve(ds.size());
    for (const Sample& s : ds.samples()) points.push_back(s.features);

    std::mt19937_64 rng(static_cast<unsigned long long>(params.seed) * 0x9E3779B97F4A7C15ULL + 7);
    detail::LloydResult best{{}, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t r = 0; r < params.restarts; ++r) {
        // Initialize with k distinct data points, sampled uniformly.
        std::vector<std::size_t> chosen;
        while (chosen.size() < params.k) {
            std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
            const std::size_t c = pick(rng);
            bool dup = false;
            for (std::size_t prev : chosen)
                if (points[prev] == points[c]) dup = true;
            if (!dup) chosen.push_back(c);
        }
        std::vector<std::vector<double>> init;
        for (std::size_t c : chosen) init.push_back(points[c]);
        auto result = detail::lloyd(points, std::move(init), params.max_iter, params.tol);
        if (result.wcss < best.wcss) best = std::move(result);
    }
    return KMeansModel{params.k, std::move(best.centroids), params.seed, best.wcss,
                       best.iterations, params.restarts, std::move(best.wcss_trace)};
}

struct ClusterPurity {
    struct Row {
        std::size_t count_a = 0;
        std::size_t count_n = 0;
        double share_a = 0.0;
        double share_n = 0.0;
    };
    std::vector<Row> clusters;
};

inline ClusterPurity cluster_purity(const KMeansModel& m, const Dataset& ds) {
    ClusterPurity p;
    p.clusters.resize(m.k);
    for (const Sample& s : ds.samples()) {
        auto& row = p.clusters[m.assign(s.features)];
        (s.diagnosis == Diagnosis::A ? row.count_a : row.count_n)++;
    }
    for (auto& row : p.clusters) {
        const double total = static_cast<double>(row.count_a + row.count_n);
        if (total > 0.0) {
            row.share_a = static_cast<double>(row.count_a) / total;
            row.share_n = static_cast<double>(row.count_n) / total;
        }
    }
    return p;
}

struct ClusterImportance {
    std::vector<std::pair<std::string, double>> shares;  // sum to 1
};

/// Importance of feature f is |c1f - c2f| / sigma_f, normalized across features.
inline ClusterImportance feature_importance(const KMeansModel& m, const Dataset& ds) {
    if (m.k != 2) throw DataError("feature_importance requires k == 2");
    std::vector<double> raw(ds.width());
    double total = 0.0;
    for (std::size_t j = 0; j < ds.width(); ++j) {
        FeatureStats st = compute_stats(ds.column(j));
        if (st.std == 0.0)
            throw NumericError("feature '" + ds.schema()[j] + "' has zero variance");
        raw[j] = std::abs(m.centroids[0][j] - m.centroids[1][j]) / st.std;
        total += raw[j];
    }
    if (total == 0.0) throw NumericError("degenerate centroids");
    ClusterImportance imp;
    for (std::size_t j = 0; j < ds.width(); ++j)
        imp.shares.emplace_back(ds.schema()[j], raw[j] / total);
    return imp;
}

/// Append the 0/1 cluster assignment as a derived "cluster" feature.
inline Dataset attach_cluster_feature(const Dataset& ds, const KMeansModel& m) {
    if (ds.has_feature("cluster")) throw DataError("feature name collision: 'cluster'");
    std::vector<std::string> schema = ds.schema();
    schema.push_back("cluster");
    std::vector<Sample> out;
    out.reserve(ds.size());
    for (const Sample& s : ds.samples()) {
        Sample t = s;
        t.features.push_back(static_cast<double>(m.assign(s.features)));
        out.push_back(std::move(t));
    }
    return Dataset(std::move(schema), std::move(out));
}

}  // namespace cyto

#endif  // CYTOCLASS_KMEANS_HPP
