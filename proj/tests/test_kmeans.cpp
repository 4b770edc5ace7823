#include <doctest.h>

#include <algorithm>
#include <random>

#include "cytoclass/kmeans.hpp"
#include "cytoclass/scaler.hpp"
#include "helpers.hpp"

using namespace cyto;

namespace {

// Two well-separated blobs in [0,1]^d; blob 0 near 0.1, blob 1 near 0.9.
Dataset blob_dataset(std::mt19937_64& rng, std::size_t per_blob, std::size_t d) {
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<std::string> schema;
    for (std::size_t j = 0; j < d; ++j) schema.push_back("f" + std::to_string(j));
    std::vector<Sample> samples;
    for (std::size_t b = 0; b < 2; ++b) {
        const double center = b == 0 ? 0.1 : 0.9;
        for (std::size_t i = 0; i < per_blob; ++i) {
            Sample s;
            s.id = "b" + std::to_string(b) + "_" + std::to_string(i);
            s.diagnosis = b == 0 ? Diagnosis::N : Diagnosis::A;
            for (std::size_t j = 0; j < d; ++j)
                s.features.push_back(std::clamp(center + noise(rng), 0.0, 1.0));
            samples.push_back(std::move(s));
        }
    }
    return Dataset(schema, std::move(samples));
}

Dataset wdbc_normalized() {
    const Dataset& ds = testutil::wdbc();
    return MinMaxScaler::fit(ds).transform(ds);
}

}  // namespace

TEST_CASE("kmeans separates synthetic blobs exactly") {
    std::mt19937_64 rng(2);
    Dataset ds = blob_dataset(rng, 30, 4);
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 5});
    const std::size_t first = m.assign(ds.samples()[0].features);
    for (std::size_t i = 0; i < 30; ++i) CHECK(m.assign(ds.samples()[i].features) == first);
    for (std::size_t i = 30; i < 60; ++i) CHECK(m.assign(ds.samples()[i].features) == 1 - first);
}

TEST_CASE("kmeans fixed point: nearest assignment and centroid-as-mean") {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 20; ++it) {
        Dataset ds = testutil::random_dataset(rng, 30 + it, 3);
        KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = it});
        std::vector<std::vector<double>> sums(m.k, std::vector<double>(ds.width(), 0.0));
        std::vector<std::size_t> counts(m.k, 0);
        for (const Sample& s : ds.samples()) {
            const std::size_t c = m.assign(s.features);
            // Nearest-centroid condition, checked directly.
            for (std::size_t other = 0; other < m.k; ++other) {
                double dc = 0, dother = 0;
                for (std::size_t j = 0; j < ds.width(); ++j) {
                    dc += (s.features[j] - m.centroids[c][j]) * (s.features[j] - m.centroids[c][j]);
                    dother += (s.features[j] - m.centroids[other][j]) *
                              (s.features[j] - m.centroids[other][j]);
                }
                CHECK(dc <= dother + 1e-12);
            }
            for (std::size_t j = 0; j < ds.width(); ++j) sums[c][j] += s.features[j];
            ++counts[c];
        }
        for (std::size_t c = 0; c < m.k; ++c) {
            REQUIRE(counts[c] > 0);
            for (std::size_t j = 0; j < ds.width(); ++j)
                CHECK(m.centroids[c][j] ==
                      doctest::Approx(sums[c][j] / counts[c]).epsilon(1e-6));
        }
    }
}

TEST_CASE("kmeans determinism: identical inputs give identical centroids") {
    std::mt19937_64 rng(13);
    Dataset ds = testutil::random_dataset(rng, 50, 4);
    KMeansModel a = kmeans_fit(ds, {.k = 2, .seed = 99});
    KMeansModel b = kmeans_fit(ds, {.k = 2, .seed = 99});
    CHECK(a.centroids == b.centroids);
    CHECK(a.wcss == b.wcss);
}

TEST_CASE("kmeans wcss trace is non-increasing (property)") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 50; ++it) {
        Dataset ds = testutil::random_dataset(rng, 20 + it, 2 + it % 3);
        KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = it});
        for (std::size_t i = 1; i < m.wcss_trace.size(); ++i)
            CHECK(m.wcss_trace[i] <= m.wcss_trace[i - 1] + 1e-12);
    }
}

TEST_CASE("kmeans input validation") {
    std::mt19937_64 rng(1);
    Dataset ds = testutil::random_dataset(rng, 3, 2);
    CHECK_THROWS_AS(kmeans_fit(ds, {.k = 5, .seed = 0}), DataError);
    CHECK_THROWS_AS(kmeans_fit(ds, {.k = 1, .seed = 0}), DataError);
}

TEST_CASE("assign tie and exact-centroid cases") {
    KMeansModel m{2, {{0.2, 0.2}, {0.8, 0.8}}, 0, 0.0, 0, 1, {}};
    CHECK(m.assign(std::vector<double>{0.2, 0.2}) == 0);
    CHECK(m.assign(std::vector<double>{0.8, 0.8}) == 1);
    CHECK(m.assign(std::vector<double>{0.5, 0.5}) == 0);  // equidistant -> lower index
    CHECK(m.assign(std::vector<double>{0.5 + 1e-6, 0.5 + 1e-6}) == 1);
    CHECK_THROWS_AS(m.assign(std::vector<double>{0.5}), DataError);
}

TEST_CASE("cluster_purity counting oracle") {
    KMeansModel m{2, {{0.0}, {1.0}}, 0, 0.0, 0, 1, {}};
    std::vector<Sample> samples = {{"1", Diagnosis::A, {0.1}},
                                   {"2", Diagnosis::A, {0.0}},
                                   {"3", Diagnosis::A, {0.2}},
                                   {"4", Diagnosis::N, {0.1}},
                                   {"5", Diagnosis::N, {0.9}}};
    ClusterPurity p = cluster_purity(m, Dataset({"x"}, samples));
    CHECK(p.clusters[0].count_a == 3);
    CHECK(p.clusters[0].count_n == 1);
    CHECK(p.clusters[0].share_a == doctest::Approx(0.75));
    CHECK(p.clusters[0].share_n == doctest::Approx(0.25));
    CHECK(p.clusters[1].count_n == 1);
    CHECK(p.clusters[1].share_n == doctest::Approx(1.0));
}

TEST_CASE("cluster_purity all-N dataset") {
    std::mt19937_64 rng(3);
    std::vector<Sample> samples;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
        samples.push_back({"s" + std::to_string(i), Diagnosis::N, {u(rng)}});
    Dataset ds({"x"}, samples);
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 0});
    for (const auto& row : cluster_purity(m, ds).clusters)
        if (row.count_a + row.count_n > 0) CHECK(row.share_n == doctest::Approx(1.0));
}

TEST_CASE("WDBC clustering yields a high-purity normal cluster") {
    Dataset ds = wdbc_normalized();
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 0});
    ClusterPurity p = cluster_purity(m, ds);
    double best_n = 0.0;
    for (const auto& row : p.clusters) best_n = std::max(best_n, row.share_n);
    CHECK(best_n >= 0.85);
}

TEST_CASE("feature_importance shares and degenerate cases") {
    KMeansModel m{2, {{0.1, 0.5, 0.2}, {0.1, 0.5, 0.9}}, 0, 0.0, 0, 1, {}};
    std::mt19937_64 rng(10);
    Dataset ds = testutil::random_dataset(rng, 30, 3);
    ClusterImportance imp = feature_importance(m, ds);
    double total = 0.0;
    for (const auto& [name, share] : imp.shares) total += share;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(imp.shares[2].second == doctest::Approx(1.0));  // centroids differ only on f2

    KMeansModel degenerate{2, {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}, 0, 0.0, 0, 1, {}};
    CHECK_THROWS_AS(feature_importance(degenerate, ds), NumericError);
}

TEST_CASE("WDBC importance highlights compactness, smoothness, symmetry") {
    Dataset ds = wdbc_normalized();
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 0});
    ClusterImportance imp = feature_importance(m, ds);
    auto share = [&](const std::string& name) {
        for (const auto& [f, s] : imp.shares)
            if (f == name) return s;
        return -1.0;
    };
    CHECK(share("compactness") >= 0.05);
    CHECK(share("smoothness") >= 0.05);
    CHECK(share("symmetry") >= 0.05);
}

TEST_CASE("attach_cluster_feature appends the assignment column") {
    std::mt19937_64 rng(19);
    Dataset ds = blob_dataset(rng, 10, 3);
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 1});
    Dataset out = attach_cluster_feature(ds, m);
    CHECK(out.width() == ds.width() + 1);
    CHECK(out.schema().back() == "cluster");
    for (std::size_t i = 0; i < ds.size(); ++i)
        CHECK(out.samples()[i].features.back() ==
              static_cast<double>(m.assign(ds.samples()[i].features)));
    CHECK_THROWS_AS(attach_cluster_feature(out, m), DataError);
}

TEST_CASE("purity is permutation-invariant in cluster labels") {
    std::mt19937_64 rng(29);
    Dataset ds = testutil::random_dataset(rng, 40, 2);
    KMeansModel m = kmeans_fit(ds, {.k = 2, .seed = 3});
    KMeansModel swapped = m;
    std::swap(swapped.centroids[0], swapped.centroids[1]);
    ClusterPurity a = cluster_purity(m, ds);
    ClusterPurity b = cluster_purity(swapped, ds);
    CHECK(a.clusters[0].count_a == b.clusters[1].count_a);
    CHECK(a.clusters[0].count_n == b.clusters[1].count_n);
    CHECK(a.clusters[1].count_a == b.clusters[0].count_a);
}
