// Shared fixtures, random generators, and independent oracles for the test
// suites. Oracles here deliberately use different code paths (long double
// accumulation, brute-force enumeration, finite differences) than the library.
#ifndef CYTOCLASS_TEST_HELPERS_HPP
#define CYTOCLASS_TEST_HELPERS_HPP

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace testutil {

inline const cyto::Dataset& wdbc() {
    static const cyto::Dataset ds = [] {
        std::ifstream in(WDBC_DATA_PATH);
        REQUIRE_MESSAGE(bool(in), "missing fixture " WDBC_DATA_PATH);
        return cyto::load_wdbc(in);
    }();
    return ds;
}

// Long-double two-pass moment oracle, independent of cyto::compute_stats.
struct MomentOracle {
    double mean, sample_std, skewness, excess_kurtosis;
};

inline MomentOracle moments(const std::vector<double>& v) {
    long double mean = 0.0L;
    for (double x : v) mean += x;
    mean /= static_cast<long double>(v.size());
    long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L, ss = 0.0L;
    for (double x : v) {
        const long double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        ss += d * d;
    }
    const long double n = static_cast<long double>(v.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    MomentOracle o;
    o.mean = static_cast<double>(mean);
    o.sample_std = static_cast<double>(std::sqrt(ss / (n - 1.0L)));
    o.skewness = static_cast<double>(m3 / std::pow(m2, 1.5L));
    o.excess_kurtosis = static_cast<double>(m4 / (m2 * m2) - 3.0L);
    return o;
}

inline double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    long double mx = 0.0L, my = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<long double>(x.size());
    my /= static_cast<long double>(x.size());
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double lo = -10.0,
                                         double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// Random labeled dataset with values in [0,1].
inline cyto::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t width) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::bernoulli_distribution label(0.5);
    std::vector<std::string> schema;
    for (std::size_t j = 0; j < width; ++j) schema.push_back("f" + std::to_string(j));
    std::vector<cyto::Sample> samples;
    bool has_a = false, has_n = false;
    for (std::size_t i = 0; i < n; ++i) {
        cyto::Sample s;
        s.id = "s" + std::to_string(i);
        s.diagnosis = label(rng) ? cyto::Diagnosis::A : cyto::Diagnosis::N;
        // Force both classes once the tail is reached.
        if (i + 2 == n && !has_a) s.diagnosis = cyto::Diagnosis::A;
        if (i + 1 == n && !has_n) s.diagnosis = cyto::Diagnosis::N;
        (s.diagnosis == cyto::Diagnosis::A ? has_a : has_n) = true;
        for (std::size_t j = 0; j < width; ++j) s.features.push_back(dist(rng));
        samples.push_back(std::move(s));
    }
    return cyto::Dataset(schema, std::move(samples));
}

// Synthetic 32-field WDBC-format line.
inline std::string wdbc_line(const std::string& id, const std::string& code,
                             const std::vector<double>& mean_features, double filler = 0.5) {
    std::string line = id + "," + code;
    for (double v : mean_features) line += "," + std::to_string(v);
    for (int i = 0; i < 20; ++i) line += "," + std::to_string(filler);
    return line;
}

}  // namespace testutil

#endif
