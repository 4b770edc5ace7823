#ifndef CYTOCLASS_DATASET_HPP
#define CYTOCLASS_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace cyto {

/// Raised for malformed or inconsistent input data. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a numerical routine cannot proceed (zero variance, divergence).
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Diagnosis { A, N };  // A = abnormal (malignant), N = normal (benign)

inline char diagnosis_code(Diagnosis d) { return d == Diagnosis::A ? 'A' : 'N'; }

inline Diagnosis diagnosis_from_code(char c) {
    if (c == 'A') return Diagnosis::A;
    if (c == 'N') return Diagnosis::N;
    throw DataError(std::string("unknown diagnosis code '") + c + "'");
}

struct Sample {
    std::string id;
    Diagnosis diagnosis;
    std::vector<double> features;
};

/// Ordered feature schema plus a row-major sample collection. Immutable by
/// convention: build once, then share freely.
class Dataset {
public:
    Dataset(std::vector<std::string> schema, std::vector<Sample> samples)
        : schema_(std::move(schema)), samples_(std::move(samples)) {
        if (schema_.empty()) throw DataError("dataset schema must have width >= 1");
        if (samples_.empty()) throw DataError("dataset must contain at least one sample");
        std::unordered_set<std::string> seen;
        for (const Sample& s : samples_) {
            if (s.features.size() != schema_.size())
                throw DataError("sample '" + s.id + "' width " +
                                std::to_string(s.features.size()) + " != schema width " +
                                std::to_string(schema_.size()));
            for (double v : s.features)
                if (!std::isfinite(v))
                    throw DataError("non-finite feature value in sample '" + s.id + "'");
            if (!seen.insert(s.id).second)
                throw DataError("duplicate sample id '" + s.id + "'");
        }
    }

    const std::vector<std::string>& schema() const { return schema_; }
    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t width() const { return schema_.size(); }
    std::size_t size() const { return samples_.size(); }

    std::size_t feature_index(const std::string& name) const {
        auto it = std::find(schema_.begin(), schema_.end(), name);
        if (it == schema_.end()) throw DataError("unknown feature '" + name + "'");
        return static_cast<std::size_t>(it - schema_.begin());
    }

    bool has_feature(const std::string& name) const {
        return std::find(schema_.begin(), schema_.end(), name) != schema_.end();
    }

    /// Column view of one feature, in sample order.
    std::vector<double> column(std::size_t j) const {
        std::vector<double> out;
        out.reserve(samples_.size());
        for (const Sample& s : samples_) out.push_back(s.features[j]);
        return out;
    }

    std::vector<double> column(const std::string& name) const {
        return column(feature_index(name));
    }

    bool operator==(const Dataset& other) const {
        if (schema_ != other.schema_ || samples_.size() != other.samples_.size()) return false;
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const Sample& a = samples_[i];
            const Sample& b = other.samples_[i];
            if (a.id != b.id || a.diagnosis != b.diagnosis || a.features != b.features)
                return false;
        }
        return true;
    }

private:
    std::vector<std::string> schema_;
    std::vector<Sample> samples_;
};

/// The ten mean cytology features, in source column order (fields 3-12 of a
/// 32-field WDBC record).
inline const std::vector<std::string>& wdbc_mean_feature_names() {
    static const std::vector<std::string> names = {
        "radius",    "texture",  "perimeter",      "area",     "smoothness",
        "compactness", "concavity", "concave points", "symmetry", "fdimension"};
    return names;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string& field, std::size_t record_no) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        throw DataError("record " + std::to_string(record_no) + ": unparsable real '" + field + "'");
    }
    if (pos != field.size() || !std::isfinite(v))
        throw DataError("record " + std::to_string(record_no) + ": unparsable real '" + field + "'");
    return v;
}

}  // namespace detail

/// Parse a UCI `wdbc.data` stream: `id,M|B,f1..f30` per line, no header.
/// Keeps the ten mean features only and maps M->A, B->N.
inline Dataset load_wdbc(std::istream& in) {
    constexpr std::size_t kFieldCount = 32;
    constexpr std::size_t kFirstFeature = 2;   // fields 3-12, zero-based 2-11
    constexpr std::size_t kMeanFeatures = 10;

    std::vector<Sample> samples;
    std::string line;
    std::size_t record_no = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();  // CRLF
        if (line.empty()) continue;
        ++record_no;
        auto fields = detail::split_fields(line);
        if (fields.size() != kFieldCount)
            throw DataError("record " + std::to_string(record_no) + ": expected " +
                            std::to_string(kFieldCount) + " fields, got " +
                            std::to_string(fields.size()));
        Sample s;
        s.id = fields[0];
        if (fields[1] == "M")
            s.diagnosis = Diagnosis::A;
        else if (fields[1] == "B")
            s.diagnosis = Diagnosis::N;
        else
            throw DataError("record " + std::to_string(record_no) +
                            ": unknown diagnosis code '" + fields[1] + "'");
        s.features.reserve(kMeanFeatures);
        for (std::size_t j = kFirstFeature; j < kFirstFeature + kMeanFeatures; ++j)
            s.features.push_back(detail::parse_real(fields[j], record_no));
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw DataError("empty source");
    return Dataset(wdbc_mean_feature_names(), std::move(samples));
}

struct DataSplit {
    Dataset train;
    Dataset test;
    long long seed;
    std::string method;  // always "stratified"
};

/// Stratified-by-diagnosis split. Membership is a pure function of
/// (ids, diagnoses, train_count, seed): samples are partitioned by class in
/// source order, each class is shuffled by a class-keyed seeded generator, and
/// the per-class prefix of round(train_count * class share) entries (adjusted
/// to hit train_count exactly) goes to train.
inline DataSplit train_test_split(const Dataset& ds, std::size_t train_count, long long seed) {
    const std::size_t n = ds.size();
    if (train_count == 0 || train_count >= n)
        throw DataError("train_count " + std::to_string(train_count) +
                        " out of range (0, " + std::to_string(n) + ")");

    std::vector<std::size_t> idx_a, idx_n;
    for (std::size_t i = 0; i < n; ++i)
        (ds.samples()[i].diagnosis == Diagnosis::A ? idx_a : idx_n).push_back(i);
    if (idx_a.empty() || idx_n.empty())
        throw DataError("stratified split requires samples of both classes");

    auto count_a = static_cast<std::size_t>(
        std::llround(static_cast<double>(train_count) * static_cast<double>(idx_a.size()) /
                     static_cast<double>(n)));
    // Adjust so the class counts sum to train_count and leave both test sides valid.
    std::size_t lo = train_count > idx_n.size() ? train_count - idx_n.size() : 0;
    std::size_t hi = std::min(idx_a.size(), train_count);
    count_a = std::clamp(count_a, lo, hi);
    std::size_t count_n = train_count - count_a;

    auto shuffle_class = [&](std::vector<std::size_t>& idx, unsigned long long salt) {
        std::mt19937_64 rng(static_cast<unsigned long long>(seed) * 0x9E3779B97F4A7C15ULL + salt);
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::uniform_int_distribution<std::size_t> pick(0, i - 1);
            std::swap(idx[i - 1], idx[pick(rng)]);
        }
    };
    shuffle_class(idx_a, 1);
    shuffle_class(idx_n, 2);

    std::set<std::size_t> train_idx;
    for (std::size_t i = 0; i < count_a; ++i) train_idx.insert(idx_a[i]);
    for (std::size_t i = 0; i < count_n; ++i) train_idx.insert(idx_n[i]);

    std::vector<Sample> train_samples, test_samples;
    for (std::size_t i = 0; i < n; ++i) {
        (train_idx.count(i) ? train_samples : test_samples).push_back(ds.samples()[i]);
    }
    return DataSplit{Dataset(ds.schema(), std::move(train_samples)),
                     Dataset(ds.schema(), std::move(test_samples)), seed, "stratified"};
}

/// Project a dataset onto the named features, in `keep` order.
inline Dataset select_features(const Dataset& ds, const std::vector<std::string>& keep) {
    if (keep.empty()) throw DataError("feature selection list is empty");
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> cols;
    cols.reserve(keep.size());
    for (const std::string& name : keep) {
        if (!seen.insert(name).second)
            throw DataError("duplicated feature name '" + name + "'");
        cols.push_back(ds.feature_index(name));
    }
    std::vector<Sample> samples;
    samples.reserve(ds.size());
    for (const Sample& s : ds.samples()) {
        Sample p{s.id, s.diagnosis, {}};
        p.features.reserve(cols.size());
        for (std::size_t j : cols) p.features.push_back(s.features[j]);
        samples.push_back(std::move(p));
    }
    return Dataset(keep, std::move(samples));
}

}  // namespace cyto

#endif  // CYTOCLASS_DATASET_HPP
