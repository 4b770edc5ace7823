#ifndef CYTOCLASS_PIPELINE_HPP
#define CYTOCLASS_PIPELINE_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cytoclass/bundle.hpp"
#include "cytoclass/cart.hpp"
#include "cytoclass/dataset.hpp"
#include "cytoclass/ensemble.hpp"
#include "cytoclass/evaluation.hpp"
#include "cytoclass/kmeans.hpp"
#include "cytoclass/logistic.hpp"
#include "cytoclass/scaler.hpp"
#include "cytoclass/stats.hpp"

namespace cyto {

struct PipelineConfig {
    long long seed = 0;
    std::size_t train_count = 448;
    std::string pivot = "radius";
    double tau = 0.65;
    bool scale = true;
    bool with_cluster_feature = false;
    KMeansParams kmeans;
    CartParams cart;
    LogisticFitParams logistic;
    std::string created;  // recorded in the bundle; keep fixed for reproducible output
};

struct ModelOutcome {
    std::string name;
    ConfusionMatrix matrix;
    RateReport report;
};

/// One end-to-end run: split, scale, prune, optionally cluster, train CART and
/// logistic, evaluate both plus the highest-confidence ensemble on the test set.
struct ExperimentResult {
    DataSplit split;
    DropRecommendation drops;
    std::vector<std::string> retained;
    ModelBundle bundle;
    ModelOutcome cart_outcome;
    ModelOutcome logistic_outcome;
    ModelOutcome ensemble_outcome;
    std::vector<EvaluatedPrediction> ensemble_predictions;
    std::string rule_listing;
};

inline EnsembleModel make_ensemble(const CartModel& cart, const LogisticModel& logit) {
    std::vector<EnsembleMember> members;
    members.push_back({"cart", [&cart](std::span<const double> x) {
                           auto p = cart_predict(cart, x);
                           return std::make_pair(p.label, p.confidence);
                       }});
    members.push_back({"logistic", [&logit](std::span<const double> x) {
                           auto p = logit_predict(logit, x);
                           return std::make_pair(p.label, p.confidence);
                       }});
    return EnsembleModel(std::move(members));
}

inline ModelOutcome evaluate_member(const std::string& name, const Dataset& test,
                                    const std::function<Diagnosis(std::span<const double>)>& f) {
    std::vector<std::pair<Diagnosis, Diagnosis>> pairs;
    pairs.reserve(test.size());
    for (const Sample& s : test.samples()) pairs.emplace_back(s.diagnosis, f(s.features));
    ConfusionMatrix cm = confusion(pairs);
    return {name, cm, rates(cm)};
}

inline ExperimentResult run_pipeline(const Dataset& raw, const PipelineConfig& cfg) {
    ExperimentResult r{train_test_split(raw, cfg.train_count, cfg.seed)};

    Dataset train = r.split.train;
    Dataset test = r.split.test;
    MinMaxScaler scaler = MinMaxScaler::fit(train);
    if (cfg.scale) {
        train = scaler.transform(train);
        test = scaler.transform(test);
    }

    r.drops = recommend_drops(correlation_matrix(train), cfg.pivot, cfg.tau);
    r.retained = r.drops.retained(train.schema());

    ModelBundle b;
    // k-means clusters the full normalized feature set, ahead of pruning; it
    // always runs for reporting, but the derived attribute enters the models
    // only when requested.
    KMeansParams kp = cfg.kmeans;
    kp.seed = cfg.seed;
    b.kmeans = kmeans_fit(train, kp);

    std::vector<std::string> model_features = r.retained;
    if (cfg.with_cluster_feature) {
        train = attach_cluster_feature(train, *b.kmeans);
        test = attach_cluster_feature(test, *b.kmeans);
        model_features.push_back("cluster");
    }
    Dataset train_sel = select_features(train, model_features);
    Dataset test_sel = select_features(test, model_features);

    b.schema = train_sel.schema();
    b.scaler = MinMaxScaler::fit(r.split.train);  // raw-unit ranges for persistence
    b.cart = cart_train(train_sel, cfg.cart);
    b.logistic = logit_fit(train_sel, cfg.logistic);
    b.seed = cfg.seed;
    b.train_count = cfg.train_count;
    b.created = cfg.created;

    r.rule_listing = extract_rules(b.cart);

    r.cart_outcome = evaluate_member("cart", test_sel, [&](std::span<const double> x) {
        return cart_predict(b.cart, x).label;
    });
    r.logistic_outcome = evaluate_member("logistic", test_sel, [&](std::span<const double> x) {
        return logit_predict(b.logistic, x).label;
    });

    EnsembleModel ens = make_ensemble(b.cart, b.logistic);
    r.ensemble_predictions = ensemble_evaluate(ens, test_sel);
    std::vector<std::pair<Diagnosis, Diagnosis>> pairs;
    for (const auto& p : r.ensemble_predictions)
        pairs.emplace_back(p.actual, p.predicted.label);
    r.ensemble_outcome.name = "ensemble";
    r.ensemble_outcome.matrix = confusion(pairs);
    r.ensemble_outcome.report = rates(r.ensemble_outcome.matrix);

    r.bundle = std::move(b);
    return r;
}

/// Map a raw-unit dataset into the feature space a bundle's models expect:
/// scale, project onto the retained features, and attach the derived cluster
/// attribute when the bundle was trained with it.
inline Dataset prepare_features(const ModelBundle& b, const Dataset& raw) {
    Dataset scaled = b.scaler.transform(raw);
    const bool wants_cluster =
        std::find(b.schema.begin(), b.schema.end(), "cluster") != b.schema.end();
    if (wants_cluster) {
        if (!b.kmeans) throw DataError("bundle schema needs 'cluster' but holds no kmeans model");
        scaled = attach_cluster_feature(scaled, *b.kmeans);
    }
    return select_features(scaled, b.schema);
}

// ---- CSV emitters (UTF-8, LF, header row) ----

namespace csv {

inline std::string real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void feature_stats(const Dataset& ds, double bound, std::ostream& out) {
    out << "feature,mean,std,min,max,skew,kurt,pass\n";
    NormalityScreen screen = normality_screen(ds, bound);
    for (std::size_t j = 0; j < ds.width(); ++j) {
        FeatureStats st = compute_stats(ds.column(j));
        const auto& e = screen.entries[j];
        out << ds.schema()[j] << "," << real(st.mean) << "," << real(st.std) << ","
            << real(st.min) << "," << real(st.max) << "," << real(st.skewness) << ","
            << real(st.kurtosis) << "," << (e.pass ? "true" : "false") << "\n";
    }
}

inline void outliers(const OutlierReport& report, std::ostream& out) {
    out << "id,feature,value,z\n";
    for (const auto& e : report.entries)
        out << e.sample_id << "," << e.feature << "," << real(e.value) << "," << real(e.z) << "\n";
}

inline void correlation(const CorrelationMatrix& cm, std::ostream& out) {
    out << "feature";
    for (const auto& f : cm.features) out << "," << f;
    out << "\n";
    for (std::size_t i = 0; i < cm.features.size(); ++i) {
        out << cm.features[i];
        for (std::size_t j = 0; j < cm.features.size(); ++j) out << "," << real(cm.r[i][j]);
        out << "\n";
    }
}

/// 20 equal-width bins over [min, max]; the top edge is inclusive.
inline void histogram(std::span<const double> series, std::ostream& out,
                      std::size_t bins = 20) {
    out << "bin_lo,bin_hi,count\n";
    const double lo = *std::min_element(series.begin(), series.end());
    const double hi = *std::max_element(series.begin(), series.end());
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : series) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    for (std::size_t b = 0; b < bins; ++b) {
        out << real(lo + width * static_cast<double>(b)) << ","
            << real(lo + width * static_cast<double>(b + 1)) << "," << counts[b] << "\n";
    }
}

inline void centroids(const KMeansModel& m, const std::vector<std::string>& schema,
                      std::ostream& out) {
    out << "cluster";
    for (const auto& f : schema) out << "," << f;
    out << "\n";
    for (std::size_t c = 0; c < m.k; ++c) {
        out << c;
        for (double v : m.centroids[c]) out << "," << real(v);
        out << "\n";
    }
}

inline void purity(const ClusterPurity& p, std::ostream& out) {
    out << "cluster,count_A,count_N,share_A,share_N\n";
    for (std::size_t c = 0; c < p.clusters.size(); ++c) {
        const auto& row = p.clusters[c];
        out << c << "," << row.count_a << "," << row.count_n << "," << real(row.share_a) << ","
            << real(row.share_n) << "\n";
    }
}

inline void importance(const ClusterImportance& imp, std::ostream& out) {
    out << "feature,share\n";
    for (const auto& [name, share] : imp.shares) out << name << "," << real(share) << "\n";
}

inline void confusion_matrix(const ConfusionMatrix& cm, std::ostream& out) {
    out << "actual,predicted_A,predicted_N\n";
    out << "A," << cm.tp() << "," << cm.fn() << "\n";
    out << "N," << cm.fp() << "," << cm.tn() << "\n";
}

inline void rate_report(const RateReport& r, std::ostream& out) {
    auto opt = [](const std::optional<double>& v) {
        return v ? real(*v) : std::string("undefined");
    };
    out << "rate,value\n";
    out << "overall_error," << real(r.overall_error) << "\n";
    out << "fnr_paper," << opt(r.fnr_paper) << "\n";
    out << "fpr_paper," << opt(r.fpr_paper) << "\n";
    out << "sensitivity," << opt(r.sensitivity) << "\n";
    out << "specificity," << opt(r.specificity) << "\n";
}

inline void predictions(const std::vector<EvaluatedPrediction>& preds, std::ostream& out) {
    out << "id,actual,predicted,confidence,winning_member\n";
    for (const auto& p : preds) {
        out << p.id << "," << diagnosis_code(p.actual) << "," << diagnosis_code(p.predicted.label)
            << "," << real(p.predicted.confidence) << "," << p.predicted.member << "\n";
    }
}

}  // namespace csv

}  // namespace cyto

#endif  // CYTOCLASS_PIPELINE_HPP
