#ifndef CYTOCLASS_BUNDLE_HPP
#define CYTOCLASS_BUNDLE_HPP

#include <cstdio>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cytoclass/cart.hpp"
#include "cytoclass/dataset.hpp"
#include "cytoclass/kmeans.hpp"
#include "cytoclass/logistic.hpp"
#include "cytoclass/scaler.hpp"

namespace cyto {

using ordered_json = nlohmann::ordered_json;

/// Everything a trained pipeline needs to predict again: scaler, optional
/// k-means model, CART tree, logistic weights, tie policy, and provenance.
/// Serialized as versioned JSON with every real number as decimal text at 17
/// significant digits, so save/load round-trips are exact.
struct ModelBundle {
    static constexpr int kFormatVersion = 1;

    std::vector<std::string> schema;  // model input features, in order
    MinMaxScaler scaler;
    std::optional<KMeansModel> kmeans;
    CartModel cart;
    LogisticModel logistic;
    std::string tie_policy = "prefer_A";
    long long seed = 0;
    std::size_t train_count = 0;
    std::string created;  // caller-supplied timestamp; may be empty
};

namespace detail {

inline std::string real_to_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double text_to_real(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw DataError("malformed real '" + s + "' in bundle");
    return v;
}

inline ordered_json node_to_json(const CartNode& n) {
    ordered_json j;
    j["count_a"] = n.count_a;
    j["count_n"] = n.count_n;
    if (!n.is_leaf()) {
        j["feature"] = n.feature;
        j["feature_index"] = n.feature_index;
        j["threshold"] = real_to_text(n.threshold);
        j["left"] = node_to_json(*n.left);
        j["right"] = node_to_json(*n.right);
    }
    return j;
}

inline std::unique_ptr<CartNode> node_from_json(const ordered_json& j) {
    auto n = std::make_unique<CartNode>();
    n->count_a = j.at("count_a").get<std::size_t>();
    n->count_n = j.at("count_n").get<std::size_t>();
    if (j.contains("feature")) {
        n->feature = j.at("feature").get<std::string>();
        n->feature_index = j.at("feature_index").get<std::size_t>();
        n->threshold = text_to_real(j.at("threshold").get<std::string>());
        n->left = node_from_json(j.at("left"));
        n->right = node_from_json(j.at("right"));
    }
    return n;
}

}  // namespace detail

inline void save_bundle(const ModelBundle& b, std::ostream& sink) {
    ordered_json j;
    j["format_version"] = ModelBundle::kFormatVersion;
    j["schema"] = b.schema;

    ordered_json scaler = ordered_json::array();
    for (const auto& r : b.scaler.ranges()) {
        scaler.push_back({{"feature", r.feature},
                          {"min", detail::real_to_text(r.min)},
                          {"max", detail::real_to_text(r.max)}});
    }
    j["scaler"] = std::move(scaler);

    if (b.kmeans) {
        ordered_json km;
        km["k"] = b.kmeans->k;
        km["seed"] = b.kmeans->seed;
        ordered_json centroids = ordered_json::array();
        for (const auto& c : b.kmeans->centroids) {
            ordered_json row = ordered_json::array();
            for (double v : c) row.push_back(detail::real_to_text(v));
            centroids.push_back(std::move(row));
        }
        km["centroids"] = std::move(centroids);
        km["wcss"] = detail::real_to_text(b.kmeans->wcss);
        km["iterations"] = b.kmeans->iterations;
        km["restarts"] = b.kmeans->restarts;
        j["kmeans"] = std::move(km);
    }

    ordered_json cart;
    cart["max_depth"] = b.cart.params.max_depth;
    cart["min_leaf"] = b.cart.params.min_leaf;
    cart["min_gini_decrease"] = detail::real_to_text(b.cart.params.min_gini_decrease);
    cart["training_size"] = b.cart.training_size;
    cart["schema"] = b.cart.schema;
    cart["root"] = detail::node_to_json(*b.cart.root);
    j["cart"] = std::move(cart);

    ordered_json logit;
    ordered_json weights = ordered_json::array();
    for (std::size_t i = 0; i < b.logistic.weights.size(); ++i) {
        weights.push_back({{"feature", b.logistic.schema[i]},
                           {"weight", detail::real_to_text(b.logistic.weights[i])}});
    }
    logit["weights"] = std::move(weights);
    logit["intercept"] = detail::real_to_text(b.logistic.intercept);
    logit["converged"] = b.logistic.converged;
    logit["iterations"] = b.logistic.iterations;
    logit["final_grad_norm"] = detail::real_to_text(b.logistic.final_grad_norm);
    j["logistic"] = std::move(logit);

    j["tie_policy"] = b.tie_policy;
    j["provenance"] = {{"seed", b.seed}, {"train_count", b.train_count}, {"created", b.created}};

    sink << j.dump(2) << "\n";
}

inline ModelBundle load_bundle(std::istream& source) {
    ordered_json j;
    try {
        j = ordered_json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("malformed bundle: ") + e.what());
    }
    try {
        const int version = j.at("format_version").get<int>();
        if (version != ModelBundle::kFormatVersion)
            throw DataError("unknown bundle format version " + std::to_string(version));

        std::vector<MinMaxScaler::Range> ranges;
        for (const auto& r : j.at("scaler")) {
            ranges.push_back({r.at("feature").get<std::string>(),
                              detail::text_to_real(r.at("min").get<std::string>()),
                              detail::text_to_real(r.at("max").get<std::string>())});
        }

        ModelBundle b;
        b.schema = j.at("schema").get<std::vector<std::string>>();
        b.scaler = MinMaxScaler::from_ranges(std::move(ranges));

        if (j.contains("kmeans")) {
            const auto& km = j.at("kmeans");
            KMeansModel m;
            m.k = km.at("k").get<std::size_t>();
            m.seed = km.at("seed").get<long long>();
            for (const auto& row : km.at("centroids")) {
                std::vector<double> c;
                for (const auto& v : row) c.push_back(detail::text_to_real(v.get<std::string>()));
                m.centroids.push_back(std::move(c));
            }
            m.wcss = detail::text_to_real(km.at("wcss").get<std::string>());
            m.iterations = km.at("iterations").get<std::size_t>();
            m.restarts = km.at("restarts").get<std::size_t>();
            b.kmeans = std::move(m);
        }

        const auto& cart = j.at("cart");
        b.cart.params.max_depth = cart.at("max_depth").get<std::size_t>();
        b.cart.params.min_leaf = cart.at("min_leaf").get<std::size_t>();
        b.cart.params.min_gini_decrease =
            detail::text_to_real(cart.at("min_gini_decrease").get<std::string>());
        b.cart.training_size = cart.at("training_size").get<std::size_t>();
        b.cart.schema = cart.at("schema").get<std::vector<std::string>>();
        b.cart.root = detail::node_from_json(cart.at("root"));
        if (b.cart.schema != b.schema) throw DataError("bundle schema mismatch: cart");

        const auto& logit = j.at("logistic");
        for (const auto& w : logit.at("weights")) {
            b.logistic.schema.push_back(w.at("feature").get<std::string>());
            b.logistic.weights.push_back(detail::text_to_real(w.at("weight").get<std::string>()));
        }
        b.logistic.intercept = detail::text_to_real(logit.at("intercept").get<std::string>());
        b.logistic.converged = logit.at("converged").get<bool>();
        b.logistic.iterations = logit.at("iterations").get<std::size_t>();
        b.logistic.final_grad_norm =
            detail::text_to_real(logit.at("final_grad_norm").get<std::string>());
        if (b.logistic.schema != b.schema) throw DataError("bundle schema mismatch: logistic");

        b.tie_policy = j.at("tie_policy").get<std::string>();
        const auto& prov = j.at("provenance");
        b.seed = prov.at("seed").get<long long>();
        b.train_count = prov.at("train_count").get<std::size_t>();
        b.created = prov.at("created").get<std::string>();
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed bundle: ") + e.what());
    }
}

}  // namespace cyto

#endif  // CYTOCLASS_BUNDLE_HPP
