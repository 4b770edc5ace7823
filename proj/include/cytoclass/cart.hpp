#ifndef CYTOCLASS_CART_HPP
#define CYTOCLASS_CART_HPP

#include <algorithm>
#include <cstdio>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

struct CartParams {
    std::size_t max_depth = 5;
    std::size_t min_leaf = 5;
    double min_gini_decrease = 1e-4;
};

struct CartNode {
    // Internal node when left && right; leaf otherwise.
    std::string feature;
    std::size_t feature_index = 0;
    double threshold = 0.0;
    std::unique_ptr<CartNode> left;   // feature <= threshold
    std::unique_ptr<CartNode> right;  // feature >  threshold
    std::size_t count_a = 0;
    std::size_t count_n = 0;

    bool is_leaf() const { return !left; }

    // Majority label; ties go to A (the costlier class to miss).
    Diagnosis mode() const { return count_a >= count_n ? Diagnosis::A : Diagnosis::N; }

    // Laplace-smoothed confidence (n_majority + 1) / (n + 2), strictly in (0,1).
    double confidence() const {
        const std::size_t total = count_a + count_n;
        const std::size_t majority = std::max(count_a, count_n);
        return static_cast<double>(majority + 1) / static_cast<double>(total + 2);
    }
};

struct CartModel {
    std::unique_ptr<CartNode> root;
    CartParams params;
    std::vector<std::string> schema;
    std::size_t training_size = 0;
};

struct ScoredLabel {
    Diagnosis label;
    double confidence;
};

namespace detail {

inline double gini(std::size_t count_a, std::size_t count_n) {
    const double total = static_cast<double>(count_a + count_n);
    if (total == 0.0) return 0.0;
    const double pa = static_cast<double>(count_a) / total;
    const double pn = static_cast<double>(count_n) / total;
    return 1.0 - pa * pa - pn * pn;
}

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = 0.0;
};

/// Exhaustive scan of every (feature, midpoint-between-distinct-values) pair.
/// Ties on decrease break toward lower feature index, then smaller threshold,
/// which the scan order realizes by strict improvement comparisons.
inline std::optional<SplitCandidate> best_split(const std::vector<const Sample*>& rows,
                                                std::size_t width, const CartParams& params) {
    std::size_t total_a = 0, total_n = 0;
    for (const Sample* s : rows) (s->diagnosis == Diagnosis::A ? total_a : total_n)++;
    const std::size_t n = rows.size();
    const double parent = gini(total_a, total_n);

    std::optional<SplitCandidate> best;
    std::vector<std::pair<double, Diagnosis>> col(n);
    for (std::size_t f = 0; f < width; ++f) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = {rows[i]->features[f], rows[i]->diagnosis};
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::size_t left_a = 0, left_n = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            (col[i].second == Diagnosis::A ? left_a : left_n)++;
            if (col[i].first == col[i + 1].first) continue;
            const std::size_t left = i + 1;
            const std::size_t right = n - left;
            if (left < params.min_leaf || right < params.min_leaf) continue;
            const double threshold = (col[i].first + col[i + 1].first) / 2.0;
            const double child =
                (static_cast<double>(left) * gini(left_a, left_n) +
                 static_cast<double>(right) * gini(total_a - left_a, total_n - left_n)) /
                static_cast<double>(n);
            const double decrease = parent - child;
            if (!best || decrease > best->decrease)
                best = SplitCandidate{f, threshold, decrease};
        }
    }
    return best;
}

inline std::unique_ptr<CartNode> grow(const std::vector<const Sample*>& rows,
                                      const std::vector<std::string>& schema,
                                      const CartParams& params, std::size_t depth) {
    auto node = std::make_unique<CartNode>();
    for (const Sample* s : rows)
        (s->diagnosis == Diagnosis::A ? node->count_a : node->count_n)++;

    const bool pure = node->count_a == 0 || node->count_n == 0;
    if (pure || depth >= params.max_depth) return node;

    auto split = best_split(rows, schema.size(), params);
    if (!split || split->decrease < params.min_gini_decrease) return node;

    std::vector<const Sample*> left_rows, right_rows;
    for (const Sample* s : rows)
        (s->features[split->feature] <= split->threshold ? left_rows : right_rows).push_back(s);

    node->feature = schema[split->feature];
    node->feature_index = split->feature;
    node->threshold = split->threshold;
    node->left = grow(left_rows, schema, params, depth + 1);
    node->right = grow(right_rows, schema, params, depth + 1);
    return node;
}

}  // namespace detail

inline CartModel cart_train(const Dataset& train, const CartParams& params = {}) {
    std::vector<const Sample*> rows;
    rows.reserve(train.size());
    for (const Sample& s : train.samples()) rows.push_back(&s);
    CartModel m;
    m.params = params;
    m.schema = train.schema();
    m.training_size = train.size();
    m.root = detail::grow(rows, m.schema, params, 0);
    return m;
}

inline ScoredLabel cart_predict(const CartModel& m, std::span<const double> features) {
    if (features.size() != m.schema.size())
        throw DataError("cart_predict: schema mismatch (" + std::to_string(features.size()) +
                        " vs " + std::to_string(m.schema.size()) + ")");
    const CartNode* node = m.root.get();
    while (!node->is_leaf())
        node = features[node->feature_index] <= node->threshold ? node->left.get()
                                                                : node->right.get();
    return {node->mode(), node->confidence()};
}

namespace detail {

inline void format_rules(const CartNode& node, std::size_t depth, std::ostringstream& out) {
    const std::string indent(depth * 2, ' ');
    if (node.is_leaf()) {
        out << indent << "⇒ " << diagnosis_code(node.mode()) << "\n";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", node.threshold);
    out << indent << node.feature << " <= " << buf << " [ Mode: "
        << diagnosis_code(node.left->mode()) << " ]\n";
    format_rules(*node.left, depth + 1, out);
    out << indent << node.feature << " > " << buf << " [ Mode: "
        << diagnosis_code(node.right->mode()) << " ]\n";
    format_rules(*node.right, depth + 1, out);
}

}  // namespace detail

/// Depth-indented rule listing: `feature <= t [ Mode: X ]` branch lines and
/// `⇒ X` leaf lines, thresholds to 3 decimals.
inline std::string extract_rules(const CartModel& m) {
    std::ostringstream out;
    detail::format_rules(*m.root, 0, out);
    return out.str();
}

}  // namespace cyto

#endif  // CYTOCLASS_CART_HPP
