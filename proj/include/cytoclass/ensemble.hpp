#ifndef CYTOCLASS_ENSEMBLE_HPP
#define CYTOCLASS_ENSEMBLE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

struct ScoredPrediction {
    Diagnosis label;
    double confidence;
    std::string member;
};

/// A named classifier that maps a feature vector to (label, confidence).
struct EnsembleMember {
    std::string name;
    std::function<std::pair<Diagnosis, double>(std::span<const double>)> predict;
};

/// Highest-confidence voting: the member with the maximal confidence wins.
/// When conflicting labels share the maximal confidence, A wins (prefer_A).
class EnsembleModel {
public:
    explicit EnsembleModel(std::vector<EnsembleMember> members)
        : members_(std::move(members)) {
        if (members_.size() < 2) throw DataError("ensemble requires at least 2 members");
    }

    const std::vector<EnsembleMember>& members() const { return members_; }

    ScoredPrediction predict(std::span<const double> features) const {
        ScoredPrediction best{Diagnosis::N, -1.0, ""};
        for (const EnsembleMember& m : members_) {
            std::pair<Diagnosis, double> p;
            try {
                p = m.predict(features);
            } catch (const std::exception& e) {
                throw DataError("ensemble member '" + m.name + "': " + e.what());
            }
            const bool wins = p.second > best.confidence ||
                              (p.second == best.confidence && p.first == Diagnosis::A &&
                               best.label == Diagnosis::N);
            if (wins) best = {p.first, p.second, m.name};
        }
        return best;
    }

private:
    std::vector<EnsembleMember> members_;
};

struct EvaluatedPrediction {
    std::string id;
    Diagnosis actual;
    ScoredPrediction predicted;
};

inline std::vector<EvaluatedPrediction> ensemble_evaluate(const EnsembleModel& e,
                                                          const Dataset& test) {
    std::vector<EvaluatedPrediction> out;
    out.reserve(test.size());
    for (const Sample& s : test.samples())
        out.push_back({s.id, s.diagnosis, e.predict(s.features)});
    return out;
}

}  // namespace cyto

#endif  // CYTOCLASS_ENSEMBLE_HPP
