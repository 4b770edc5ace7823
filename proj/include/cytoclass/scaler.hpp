#ifndef CYTOCLASS_SCALER_HPP
#define CYTOCLASS_SCALER_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "cytoclass/dataset.hpp"

namespace cyto {

/// Min-max normalizer fitted on training extrema only. Transform maps each
/// feature to [0,1], clamping test values that fall outside the fitted range.
class MinMaxScaler {
public:
    struct Range {
        std::string feature;
        double min;
        double max;
    };

    static MinMaxScaler fit(const Dataset& train) {
        MinMaxScaler s;
        s.ranges_.reserve(train.width());
        for (std::size_t j = 0; j < train.width(); ++j) {
            auto col = train.column(j);
            const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
            s.ranges_.push_back({train.schema()[j], *mn, *mx});
        }
        return s;
    }

    static MinMaxScaler from_ranges(std::vector<Range> ranges) {
        MinMaxScaler s;
        for (const Range& r : ranges)
            if (r.min > r.max) throw DataError("scaler range min > max for '" + r.feature + "'");
        s.ranges_ = std::move(ranges);
        return s;
    }

    const std::vector<Range>& ranges() const { return ranges_; }

    Dataset transform(const Dataset& ds) const {
        check_schema(ds);
        std::vector<Sample> out;
        out.reserve(ds.size());
        for (const Sample& s : ds.samples()) {
            Sample t{s.id, s.diagnosis, {}};
            t.features.reserve(s.features.size());
            for (std::size_t j = 0; j < s.features.size(); ++j) {
                const Range& r = ranges_[j];
                double v = r.max > r.min ? (s.features[j] - r.min) / (r.max - r.min) : 0.0;
                t.features.push_back(std::clamp(v, 0.0, 1.0));
            }
            out.push_back(std::move(t));
        }
        return Dataset(ds.schema(), std::move(out));
    }

    Dataset inverse_transform(const Dataset& ds) const {
        check_schema(ds);
        std::vector<Sample> out;
        out.reserve(ds.size());
        for (const Sample& s : ds.samples()) {
            Sample t{s.id, s.diagnosis, {}};
            t.features.reserve(s.features.size());
            for (std::size_t j = 0; j < s.features.size(); ++j) {
                const double v = s.features[j];
                if (v < 0.0 || v > 1.0)
                    throw DataError("inverse_transform value " + std::to_string(v) +
                                    " outside [0,1] for '" + ranges_[j].feature + "'");
                t.features.push_back(v * (ranges_[j].max - ranges_[j].min) + ranges_[j].min);
            }
            out.push_back(std::move(t));
        }
        return Dataset(ds.schema(), std::move(out));
    }

private:
    void check_schema(const Dataset& ds) const {
        if (ds.width() != ranges_.size())
            throw DataError("scaler schema mismatch: fitted width " +
                            std::to_string(ranges_.size()) + ", dataset width " +
                            std::to_string(ds.width()));
        for (std::size_t j = 0; j < ranges_.size(); ++j)
            if (ds.schema()[j] != ranges_[j].feature)
                throw DataError("scaler schema mismatch at feature '" + ds.schema()[j] + "'");
    }

    std::vector<Range> ranges_;
};

}  // namespace cyto

#endif  // CYTOCLASS_SCALER_HPP
