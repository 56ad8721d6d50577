#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "notescan/error.hpp"
#include "notescan/texfeat.hpp"

namespace notescan {

/// Class label. Declaration order {yes, no} is the nominal order and the
/// tie-break preference order.
enum class Label : int { yes = 0, no = 1 };

inline constexpr std::size_t kClassCount = 2;
inline constexpr std::array<Label, kClassCount> kLabels{Label::yes, Label::no};

inline constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }
inline constexpr Label label_at(std::size_t i) noexcept { return static_cast<Label>(i); }

inline std::string_view to_string(Label l) noexcept { return l == Label::yes ? "yes" : "no"; }

inline std::optional<Label> parse_label(std::string_view s) noexcept {
    if (s == "yes") return Label::yes;
    if (s == "no") return Label::no;
    return std::nullopt;
}

struct FeatureRecord {
    FeatureVector features{};
    Label label = Label::yes;

    friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

enum class AttributeKind { numeric, nominal };

struct AttributeMeta {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    std::vector<std::string> nominal_values;

    friend bool operator==(const AttributeMeta&, const AttributeMeta&) = default;
};

inline constexpr std::string_view kClassAttribute = "Class";
inline constexpr std::string_view kRelationName = "afn_banknotes";

/// The 17 dataset attributes: 16 numeric texture features and the class.
inline std::vector<AttributeMeta> canonical_meta() {
    std::vector<AttributeMeta> meta;
    for (auto name : kFeatureNames) meta.push_back({std::string(name), AttributeKind::numeric, {}});
    meta.push_back({std::string(kClassAttribute), AttributeKind::nominal, {"yes", "no"}});
    return meta;
}

struct Dataset {
    std::vector<AttributeMeta> meta = canonical_meta();
    std::vector<FeatureRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }

    std::array<std::size_t, kClassCount> class_counts() const {
        std::array<std::size_t, kClassCount> n{};
        for (const auto& r : records) ++n[index_of(r.label)];
        return n;
    }

    std::size_t count(Label l) const { return class_counts()[index_of(l)]; }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline void check_finite(const FeatureRecord& rec, std::size_t index) {
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        if (!std::isfinite(rec.features[a])) {
            throw InvalidArgument("record " + std::to_string(index) + ": attribute " +
                                  std::string(kFeatureNames[a]) + " is not finite");
        }
    }
}

inline Dataset build_dataset(std::vector<FeatureRecord> records) {
    if (records.empty()) throw EmptyDatasetError("cannot build a dataset from zero records");
    for (std::size_t i = 0; i < records.size(); ++i) check_finite(records[i], i);
    Dataset ds;
    ds.records = std::move(records);
    return ds;
}

struct AttributeRange {
    double min = 0;
    double max = 0;

    friend bool operator==(const AttributeRange&, const AttributeRange&) = default;
};

/// Per-attribute training ranges used for min-max scaling.
struct NormalizationParams {
    std::array<AttributeRange, kFeatureCount> ranges{};

    friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

/// (x - min) / (max - min), clamped to [0,1]; a constant attribute maps to 0.
inline double scale_value(double x, const AttributeRange& r) {
    if (!(r.max > r.min)) return 0.0;
    return std::clamp((x - r.min) / (r.max - r.min), 0.0, 1.0);
}

inline FeatureVector apply_normalization(const FeatureVector& v, const NormalizationParams& params) {
    FeatureVector out{};
    for (std::size_t a = 0; a < kFeatureCount; ++a) out[a] = scale_value(v[a], params.ranges[a]);
    return out;
}

inline NormalizationParams fit_normalization(const Dataset& ds) {
    if (ds.empty()) throw EmptyDatasetError("cannot normalize an empty dataset");
    NormalizationParams p;
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        p.ranges[a] = {ds.records.front().features[a], ds.records.front().features[a]};
    }
    for (const auto& rec : ds.records) {
        for (std::size_t a = 0; a < kFeatureCount; ++a) {
            p.ranges[a].min = std::min(p.ranges[a].min, rec.features[a]);
            p.ranges[a].max = std::max(p.ranges[a].max, rec.features[a]);
        }
    }
    return p;
}

struct NormalizedDataset {
    Dataset dataset;
    NormalizationParams params;
};

/// Min-max scaling of every numeric attribute with the dataset's own ranges.
inline NormalizedDataset min_max_normalize(const Dataset& ds) {
    NormalizedDataset out{ds, fit_normalization(ds)};
    for (auto& rec : out.dataset.records) rec.features = apply_normalization(rec.features, out.params);
    return out;
}

/// Parameters equivalent to applying `first` and then `second`, on values
/// inside the ranges of `first`.
inline NormalizationParams compose(const NormalizationParams& first, const NormalizationParams& second) {
    NormalizationParams out;
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        const auto& f = first.ranges[a];
        const auto& s = second.ranges[a];
        if (!(f.max > f.min) || !(s.max > s.min)) {
            // The first stage already collapses the attribute to a constant.
            out.ranges[a] = {f.min, f.min};
            continue;
        }
        const double span = f.max - f.min;
        out.ranges[a] = {f.min + s.min * span, f.min + s.max * span};
    }
    return out;
}

}  // namespace notescan
