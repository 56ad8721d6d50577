#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/rng.hpp"

namespace notescan {

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) noexcept {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

/// Indices into `pool` of the k nearest vectors by Euclidean distance, nearest
/// first, ties to the lower index. `self` (the query's own pool index, if any)
/// is never returned.
inline std::vector<std::size_t> k_nearest_neighbors(const FeatureVector& query,
                                                    std::span<const FeatureVector> pool, std::size_t k,
                                                    std::optional<std::size_t> self = std::nullopt) {
    const std::size_t available = pool.size() - (self && *self < pool.size() ? 1 : 0);
    if (k > available) {
        throw InvalidArgument("k=" + std::to_string(k) + " exceeds the " + std::to_string(available) +
                              " candidate neighbours");
    }
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (self && i == *self) continue;
        cand.emplace_back(squared_distance(query, pool[i]), i);
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
    return out;
}

struct SmoteConfig {
    /// Oversampling percentage; a positive multiple of 100.
    int percent = 100;
    std::size_t k = 5;
    std::uint64_t seed = 1;
    /// Class to oversample; nullopt selects the current minority class.
    std::optional<Label> target_class;
};

inline void validate(const SmoteConfig& cfg) {
    if (cfg.percent < 100 || cfg.percent % 100 != 0) {
        throw InvalidArgument("SMOTE percent must be a positive multiple of 100, got " +
                              std::to_string(cfg.percent));
    }
    if (cfg.k < 1) throw InvalidArgument("SMOTE k must be >= 1");
}

/// Smaller class; a tie selects "no".
inline Label minority_class(const Dataset& ds) {
    const auto n = ds.class_counts();
    return n[index_of(Label::yes)] < n[index_of(Label::no)] ? Label::yes : Label::no;
}

/// Appends percent/100 synthetic records per target-class record. Synthetic j
/// of parent p interpolates toward one of p's k nearest same-class neighbours
/// with a single coefficient u in [0,1), drawn from RNG substream p of the seed.
/// Original records are kept unchanged and in order.
inline Dataset smote(const Dataset& ds, const SmoteConfig& cfg) {
    validate(cfg);
    const Label target = cfg.target_class.value_or(minority_class(ds));
    std::vector<FeatureVector> members;
    for (const auto& rec : ds.records) {
        if (rec.label == target) members.push_back(rec.features);
    }
    if (members.empty()) {
        throw ClassAbsentError("SMOTE target class '" + std::string(to_string(target)) + "' has no records");
    }
    if (members.size() < 2) {
        throw TooFewRecordsError("SMOTE needs at least 2 records of class '" + std::string(to_string(target)) +
                                 "'");
    }
    const std::size_t k = std::min(cfg.k, members.size() - 1);
    const auto per_parent = static_cast<std::size_t>(cfg.percent / 100);

    Dataset out = ds;
    out.records.reserve(ds.size() + members.size() * per_parent);
    for (std::size_t p = 0; p < members.size(); ++p) {
        const auto neighbours = k_nearest_neighbors(members[p], members, k, p);
        Rng rng = Rng::substream(cfg.seed, p);
        for (std::size_t s = 0; s < per_parent; ++s) {
            const FeatureVector& n = members[neighbours[rng.below(k)]];
            const double u = rng.uniform();
            FeatureRecord synth{members[p], target};
            for (std::size_t a = 0; a < kFeatureCount; ++a) {
                synth.features[a] = members[p][a] + u * (n[a] - members[p][a]);
            }
            out.records.push_back(synth);
        }
    }
    return out;
}

/// Iterated SMOTE: level i runs on the output of level i-1. With
/// `recompute_minority`, each level's target is the minority class at that
/// point (overriding the level's target_class). Level i draws from seed
/// substream i of its configured seed.
inline std::vector<Dataset> smote_schedule(const Dataset& ds, std::span<const SmoteConfig> levels,
                                           bool recompute_minority = true) {
    if (levels.empty()) throw InvalidArgument("SMOTE schedule needs at least one level");
    std::vector<Dataset> out;
    out.reserve(levels.size());
    const Dataset* current = &ds;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        SmoteConfig cfg = levels[i];
        if (recompute_minority) cfg.target_class = minority_class(*current);
        cfg.seed = substream_seed(cfg.seed, i);
        out.push_back(smote(*current, cfg));
        current = &out.back();
    }
    return out;
}

inline std::vector<SmoteConfig> smote_levels(std::span<const int> percents, std::size_t k, std::uint64_t seed) {
    std::vector<SmoteConfig> levels;
    for (int p : percents) {
        SmoteConfig cfg{p, k, seed, std::nullopt};
        validate(cfg);
        levels.push_back(cfg);
    }
    return levels;
}

}  // namespace notescan
