#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/learn/tree.hpp"
#include "notescan/rng.hpp"

namespace notescan {

/// floor(log2(16)) + 1.
inline constexpr std::size_t kDefaultFeaturesPerSplit = 5;

struct RfParams {
    std::size_t n_trees = 100;
    std::size_t features_per_split = kDefaultFeaturesPerSplit;
    bool bootstrap = true;
    std::size_t min_leaf = 1;
    std::uint64_t seed = 1;
};

struct RfModel {
    std::vector<DecisionTree> trees;
    RfParams params;

    friend bool operator==(const RfModel& a, const RfModel& b) {
        return a.trees == b.trees && a.params.n_trees == b.params.n_trees &&
               a.params.features_per_split == b.params.features_per_split &&
               a.params.bootstrap == b.params.bootstrap && a.params.min_leaf == b.params.min_leaf &&
               a.params.seed == b.params.seed;
    }
};

inline void validate(const RfParams& p) {
    if (p.n_trees < 1) throw InvalidArgument("random forest needs n_trees >= 1");
    if (p.features_per_split < 1 || p.features_per_split > kFeatureCount) {
        throw InvalidArgument("features per split must be in [1,16], got " + std::to_string(p.features_per_split));
    }
    if (p.min_leaf < 1) throw InvalidArgument("min_leaf must be >= 1");
}

/// Random forest of unpruned info-gain trees. Tree t draws its bootstrap sample
/// and its per-node attribute permutations from RNG substream t of the seed.
inline RfModel train_random_forest(const Dataset& ds, const RfParams& params = {}) {
    validate(params);
    if (ds.size() < 2) throw TooFewRecordsError("random forest needs at least 2 records");
    RfModel m;
    m.params = params;
    m.trees.reserve(params.n_trees);
    const TreeOptions opts{SplitCriterion::info_gain, params.min_leaf, params.features_per_split};
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        Rng rng = Rng::substream(params.seed, t);
        std::vector<std::size_t> rows(ds.size());
        if (params.bootstrap) {
            for (auto& r : rows) r = static_cast<std::size_t>(rng.below(ds.size()));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        AttributeSampler sampler = [&rng] {
            auto order = all_attributes();
            for (std::size_t i = order.size() - 1; i > 0; --i) {
                std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);
            }
            return order;
        };
        m.trees.push_back(train_tree(ds, rows, opts, sampler));
    }
    return m;
}

/// Majority vote of the trees; a tied vote goes to "yes".
inline Prediction predict_rf(const RfModel& m, const FeatureVector& x) {
    ClassDistribution votes{};
    for (const auto& tree : m.trees) votes[index_of(tree.predict(x))] += 1;
    const std::size_t best = argmax(votes);
    return {label_at(best), votes[best] / static_cast<double>(m.trees.size()), std::nullopt};
}

}  // namespace notescan
