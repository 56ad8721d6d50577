#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/learn/model.hpp"
#include "notescan/resample.hpp"
#include "notescan/rng.hpp"

namespace notescan {

struct FoldPlan {
    std::size_t k = 0;
    /// Fold index of each record.
    std::vector<std::size_t> assignments;
    std::uint64_t seed = 0;
    /// Set when k was reduced to the smallest class size.
    std::optional<std::size_t> requested_k;

    std::vector<std::size_t> fold(std::size_t f) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i] == f) rows.push_back(i);
        }
        return rows;
    }
};

/// Stratified fold assignment. Each class's records are shuffled with RNG
/// substream (class index) and dealt round-robin, continuing the deal where
/// the previous class stopped so fold sizes also differ by at most one.
inline FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds, got " + std::to_string(k));
    const auto counts = ds.class_counts();
    std::size_t smallest = 0;
    for (auto n : counts) {
        if (n > 0 && (smallest == 0 || n < smallest)) smallest = n;
    }
    FoldPlan plan{k, std::vector<std::size_t>(ds.size(), 0), seed, std::nullopt};
    if (smallest < k) {
        plan.requested_k = k;
        plan.k = smallest;
    }
    if (plan.k < 2) {
        throw TooFewRecordsError("a class has " + std::to_string(smallest) + " record(s); need at least 2 for folds");
    }
    std::size_t next = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (index_of(ds.records[i].label) == c) members.push_back(i);
        }
        Rng rng = Rng::substream(seed, c);
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[static_cast<std::size_t>(rng.below(i))]);
        }
        for (auto m : members) plan.assignments[m] = next++ % plan.k;
    }
    return plan;
}

/// counts[actual][predicted], indexed by label order {yes, no}.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kClassCount>, kClassCount> counts{};

    void add(Label actual, Label predicted) { ++counts[index_of(actual)][index_of(predicted)]; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::uint64_t{0});
        return t;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassMetrics {
    double tp_rate = 0;
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    std::uint64_t support = 0;
    /// Nothing was predicted as this class, so precision (and F) were set to 0.
    bool precision_undefined = false;
};

struct Metrics {
    std::array<ClassMetrics, kClassCount> per_class{};
    /// Support-weighted averages over classes.
    ClassMetrics weighted;
    double accuracy = 0;
    ConfusionMatrix confusion;
};

inline Metrics metrics(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0) throw InvalidArgument("confusion matrix is empty");
    Metrics m;
    m.confusion = cm;
    std::uint64_t correct = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        const auto tp = cm.counts[c][c];
        correct += tp;
        std::uint64_t actual = 0, predicted = 0;
        for (std::size_t o = 0; o < kClassCount; ++o) {
            actual += cm.counts[c][o];
            predicted += cm.counts[o][c];
        }
        auto& pc = m.per_class[c];
        pc.support = actual;
        pc.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
        pc.tp_rate = pc.recall;
        pc.precision_undefined = predicted == 0;
        pc.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        const double pr = pc.precision + pc.recall;
        pc.f_measure = pr > 0 ? 2 * pc.precision * pc.recall / pr : 0.0;
    }
    for (const auto& pc : m.per_class) {
        const double w = static_cast<double>(pc.support) / static_cast<double>(total);
        m.weighted.tp_rate += w * pc.tp_rate;
        m.weighted.precision += w * pc.precision;
        m.weighted.recall += w * pc.recall;
        m.weighted.f_measure += w * pc.f_measure;
        m.weighted.precision_undefined = m.weighted.precision_undefined || pc.precision_undefined;
    }
    m.weighted.support = total;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    return m;
}

/// Predicts a label for a feature vector.
using Predictor = std::function<Label(const FeatureVector&)>;
/// Fits a predictor on a training dataset.
using Trainer = std::function<Predictor(const Dataset&)>;

struct CvResult {
    Metrics metrics;
    FoldPlan plan;
    /// Held-out prediction of each record.
    std::vector<Label> predictions;
};

/// k-fold cross-validation with predictions pooled into one confusion matrix.
inline CvResult cross_validate(const Dataset& ds, const Trainer& trainer, std::size_t k, std::uint64_t seed) {
    CvResult out{{}, stratified_folds(ds, k, seed), std::vector<Label>(ds.size(), Label::yes)};
    ConfusionMatrix cm;
    for (std::size_t f = 0; f < out.plan.k; ++f) {
        Dataset train_set;
        train_set.meta = ds.meta;
        std::vector<std::size_t> held_out;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (out.plan.assignments[i] == f) held_out.push_back(i);
            else train_set.records.push_back(ds.records[i]);
        }
        const Predictor predict_fn = trainer(train_set);
        for (auto i : held_out) out.predictions[i] = predict_fn(ds.records[i].features);
    }
    for (std::size_t i = 0; i < ds.size(); ++i) cm.add(ds.records[i].label, out.predictions[i]);
    out.metrics = metrics(cm);
    return out;
}

/// Trainer for a classifier spec. With a non-empty `fold_smote` schedule the
/// training fold is oversampled (last level's output) before fitting, which
/// keeps synthetic records out of the held-out fold.
inline Trainer make_trainer(const ClassifierSpec& spec, std::vector<SmoteConfig> fold_smote = {}) {
    return [spec, fold_smote = std::move(fold_smote)](const Dataset& train_set) -> Predictor {
        Model model = fold_smote.empty() ? train(spec, train_set)
                                         : train(spec, smote_schedule(train_set, fold_smote).back());
        return [model = std::move(model)](const FeatureVector& x) { return predict(model, x).label; };
    };
}

inline CvResult cross_validate(const Dataset& ds, const ClassifierSpec& spec, std::size_t k, std::uint64_t seed) {
    return cross_validate(ds, make_trainer(spec), k, seed);
}

}  // namespace notescan
