#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/learn/common.hpp"
#include "notescan/learn/tree.hpp"

namespace notescan {

struct PartParams {
    /// Confidence factor of the pessimistic error estimate used for pruning.
    double confidence = 0.25;
    std::size_t min_leaf = 2;
};

enum class Comparison { less_equal, greater };

struct Condition {
    std::size_t attribute = 0;
    Comparison op = Comparison::less_equal;
    double threshold = 0;

    bool holds(const FeatureVector& x) const noexcept {
        return op == Comparison::less_equal ? x[attribute] <= threshold : x[attribute] > threshold;
    }

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct Rule {
    std::vector<Condition> conjuncts;
    Label predicted = Label::yes;
    /// Records covered when the rule was created.
    std::size_t coverage = 0;
    /// Fraction of covered records of the predicted class.
    double accuracy = 0;

    bool matches(const FeatureVector& x) const noexcept {
        return std::all_of(conjuncts.begin(), conjuncts.end(), [&](const Condition& c) { return c.holds(x); });
    }

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Ordered decision list; the last rule has no conjuncts.
struct PartModel {
    std::vector<Rule> rules;

    friend bool operator==(const PartModel&, const PartModel&) = default;
};

/// C4.5's upper confidence bound on the error count of a leaf holding `n`
/// records with `e` misclassified, minus `e`.
inline double added_errors(double n, double e, double confidence) {
    if (e < 1) {
        const double base = n * (1 - std::pow(confidence, 1 / n));
        if (e == 0) return base;
        return base + e * (added_errors(n, 1, confidence) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 1 - confidence);
    const double f = (e + 0.5) / n;
    const double r = (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
    return r * n - e;
}

namespace detail {

struct PartialNode {
    ClassDistribution distribution{};
    std::size_t attribute = 0;
    double threshold = 0;
    /// Null children are unexpanded subsets.
    std::unique_ptr<PartialNode> child[2];
    bool leaf = true;

    double leaf_errors(double confidence) const {
        const double n = distribution[0] + distribution[1];
        const double e = n - distribution[argmax(distribution)];
        return e + added_errors(n, e, confidence);
    }
};

class PartialTreeBuilder {
public:
    PartialTreeBuilder(const Dataset& ds, const PartParams& params)
        : ds_(ds), params_(params), opts_{SplitCriterion::gain_ratio, params.min_leaf, 0} {}

    /// Expands subsets in order of increasing entropy, stopping at the first
    /// subset that does not collapse to a leaf. A node whose subsets all became
    /// leaves is replaced by a leaf when that does not raise the estimated error.
    std::unique_ptr<PartialNode> expand(const std::vector<std::size_t>& rows) {
        auto node = std::make_unique<PartialNode>();
        node->distribution = distribution_of(ds_, rows);
        const auto& d = node->distribution;
        if (d[0] == 0 || d[1] == 0 || rows.size() < 2 * std::max<std::size_t>(params_.min_leaf, 1)) return node;
        const auto order = all_attributes();
        const auto split = find_split(ds_, rows, opts_, order);
        if (!split) return node;
        node->leaf = false;
        node->attribute = split->attribute;
        node->threshold = split->threshold;
        std::vector<std::size_t> subset[2];
        for (auto r : rows) subset[ds_.records[r].features[split->attribute] <= split->threshold ? 0 : 1].push_back(r);
        const double h0 = entropy(distribution_of(ds_, subset[0]));
        const double h1 = entropy(distribution_of(ds_, subset[1]));
        const int order_idx[2] = {h1 < h0 ? 1 : 0, h1 < h0 ? 0 : 1};
        for (int side : order_idx) {
            node->child[side] = expand(subset[side]);
            if (!node->child[side]->leaf) break;
        }
        if (node->child[0] && node->child[1] && node->child[0]->leaf && node->child[1]->leaf) {
            const double tree_errors = node->child[0]->leaf_errors(params_.confidence) +
                                       node->child[1]->leaf_errors(params_.confidence);
            if (node->leaf_errors(params_.confidence) <= tree_errors + 0.1) {
                node->leaf = true;
                node->child[0].reset();
                node->child[1].reset();
            }
        }
        return node;
    }

private:
    const Dataset& ds_;
    PartParams params_;
    TreeOptions opts_;
};

struct LeafPath {
    const PartialNode* leaf = nullptr;
    std::vector<Condition> path;
};

/// Expanded leaf with the largest coverage; the first in left-to-right order wins ties.
inline void best_leaf(const PartialNode& node, std::vector<Condition>& path, LeafPath& best) {
    if (node.leaf) {
        const double n = node.distribution[0] + node.distribution[1];
        if (!best.leaf || n > best.leaf->distribution[0] + best.leaf->distribution[1]) best = {&node, path};
        return;
    }
    for (int side = 0; side < 2; ++side) {
        if (!node.child[side]) continue;
        path.push_back({node.attribute, side == 0 ? Comparison::less_equal : Comparison::greater, node.threshold});
        best_leaf(*node.child[side], path, best);
        path.pop_back();
    }
}

inline Rule make_rule(std::vector<Condition> conjuncts, const ClassDistribution& d) {
    const std::size_t c = argmax(d);
    const double n = d[0] + d[1];
    return {std::move(conjuncts), label_at(c), static_cast<std::size_t>(n), n > 0 ? d[c] / n : 0.0};
}

}  // namespace detail

/// Separate-and-conquer rule induction from partial C4.5 trees: each round
/// turns the best-covering leaf of a partial tree into a rule and removes the
/// records it covers. A round whose tree is a single leaf yields the default rule.
inline PartModel train_part(const Dataset& ds, const PartParams& params = {}) {
    if (ds.empty()) throw EmptyDatasetError("cannot train PART on zero records");
    if (!(params.confidence > 0 && params.confidence < 0.5)) {
        throw InvalidArgument("PART confidence must be in (0, 0.5)");
    }
    PartModel model;
    std::vector<std::size_t> remaining(ds.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    detail::PartialTreeBuilder builder(ds, params);
    while (!remaining.empty()) {
        const auto root = builder.expand(remaining);
        if (root->leaf) {
            model.rules.push_back(detail::make_rule({}, root->distribution));
            return model;
        }
        detail::LeafPath best;
        std::vector<Condition> path;
        detail::best_leaf(*root, path, best);
        Rule rule = detail::make_rule(best.path, best.leaf->distribution);
        std::erase_if(remaining, [&](std::size_t r) { return rule.matches(ds.records[r].features); });
        model.rules.push_back(std::move(rule));
    }
    ClassDistribution global{};
    for (const auto& rec : ds.records) global[index_of(rec.label)] += 1;
    Rule fallback = detail::make_rule({}, global);
    fallback.coverage = 0;
    model.rules.push_back(std::move(fallback));
    return model;
}

/// First matching rule fires.
inline Prediction predict_part(const PartModel& m, const FeatureVector& x) {
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
        if (m.rules[i].matches(x)) return {m.rules[i].predicted, m.rules[i].accuracy, i};
    }
    // Unreachable for trained models: the final rule has no conjuncts.
    const auto& last = m.rules.back();
    return {last.predicted, last.accuracy, m.rules.size() - 1};
}

}  // namespace notescan
