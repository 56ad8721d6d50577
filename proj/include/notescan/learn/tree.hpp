#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/learn/common.hpp"

namespace notescan {

enum class SplitCriterion { info_gain, gain_ratio };

struct TreeOptions {
    SplitCriterion criterion = SplitCriterion::info_gain;
    /// Minimum records on each side of a split.
    std::size_t min_leaf = 2;
    /// Attributes evaluated per node before accepting the best split; 0 means
    /// all. When none of the first K yields positive gain, further candidates
    /// are tried one at a time.
    std::size_t candidates_per_split = 0;
};

struct TreeNode {
    /// -1 for leaves.
    int attribute = -1;
    double threshold = 0;
    int left = -1;
    int right = -1;
    /// Training records reaching the node, per class.
    ClassDistribution distribution{};

    bool is_leaf() const noexcept { return attribute < 0; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary tree over numeric attributes; x[attribute] <= threshold goes left.
/// nodes[0] is the root.
struct DecisionTree {
    std::vector<TreeNode> nodes;

    const TreeNode& leaf_for(const FeatureVector& x) const {
        std::size_t i = 0;
        while (!nodes[i].is_leaf()) {
            const auto& n = nodes[i];
            i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.attribute)] <= n.threshold ? n.left
                                                                                                : n.right);
        }
        return nodes[i];
    }

    Label predict(const FeatureVector& x) const { return label_at(argmax(leaf_for(x).distribution)); }

    std::size_t depth() const { return depth_from(0); }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::size_t depth_from(std::size_t i) const {
        const auto& n = nodes[i];
        if (n.is_leaf()) return 0;
        return 1 + std::max(depth_from(static_cast<std::size_t>(n.left)),
                            depth_from(static_cast<std::size_t>(n.right)));
    }
};

/// Ordered attribute candidates for one node. Called once per split search.
using AttributeSampler = std::function<std::vector<std::size_t>()>;

inline double entropy(const ClassDistribution& d) {
    const double n = d[0] + d[1];
    if (n <= 0) return 0;
    double h = 0;
    for (double c : d) {
        if (c > 0) h -= (c / n) * std::log2(c / n);
    }
    return h;
}

inline ClassDistribution distribution_of(const Dataset& ds, std::span<const std::size_t> rows) {
    ClassDistribution d{};
    for (auto r : rows) d[index_of(ds.records[r].label)] += 1;
    return d;
}

struct Split {
    std::size_t attribute = 0;
    double threshold = 0;
    double gain = 0;
    double gain_ratio = 0;
};

namespace detail {

inline constexpr double kMinGain = 1e-10;

/// Best midpoint threshold of one attribute by information gain (lowest
/// threshold on ties), subject to min_size records per side.
inline std::optional<Split> best_threshold(const Dataset& ds, std::span<const std::size_t> rows,
                                           std::size_t attribute, std::size_t min_size,
                                           const ClassDistribution& total, std::vector<std::size_t>& scratch) {
    scratch.assign(rows.begin(), rows.end());
    const auto value = [&](std::size_t r) { return ds.records[r].features[attribute]; };
    std::stable_sort(scratch.begin(), scratch.end(),
                     [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    const double n = static_cast<double>(rows.size());
    const double parent = entropy(total);
    ClassDistribution left{};
    std::optional<Split> best;
    for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        left[index_of(ds.records[scratch[i]].label)] += 1;
        const double lo = value(scratch[i]);
        const double hi = value(scratch[i + 1]);
        if (!(lo < hi)) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_size || scratch.size() - n_left < min_size) continue;
        const ClassDistribution right{total[0] - left[0], total[1] - left[1]};
        const double wl = static_cast<double>(n_left) / n;
        const double gain = parent - wl * entropy(left) - (1 - wl) * entropy(right);
        if (!best || gain > best->gain) {
            double mid = lo + (hi - lo) / 2;
            if (!(mid < hi)) mid = lo;
            const double split_info = -(wl * std::log2(wl) + (1 - wl) * std::log2(1 - wl));
            best = Split{attribute, mid, gain, split_info > 0 ? gain / split_info : 0};
        }
    }
    return best;
}

inline bool prefer(const Split& a, const Split& b, SplitCriterion criterion) {
    const double ka = criterion == SplitCriterion::info_gain ? a.gain : a.gain_ratio;
    const double kb = criterion == SplitCriterion::info_gain ? b.gain : b.gain_ratio;
    return ka > kb || (ka == kb && a.attribute < b.attribute);
}

}  // namespace detail

/// Split for the records `rows`, or nullopt when no candidate has positive
/// gain. Info-gain mode maximizes gain. Gain-ratio mode follows C4.5: among
/// candidates whose gain reaches the average positive gain, maximize gain ratio,
/// and require max(min_leaf, min(25, 0.1 * n / 2)) records per side.
inline std::optional<Split> find_split(const Dataset& ds, std::span<const std::size_t> rows,
                                       const TreeOptions& opts, std::span<const std::size_t> order) {
    const ClassDistribution total = distribution_of(ds, rows);
    std::size_t min_size = std::max<std::size_t>(opts.min_leaf, 1);
    if (opts.criterion == SplitCriterion::gain_ratio) {
        const double c45 = std::min(25.0, 0.1 * static_cast<double>(rows.size()) / kClassCount);
        min_size = std::max(min_size, static_cast<std::size_t>(std::floor(c45)));
    }
    std::vector<std::size_t> scratch;
    std::vector<Split> found;
    const std::size_t k = opts.candidates_per_split == 0 ? order.size()
                                                        : std::min(opts.candidates_per_split, order.size());
    bool positive = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i >= k && positive) break;
        auto s = detail::best_threshold(ds, rows, order[i], min_size, total, scratch);
        if (s && s->gain > detail::kMinGain) {
            found.push_back(*s);
            positive = true;
        }
    }
    if (found.empty()) return std::nullopt;
    std::optional<Split> best;
    if (opts.criterion == SplitCriterion::info_gain) {
        for (const auto& s : found) {
            if (!best || detail::prefer(s, *best, opts.criterion)) best = s;
        }
        return best;
    }
    double avg = 0;
    for (const auto& s : found) avg += s.gain;
    avg /= static_cast<double>(found.size());
    for (const auto& s : found) {
        if (s.gain < avg - 1e-3) continue;
        if (!best || detail::prefer(s, *best, opts.criterion)) best = s;
    }
    return best;
}

inline std::vector<std::size_t> all_attributes() {
    std::vector<std::size_t> a(kFeatureCount);
    std::iota(a.begin(), a.end(), 0);
    return a;
}

namespace detail {

inline int grow(const Dataset& ds, std::vector<std::size_t> rows, const TreeOptions& opts,
                const AttributeSampler& sampler, DecisionTree& tree) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[id].distribution = distribution_of(ds, rows);
    const auto& d = tree.nodes[id].distribution;
    if (d[0] == 0 || d[1] == 0 || rows.size() < 2 * std::max<std::size_t>(opts.min_leaf, 1)) return id;
    const auto order = sampler ? sampler() : all_attributes();
    const auto split = find_split(ds, rows, opts, order);
    if (!split) return id;
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
        (ds.records[r].features[split->attribute] <= split->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(ds, std::move(left), opts, sampler, tree);
    const int r = grow(ds, std::move(right), opts, sampler, tree);
    auto& node = tree.nodes[id];
    node.attribute = static_cast<int>(split->attribute);
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    return id;
}

}  // namespace detail

/// Recursive binary partitioning of the records `rows` (duplicates allowed) of
/// `ds`. Growth stops at pure nodes, nodes too small to split, and nodes with no
/// positive-gain split. No pruning.
inline DecisionTree train_tree(const Dataset& ds, std::span<const std::size_t> rows, const TreeOptions& opts = {},
                               const AttributeSampler& sampler = {}) {
    if (rows.empty()) throw EmptyDatasetError("cannot grow a tree on zero records");
    DecisionTree tree;
    detail::grow(ds, std::vector<std::size_t>(rows.begin(), rows.end()), opts, sampler, tree);
    return tree;
}

inline DecisionTree train_tree(const Dataset& ds, const TreeOptions& opts = {}, const AttributeSampler& sampler = {}) {
    std::vector<std::size_t> rows(ds.size());
    std::iota(rows.begin(), rows.end(), 0);
    return train_tree(ds, rows, opts, sampler);
}

}  // namespace notescan
