#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "notescan/notescan.hpp"

using namespace notescan;
using testing_helpers::record;

namespace {

FeatureVector at(double x) {
    FeatureVector v{};
    v[0] = x;
    return v;
}

/// 50 real and 20 fake records with distinct random features.
Dataset imbalanced(std::uint32_t seed, std::size_t yes = 50, std::size_t no = 20) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0, 1);
    Dataset ds;
    for (std::size_t i = 0; i < yes + no; ++i) {
        FeatureRecord r;
        for (auto& v : r.features) v = u(gen);
        r.label = i < yes ? Label::yes : Label::no;
        ds.records.push_back(r);
    }
    return ds;
}

double imbalance(const Dataset& ds) {
    const auto n = ds.class_counts();
    return double(std::min(n[0], n[1])) / double(std::max(n[0], n[1]));
}

}  // namespace

TEST(Knn, NearestFirst) {
    const std::vector<FeatureVector> pool{at(1), at(2), at(3)};
    EXPECT_EQ(k_nearest_neighbors(at(0), pool, 2), (std::vector<std::size_t>{0, 1}));
}

TEST(Knn, SelfExcludedAndDuplicatesByIndex) {
    const std::vector<FeatureVector> pool{at(5), at(5), at(5), at(9)};
    EXPECT_EQ(k_nearest_neighbors(pool[1], pool, 2, 1), (std::vector<std::size_t>{0, 2}));
}

TEST(Knn, PoolSmallerThanK) {
    const std::vector<FeatureVector> pool{at(1), at(2), at(3)};
    EXPECT_THROW(k_nearest_neighbors(at(0), pool, 4), InvalidArgument);
}

TEST(Knn, AgreesWithFullSort) {
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> d(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<FeatureVector> pool(30);
        for (auto& v : pool)
            for (std::size_t a = 0; a < 3; ++a) v[a] = d(gen);
        const FeatureVector q = pool[trial % 30];
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (i != std::size_t(trial % 30)) idx.push_back(i);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
            return squared_distance(q, pool[a]) < squared_distance(q, pool[b]);
        });
        idx.resize(7);
        EXPECT_EQ(k_nearest_neighbors(q, pool, 7, std::size_t(trial % 30)), idx);
    }
}

TEST(Smote, DoublesTwentyFakeNotes) {
    const auto ds = imbalanced(1);
    const auto out = smote(ds, SmoteConfig{100, 5, 1, Label::no});
    EXPECT_EQ(out.count(Label::no), 40u);
    EXPECT_EQ(out.count(Label::yes), 50u);
}

TEST(Smote, ThreeHundredPercentOnTenRecords) {
    const auto ds = imbalanced(2, 12, 10);
    const auto out = smote(ds, SmoteConfig{300, 5, 9, std::nullopt});
    EXPECT_EQ(out.count(Label::no), 40u);
    EXPECT_EQ(out.size(), ds.size() + 30);
}

TEST(Smote, SyntheticsLieOnParentNeighbourSegments) {
    const auto ds = imbalanced(4);
    const SmoteConfig cfg{300, 5, 77, Label::no};
    const auto out = smote(ds, cfg);
    std::vector<FeatureVector> members;
    for (const auto& r : ds.records)
        if (r.label == Label::no) members.push_back(r.features);
    std::size_t next = ds.size();
    for (std::size_t p = 0; p < members.size(); ++p) {
        const auto nn = k_nearest_neighbors(members[p], members, 5, p);
        for (int s = 0; s < 3; ++s, ++next) {
            const auto& y = out.records[next].features;
            EXPECT_EQ(out.records[next].label, Label::no);
            bool on_some_segment = false;
            for (auto n : nn) {
                const auto& b = members[n];
                double u = -1;
                bool ok = true;
                for (std::size_t a = 0; a < kFeatureCount && ok; ++a) {
                    const double span = b[a] - members[p][a];
                    if (std::abs(span) < 1e-12) {
                        ok = std::abs(y[a] - members[p][a]) < 1e-12;
                        continue;
                    }
                    const double t = (y[a] - members[p][a]) / span;
                    if (u < 0) u = t;
                    ok = std::abs(t - u) < 1e-9 && t >= -1e-12 && t <= 1 + 1e-12;
                }
                on_some_segment = on_some_segment || ok;
            }
            EXPECT_TRUE(on_some_segment) << "synthetic " << next;
        }
    }
}

TEST(Smote, OriginalsKeptInOrderAndEnvelopeRespected) {
    const auto ds = imbalanced(5);
    const auto out = smote(ds, SmoteConfig{200, 5, 3, std::nullopt});
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(out.records[i], ds.records[i]);
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        double lo = 1e9, hi = -1e9;
        for (const auto& r : ds.records)
            if (r.label == Label::no) lo = std::min(lo, r.features[a]), hi = std::max(hi, r.features[a]);
        for (std::size_t i = ds.size(); i < out.size(); ++i) {
            EXPECT_GE(out.records[i].features[a], lo);
            EXPECT_LE(out.records[i].features[a], hi);
        }
    }
}

TEST(Smote, SeedDeterminism) {
    const auto ds = imbalanced(6);
    const auto a = smote(ds, SmoteConfig{100, 5, 11, std::nullopt});
    EXPECT_EQ(a, smote(ds, SmoteConfig{100, 5, 11, std::nullopt}));
    const auto b = smote(ds, SmoteConfig{100, 5, 12, std::nullopt});
    EXPECT_NE(a, b);
}

TEST(Smote, CountsObeyFormula) {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t no = 2 + gen() % 30;
        const auto ds = imbalanced(gen(), 40, no);
        const int percent = 100 * int(1 + gen() % 4);
        const auto out = smote(ds, SmoteConfig{percent, 1 + gen() % 7, gen(), Label::no});
        EXPECT_EQ(out.count(Label::no), no * (1 + percent / 100));
        EXPECT_EQ(out.count(Label::yes), 40u);
    }
}

TEST(Smote, KIsClippedForTinyClasses) {
    const auto ds = imbalanced(8, 10, 3);
    EXPECT_EQ(smote(ds, SmoteConfig{100, 5, 1, std::nullopt}).count(Label::no), 6u);
}

TEST(Smote, AbsentOrSingletonClassRejected) {
    const auto ds = imbalanced(9, 10, 1);
    EXPECT_THROW(smote(ds, SmoteConfig{100, 5, 1, Label::no}), TooFewRecordsError);
    Dataset yes_only;
    yes_only.records = {record({1}, Label::yes), record({2}, Label::yes)};
    EXPECT_THROW(smote(yes_only, SmoteConfig{100, 5, 1, Label::no}), ClassAbsentError);
}

TEST(Smote, InvalidPercentRejected) {
    const auto ds = imbalanced(10);
    EXPECT_THROW(smote(ds, SmoteConfig{150, 5, 1, std::nullopt}), InvalidArgument);
    EXPECT_THROW(smote(ds, SmoteConfig{0, 5, 1, std::nullopt}), InvalidArgument);
    EXPECT_THROW(smote(ds, SmoteConfig{100, 0, 1, std::nullopt}), InvalidArgument);
}

TEST(SmoteSchedule, PaperFirstLevel) {
    const auto ds = imbalanced(11);
    const std::vector<int> percents{100, 200, 300};
    const auto levels = smote_levels(percents, 5, 1);
    const auto out = smote_schedule(ds, levels);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].count(Label::no), 40u);
    EXPECT_EQ(out[0].count(Label::yes), 50u);
    EXPECT_LE(out[0].size(), out[1].size());
    EXPECT_LE(out[1].size(), out[2].size());
    EXPECT_LT(std::abs(imbalance(out[2]) - 1), std::abs(imbalance(ds) - 1));
    EXPECT_DOUBLE_EQ(imbalance(ds), 0.4);
}

TEST(SmoteSchedule, EachLevelExtendsThePrevious) {
    const auto ds = imbalanced(12);
    const std::vector<int> percents{100, 200};
    const auto out = smote_schedule(ds, smote_levels(percents, 5, 3));
    for (std::size_t i = 0; i < out[0].size(); ++i) EXPECT_EQ(out[1].records[i], out[0].records[i]);
}
