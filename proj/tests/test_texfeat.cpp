#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "notescan/notescan.hpp"
#include "oracles.hpp"

using namespace notescan;
using testing_helpers::gray_from;
using testing_helpers::random_gray;

namespace {

oracle::Grid to_grid(const GrayImage& img) {
    oracle::Grid g(img.height(), std::vector<int>(img.width()));
    for (std::size_t r = 0; r < img.height(); ++r)
        for (std::size_t c = 0; c < img.width(); ++c) g[r][c] = img(r, c);
    return g;
}

LevelImage levels_from(std::initializer_list<std::initializer_list<int>> rows, std::size_t L) {
    return LevelImage{gray_from(rows), L};
}

}  // namespace

TEST(Histogram, CountsEveryPixel) {
    const auto h = histogram(GrayImage(3, 3, std::uint8_t{7}));
    EXPECT_EQ(h.counts[7], 9u);
    EXPECT_EQ(h.total, 9u);
    const auto h2 = histogram(gray_from({{0, 1, 1, 2}}));
    EXPECT_EQ(h2.counts[0], 1u);
    EXPECT_EQ(h2.counts[1], 2u);
    EXPECT_EQ(h2.counts[2], 1u);
    std::mt19937 gen(1);
    const auto h3 = histogram(random_gray(gen, 16, 16));
    std::uint64_t sum = 0;
    for (auto c : h3.counts) sum += c;
    EXPECT_EQ(sum, 256u);
}

TEST(FirstOrder, ConstantImageIsDegenerate) {
    const auto s = first_order_stats(histogram(GrayImage(5, 5, std::uint8_t{40})));
    EXPECT_EQ(s.variance, 0);
    EXPECT_EQ(s.entropy, 0);
    EXPECT_EQ(s.skewness, 0);
    EXPECT_EQ(s.kurtosis, 0);
}

TEST(FirstOrder, UniformHistogramHasEightBitsOfEntropy) {
    Histogram h;
    h.counts.fill(3);
    h.total = 768;
    EXPECT_NEAR(first_order_stats(h).entropy, 8.0, 1e-12);
}

TEST(FirstOrder, TwoPointDistribution) {
    Histogram h;
    h.counts[0] = 50;
    h.counts[255] = 50;
    h.total = 100;
    const auto s = first_order_stats(h);
    EXPECT_NEAR(s.variance, 16256.25, 1e-9);
    EXPECT_NEAR(s.skewness, 0.0, 1e-12);
    EXPECT_NEAR(s.kurtosis, 1.0, 1e-12);
    EXPECT_NEAR(s.entropy, 1.0, 1e-12);
}

TEST(FirstOrder, SymmetricTwoPointKurtosisIsOneAtAnySpacing) {
    for (int a = 0; a < 250; a += 37) {
        Histogram h;
        h.counts[a] = 7;
        h.counts[a + 5] = 7;
        h.total = 14;
        const auto s = first_order_stats(h);
        EXPECT_NEAR(s.kurtosis, 1.0, 1e-12);
        EXPECT_NEAR(s.skewness, 0.0, 1e-12);
    }
}

TEST(FirstOrder, MatchesPixelLoopOracle) {
    std::mt19937 gen(21);
    for (int trial = 0; trial < 60; ++trial) {
        const auto img = random_gray(gen, 1 + gen() % 30, 1 + gen() % 30, gen() % 60, 120 + gen() % 136);
        const std::vector<int> px(img.pixels().begin(), img.pixels().end());
        const auto want = oracle::pixel_moments(px);
        const auto got = first_order_stats(histogram(img));
        auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
        EXPECT_TRUE(rel(got.variance, want.variance)) << got.variance << " vs " << want.variance;
        EXPECT_TRUE(rel(got.skewness, want.skewness)) << got.skewness << " vs " << want.skewness;
        EXPECT_TRUE(rel(got.kurtosis, want.kurtosis)) << got.kurtosis << " vs " << want.kurtosis;
        EXPECT_TRUE(rel(got.entropy, want.entropy)) << got.entropy << " vs " << want.entropy;
    }
}

TEST(Glcm, WorkedTwoLevelExample) {
    const auto img = levels_from({{0, 0, 1, 1}, {0, 0, 1, 1}, {0, 0, 1, 1}, {0, 0, 1, 1}}, 2);
    const auto g = glcm(img, Offset{0, 1});
    EXPECT_NEAR(g(0, 0), 1.0 / 3, 1e-15);
    EXPECT_NEAR(g(0, 1), 1.0 / 3, 1e-15);
    EXPECT_EQ(g(1, 0), 0.0);
    EXPECT_NEAR(g(1, 1), 1.0 / 3, 1e-15);

    const auto s = glcm_stats(g);
    EXPECT_NEAR(s.contrast, 1.0 / 3, 1e-12);
    EXPECT_NEAR(s.energy, 1.0 / 3, 1e-12);
    EXPECT_NEAR(s.homogeneity, 5.0 / 6, 1e-12);
    EXPECT_NEAR(s.correlation, 0.5, 1e-12);
}

TEST(Glcm, ConstantImageHasOneCell) {
    const GrayImage img(6, 6, std::uint8_t{200});
    for (const auto& dir : kDirections) {
        const auto g = glcm(img, dir, 8);
        const std::size_t bin = 200 * 8 / 256;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(g(i, j), (i == bin && j == bin) ? 1.0 : 0.0);
        const auto s = glcm_stats(g);
        EXPECT_EQ(s.energy, 1.0);
        EXPECT_EQ(s.contrast, 0.0);
        EXPECT_EQ(s.correlation, 1.0);
        EXPECT_EQ(s.homogeneity, 1.0);
    }
}

TEST(Glcm, SinglePixelHasNoPairs) {
    EXPECT_THROW(glcm(GrayImage(1, 1), Offset{0, 1}, 8), NoValidPairsError);
}

TEST(Glcm, MatchesPairEnumerationOracle) {
    std::mt19937 gen(17);
    for (int trial = 0; trial < 120; ++trial) {
        const auto img = random_gray(gen, 2 + gen() % 15, 2 + gen() % 15);
        for (std::size_t L : {2u, 4u, 8u}) {
            const auto q = quantize(img, L);
            const auto grid = to_grid(q.data);
            for (const auto& dir : kDirections) {
                const auto want = oracle::glcm(grid, dir.dr, dir.dc, int(L));
                const auto got = glcm(q, dir);
                double total = 0;
                for (std::size_t i = 0; i < L; ++i) {
                    for (std::size_t j = 0; j < L; ++j) {
                        EXPECT_EQ(got(i, j), want[i][j]);
                        total += got(i, j);
                    }
                }
                EXPECT_NEAR(total, 1.0, 1e-12);
            }
        }
    }
}

TEST(Glcm, HorizontalMirrorTransposesZeroDegreeMatrix) {
    std::mt19937 gen(33);
    for (int trial = 0; trial < 50; ++trial) {
        const auto img = random_gray(gen, 3 + gen() % 10, 3 + gen() % 10);
        GrayImage mirrored(img.height(), img.width());
        for (std::size_t r = 0; r < img.height(); ++r)
            for (std::size_t c = 0; c < img.width(); ++c) mirrored(r, img.width() - 1 - c) = img(r, c);
        const auto a = glcm(img, Offset{0, 1}, 8);
        const auto b = glcm(mirrored, Offset{0, 1}, 8);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(a(i, j), b(j, i));
    }
}

TEST(GlcmStats, DiagonalAndSingleCellConventions) {
    Glcm diag{4, Offset{0, 1}, std::vector<double>(16, 0.0)};
    for (std::size_t i = 0; i < 4; ++i) diag.p[i * 4 + i] = 0.25;
    const auto s = glcm_stats(diag);
    EXPECT_EQ(s.contrast, 0.0);
    EXPECT_NEAR(s.homogeneity, 1.0, 1e-15);
    EXPECT_NEAR(s.correlation, 1.0, 1e-12);

    Glcm single{4, Offset{0, 1}, std::vector<double>(16, 0.0)};
    single.p[0 * 4 + 3] = 1.0;
    const auto t = glcm_stats(single);
    EXPECT_EQ(t.energy, 1.0);
    EXPECT_EQ(t.contrast, 9.0);
    EXPECT_EQ(t.correlation, 1.0);
}

TEST(GlcmStats, EnergyAndHomogeneityBounds) {
    std::mt19937 gen(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto img = random_gray(gen, 2 + gen() % 8, 2 + gen() % 8, 0, trial % 2 ? 255 : 63);
        for (const auto& dir : kDirections) {
            const auto g = glcm(img, dir, 4);
            const auto s = glcm_stats(g);
            std::size_t nonzero = 0;
            double off_diagonal = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = 0; j < 4; ++j) {
                    nonzero += g(i, j) > 0;
                    if (i != j) off_diagonal += g(i, j);
                }
            }
            EXPECT_LE(s.energy, 1.0 + 1e-15);
            EXPECT_EQ(std::abs(s.energy - 1.0) < 1e-12, nonzero == 1);
            EXPECT_LE(s.homogeneity, 1.0 + 1e-15);
            EXPECT_EQ(std::abs(s.homogeneity - 1.0) < 1e-12, off_diagonal == 0);
        }
    }
}

TEST(TextureFeatures, VerticalStripesHaveMoreHorizontalContrast) {
    GrayImage img(8, 8);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) img(r, c) = c % 2 ? 255 : 0;
    const double c0 = glcm_stats(glcm(img, kDirections[0], 8)).contrast;
    const double c90 = glcm_stats(glcm(img, kDirections[2], 8)).contrast;
    EXPECT_GT(c0, c90);
    const double mean = texture_features(img).second.contrast;
    EXPECT_GT(mean, c90);
    EXPECT_LT(mean, c0);
}

TEST(TextureFeatures, AverageEqualsIndependentPerDirectionMean) {
    std::mt19937 gen(55);
    for (int trial = 0; trial < 20; ++trial) {
        const auto img = random_gray(gen, 8 + gen() % 8, 8 + gen() % 8);
        const auto q = quantize(img, 8);
        const auto grid = to_grid(q.data);
        double contrast = 0, energy = 0, homogeneity = 0;
        for (const auto& dir : kDirections) {
            const auto p = oracle::glcm(grid, dir.dr, dir.dc, 8);
            for (int i = 0; i < 8; ++i) {
                for (int j = 0; j < 8; ++j) {
                    contrast += (i - j) * (i - j) * p[i][j] / 4;
                    energy += p[i][j] * p[i][j] / 4;
                    homogeneity += p[i][j] / (1 + std::abs(i - j)) / 4;
                }
            }
        }
        const auto got = texture_features(img).second;
        EXPECT_NEAR(got.contrast, contrast, 1e-12);
        EXPECT_NEAR(got.energy, energy, 1e-12);
        EXPECT_NEAR(got.homogeneity, homogeneity, 1e-12);
    }
}

TEST(TextureFeatures, UndersizedRoiThrows) {
    EXPECT_THROW(texture_features(GrayImage(7, 20)), UndersizedRoiError);
}

TEST(FeatureVector, ConstantRoisFollowConventions) {
    const RoiPair rois{GrayImage(10, 10, std::uint8_t{90}), GrayImage(12, 9, std::uint8_t{10})};
    const auto v = feature_vector(rois);
    for (std::size_t block : {0u, 8u}) {
        EXPECT_EQ(v[block + 0], 0.0);  // contrast
        EXPECT_EQ(v[block + 1], 1.0);  // correlation
        EXPECT_EQ(v[block + 2], 1.0);  // energy
        EXPECT_EQ(v[block + 3], 1.0);  // homogeneity
        EXPECT_EQ(v[block + 4], 0.0);  // entropy
        EXPECT_EQ(v[block + 5], 0.0);  // variance
    }
}

TEST(FeatureVector, SwappingRoisSwapsBlocks) {
    std::mt19937 gen(61);
    const auto a = random_gray(gen, 12, 10);
    const auto b = random_gray(gen, 9, 20, 30, 90);
    const auto ab = feature_vector(RoiPair{a, b});
    const auto ba = feature_vector(RoiPair{b, a});
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(ab[i], ba[i + 8]);
        EXPECT_EQ(ab[i + 8], ba[i]);
    }
}

TEST(FeatureVector, BlocksMatchPerRoiStatsInColumnOrder) {
    std::mt19937 gen(62);
    const auto a = random_gray(gen, 16, 16);
    const auto b = random_gray(gen, 16, 16, 100, 140);
    const auto v = feature_vector(RoiPair{a, b});
    const auto ta = texture_features(a);
    EXPECT_EQ(v[0], ta.second.contrast);
    EXPECT_EQ(v[1], ta.second.correlation);
    EXPECT_EQ(v[4], ta.first.entropy);
    EXPECT_EQ(v[7], ta.first.kurtosis);
    EXPECT_EQ(kFeatureNames[0], "Contrast_1");
    EXPECT_EQ(kFeatureNames[15], "Kurtosis_2");
}
