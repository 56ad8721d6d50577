#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "notescan/error.hpp"
#include "notescan/image.hpp"
#include "notescan/imaging.hpp"

namespace notescan {

struct Histogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;
};

inline Histogram histogram(const GrayImage& img) {
    Histogram h;
    h.counts = intensity_counts(img);
    h.total = img.size();
    return h;
}

struct FirstOrderStats {
    double variance = 0;
    double skewness = 0;
    double kurtosis = 0;
    /// Shannon entropy in bits.
    double entropy = 0;
};

/// Moments of the intensity distribution. Kurtosis is non-excess. A
/// zero-variance histogram reports skewness = kurtosis = 0.
inline FirstOrderStats first_order_stats(const Histogram& h) {
    if (h.total == 0) throw InvalidArgument("histogram is empty");
    const double total = static_cast<double>(h.total);
    double mean = 0;
    for (int i = 0; i < 256; ++i) mean += i * (static_cast<double>(h.counts[i]) / total);
    FirstOrderStats s;
    double m3 = 0;
    double m4 = 0;
    for (int i = 0; i < 256; ++i) {
        if (h.counts[i] == 0) continue;
        const double p = static_cast<double>(h.counts[i]) / total;
        const double d = i - mean;
        const double d2 = d * d;
        s.variance += d2 * p;
        m3 += d2 * d * p;
        m4 += d2 * d2 * p;
        s.entropy -= p * std::log2(p);
    }
    if (s.variance > 0) {
        const double sd = std::sqrt(s.variance);
        s.skewness = m3 / (s.variance * sd);
        s.kurtosis = m4 / (s.variance * s.variance);
    }
    s.entropy = std::max(0.0, s.entropy);
    return s;
}

/// Pixel displacement (row delta, column delta) between the two members of a
/// co-occurring pair.
struct Offset {
    int dr = 0;
    int dc = 0;

    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Distance-1 offsets for 0, 45, 90 and 135 degrees.
inline constexpr std::array<Offset, 4> kDirections{Offset{0, 1}, Offset{-1, 1}, Offset{-1, 0},
                                                   Offset{-1, -1}};

/// Image whose pixels are quantization levels in [0, levels).
struct LevelImage {
    Raster<std::uint8_t> data;
    std::size_t levels = 0;
};

/// Equal-width binning of [0,255] into `levels` bins: level = v * levels / 256.
inline LevelImage quantize(const GrayImage& img, std::size_t levels) {
    if (levels < 2 || levels > 256) {
        throw InvalidArgument("GLCM levels must be in [2,256], got " + std::to_string(levels));
    }
    LevelImage out{Raster<std::uint8_t>(img.height(), img.width()), levels};
    auto& dst = out.data.pixels();
    const auto& src = img.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(static_cast<std::size_t>(src[i]) * levels / 256);
    }
    return out;
}

/// Normalized gray-level co-occurrence matrix, row = reference level,
/// column = neighbour level.
struct Glcm {
    std::size_t levels = 0;
    Offset offset;
    std::vector<double> p;  // levels * levels, row-major

    double operator()(std::size_t i, std::size_t j) const noexcept { return p[i * levels + j]; }
};

/// Co-occurrence probabilities of (img[r,c], img[r+dr, c+dc]) over every valid
/// position. When `symmetric`, each pair is also counted in reverse.
inline Glcm glcm(const LevelImage& img, Offset offset, bool symmetric = false) {
    const auto h = static_cast<std::ptrdiff_t>(img.data.height());
    const auto w = static_cast<std::ptrdiff_t>(img.data.width());
    const std::size_t L = img.levels;
    if (L < 2) throw InvalidArgument("GLCM needs at least 2 levels");
    const std::ptrdiff_t r0 = std::max<std::ptrdiff_t>(0, -offset.dr);
    const std::ptrdiff_t r1 = std::min<std::ptrdiff_t>(h, h - offset.dr);
    const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, -offset.dc);
    const std::ptrdiff_t c1 = std::min<std::ptrdiff_t>(w, w - offset.dc);
    if (r0 >= r1 || c0 >= c1) {
        throw NoValidPairsError("no pixel pairs for offset (" + std::to_string(offset.dr) + "," +
                                std::to_string(offset.dc) + ") on a " + std::to_string(h) + "x" +
                                std::to_string(w) + " image");
    }
    std::vector<std::uint64_t> counts(L * L, 0);
    for (std::ptrdiff_t r = r0; r < r1; ++r) {
        const std::uint8_t* a = img.data.row(static_cast<std::size_t>(r));
        const std::uint8_t* b = img.data.row(static_cast<std::size_t>(r + offset.dr));
        for (std::ptrdiff_t c = c0; c < c1; ++c) {
            const std::size_t i = a[c];
            const std::size_t j = b[c + offset.dc];
            if (i >= L || j >= L) throw InvalidArgument("level exceeds GLCM level count");
            ++counts[i * L + j];
            if (symmetric) ++counts[j * L + i];
        }
    }
    std::uint64_t total = 0;
    for (auto n : counts) total += n;
    Glcm g{L, offset, std::vector<double>(L * L)};
    for (std::size_t k = 0; k < counts.size(); ++k) {
        g.p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    }
    return g;
}

inline Glcm glcm(const GrayImage& img, Offset offset, std::size_t levels = 8, bool symmetric = false) {
    return glcm(quantize(img, levels), offset, symmetric);
}

struct GlcmStats {
    double contrast = 0;
    double correlation = 0;
    double energy = 0;
    double homogeneity = 0;
};

/// Contrast, correlation, energy and homogeneity (1/(1+|i-j|) weighting).
/// Correlation is 1 when either marginal has zero variance.
inline GlcmStats glcm_stats(const Glcm& g) {
    const std::size_t L = g.levels;
    double mu_i = 0, mu_j = 0;
    GlcmStats s;
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            const double p = g(i, j);
            if (p == 0) continue;
            const double d = static_cast<double>(i) - static_cast<double>(j);
            mu_i += static_cast<double>(i) * p;
            mu_j += static_cast<double>(j) * p;
            s.contrast += d * d * p;
            s.energy += p * p;
            s.homogeneity += p / (1.0 + std::abs(d));
        }
    }
    double var_i = 0, var_j = 0, cov = 0;
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            const double p = g(i, j);
            if (p == 0) continue;
            const double di = static_cast<double>(i) - mu_i;
            const double dj = static_cast<double>(j) - mu_j;
            var_i += di * di * p;
            var_j += dj * dj * p;
            cov += di * dj * p;
        }
    }
    const double denom = std::sqrt(var_i) * std::sqrt(var_j);
    s.correlation = denom > 1e-15 ? std::clamp(cov / denom, -1.0, 1.0) : 1.0;
    return s;
}

struct GlcmOptions {
    std::size_t levels = 8;
    bool symmetric = false;
};

struct TextureStats {
    FirstOrderStats first;
    GlcmStats second;
};

/// First-order statistics of the ROI plus GLCM statistics averaged over the
/// four directions.
inline TextureStats texture_features(const GrayImage& roi, const GlcmOptions& opts = {}) {
    if (roi.height() < kMinRoiSide || roi.width() < kMinRoiSide) {
        throw UndersizedRoiError("ROI is " + std::to_string(roi.height()) + "x" +
                                 std::to_string(roi.width()) + "; at least 8x8 required");
    }
    TextureStats out;
    out.first = first_order_stats(histogram(roi));
    const LevelImage levels = quantize(roi, opts.levels);
    for (const Offset& dir : kDirections) {
        const GlcmStats s = glcm_stats(glcm(levels, dir, opts.symmetric));
        out.second.contrast += s.contrast;
        out.second.correlation += s.correlation;
        out.second.energy += s.energy;
        out.second.homogeneity += s.homogeneity;
    }
    const double n = static_cast<double>(kDirections.size());
    out.second.contrast /= n;
    out.second.correlation /= n;
    out.second.energy /= n;
    out.second.homogeneity /= n;
    return out;
}

inline constexpr std::size_t kFeatureCount = 16;

/// Attribute names in dataset column order: strip block then bottom block.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames{
    "Contrast_1", "Correlation_1", "Energy_1", "Homogeneity_1",
    "Entropy_1",  "Variance_1",    "Skewness_1", "Kurtosis_1",
    "Contrast_2", "Correlation_2", "Energy_2", "Homogeneity_2",
    "Entropy_2",  "Variance_2",    "Skewness_2", "Kurtosis_2"};

using FeatureVector = std::array<double, kFeatureCount>;

inline void write_block(const TextureStats& t, double* dst) {
    dst[0] = t.second.contrast;
    dst[1] = t.second.correlation;
    dst[2] = t.second.energy;
    dst[3] = t.second.homogeneity;
    dst[4] = t.first.entropy;
    dst[5] = t.first.variance;
    dst[6] = t.first.skewness;
    dst[7] = t.first.kurtosis;
}

inline FeatureVector feature_vector(const RoiPair& rois, const GlcmOptions& opts = {}) {
    FeatureVector v{};
    write_block(texture_features(rois.strip, opts), v.data());
    write_block(texture_features(rois.bottom, opts), v.data() + 8);
    return v;
}

}  // namespace notescan
