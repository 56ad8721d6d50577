#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "notescan/error.hpp"
#include "notescan/image.hpp"
#include "notescan/image_io.hpp"

namespace notescan {

inline constexpr std::size_t kStandardRows = 1056;
inline constexpr std::size_t kStandardCols = 2481;
inline constexpr std::size_t kMinRoiSide = 8;

/// BT.601 luma, integer arithmetic with round-half-up.
inline GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out(img.height(), img.width());
    auto& dst = out.pixels();
    const auto& src = img.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const unsigned weighted = 299u * src[i].r + 587u * src[i].g + 114u * src[i].b;
        dst[i] = static_cast<std::uint8_t>(std::min(255u, (weighted + 500u) / 1000u));
    }
    return out;
}

/// Result of Otsu's method. `threshold` < 0 means every candidate split was
/// degenerate (a single occupied intensity); otherwise foreground is v > threshold.
struct OtsuResult {
    int threshold = -1;
    /// Between-class variance at the chosen threshold (times N^2).
    long double score = 0;
};

/// Exhaustive Otsu search over t in [0, 254] with classes {v <= t} and {v > t}.
/// When the maximum is attained on a run of consecutive thresholds (an empty
/// intensity gap between two modes), the run's midpoint is returned.
inline OtsuResult otsu_threshold(const std::array<std::uint64_t, 256>& counts) {
    long double total = 0;
    long double sum = 0;
    for (int v = 0; v < 256; ++v) {
        total += static_cast<long double>(counts[v]);
        sum += static_cast<long double>(v) * static_cast<long double>(counts[v]);
    }
    std::array<long double, 255> score{};
    long double n0 = 0;
    long double s0 = 0;
    for (int t = 0; t < 255; ++t) {
        n0 += static_cast<long double>(counts[t]);
        s0 += static_cast<long double>(t) * static_cast<long double>(counts[t]);
        const long double n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        const long double diff = total * s0 - n0 * sum;
        score[t] = diff * diff / (n0 * n1);
    }
    OtsuResult best;
    int first = -1;
    for (int t = 0; t < 255; ++t) {
        if (score[t] > best.score) {
            best.score = score[t];
            first = t;
        }
    }
    if (first < 0) return best;
    int last = first;
    while (last + 1 < 255 && score[last + 1] == best.score) ++last;
    best.threshold = (first + last) / 2;
    return best;
}

inline std::array<std::uint64_t, 256> intensity_counts(const GrayImage& img) {
    std::array<std::uint64_t, 256> counts{};
    for (auto v : img.pixels()) ++counts[v];
    return counts;
}

/// Global Otsu binarization, foreground = brighter class. A constant image has
/// no valid split and is marked foreground everywhere, unless it is pure black.
inline BinaryMask binarize(const GrayImage& img) {
    const auto otsu = otsu_threshold(intensity_counts(img));
    BinaryMask mask(img.height(), img.width(), std::uint8_t{0});
    auto& bits = mask.pixels();
    const auto& px = img.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        bits[i] = px[i] > (otsu.threshold < 0 ? 0 : otsu.threshold) ? 1 : 0;
    }
    return mask;
}

struct Component {
    std::size_t pixel_count = 0;
    BoundingBox box;
};

/// All 8-connected foreground components, in raster order of their first pixel.
inline std::vector<Component> connected_components(const BinaryMask& mask) {
    const std::size_t h = mask.height();
    const std::size_t w = mask.width();
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<std::size_t> stack;
    std::vector<Component> out;
    const auto& bits = mask.pixels();
    for (std::size_t start = 0; start < bits.size(); ++start) {
        if (!bits[start] || seen[start]) continue;
        std::size_t min_r = h, max_r = 0, min_c = w, max_c = 0, count = 0;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const std::size_t r = idx / w;
            const std::size_t c = idx % w;
            ++count;
            min_r = std::min(min_r, r);
            max_r = std::max(max_r, r);
            min_c = std::min(min_c, c);
            max_c = std::max(max_c, c);
            const std::size_t r0 = r > 0 ? r - 1 : r;
            const std::size_t r1 = r + 1 < h ? r + 1 : r;
            const std::size_t c0 = c > 0 ? c - 1 : c;
            const std::size_t c1 = c + 1 < w ? c + 1 : c;
            for (std::size_t rr = r0; rr <= r1; ++rr) {
                for (std::size_t cc = c0; cc <= c1; ++cc) {
                    const std::size_t n = rr * w + cc;
                    if (bits[n] && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back(n);
                    }
                }
            }
        }
        out.push_back({count, {min_r, min_c, max_r - min_r + 1, max_c - min_c + 1}});
    }
    return out;
}

/// Tight bounding box of the largest 8-connected foreground component. Ties go
/// to the smallest box top, then the smallest box left.
inline BoundingBox largest_blob(const BinaryMask& mask) {
    const auto components = connected_components(mask);
    if (components.empty()) throw EmptyMaskError("mask has no foreground pixels");
    const Component* best = &components.front();
    for (const auto& comp : components) {
        const bool larger = comp.pixel_count > best->pixel_count;
        const bool tie = comp.pixel_count == best->pixel_count;
        if (larger || (tie && std::pair(comp.box.top, comp.box.left) <
                                  std::pair(best->box.top, best->box.left))) {
            best = &comp;
        }
    }
    return best->box;
}

/// Bilinear resampling with pixel-center alignment, edge clamping and
/// round-half-up.
inline GrayImage resize(const GrayImage& img, std::size_t out_rows, std::size_t out_cols) {
    if (out_rows == 0 || out_cols == 0) {
        throw InvalidArgument("resize target must be >= 1x1, got " + std::to_string(out_rows) + "x" +
                              std::to_string(out_cols));
    }
    struct Tap {
        std::size_t i0, i1;
        double frac;
    };
    auto taps = [](std::size_t in, std::size_t out) {
        std::vector<Tap> t(out);
        const double scale = static_cast<double>(in) / static_cast<double>(out);
        for (std::size_t i = 0; i < out; ++i) {
            double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
            src = std::clamp(src, 0.0, static_cast<double>(in - 1));
            const auto i0 = static_cast<std::size_t>(std::floor(src));
            const std::size_t i1 = std::min(i0 + 1, in - 1);
            t[i] = {i0, i1, src - static_cast<double>(i0)};
        }
        return t;
    };
    const auto rows = taps(img.height(), out_rows);
    const auto cols = taps(img.width(), out_cols);
    GrayImage out(out_rows, out_cols);
    for (std::size_t r = 0; r < out_rows; ++r) {
        const auto& ry = rows[r];
        const std::uint8_t* a = img.row(ry.i0);
        const std::uint8_t* b = img.row(ry.i1);
        std::uint8_t* dst = out.row(r);
        for (std::size_t c = 0; c < out_cols; ++c) {
            const auto& cx = cols[c];
            const double top = a[cx.i0] + (a[cx.i1] - a[cx.i0]) * cx.frac;
            const double bot = b[cx.i0] + (b[cx.i1] - b[cx.i0]) * cx.frac;
            const double v = top + (bot - top) * ry.frac;
            dst[c] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return out;
}

namespace detail {

/// Symmetric (edge-repeating) reflection of an out-of-range index.
inline std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
    const auto len = static_cast<std::ptrdiff_t>(n);
    const std::ptrdiff_t period = 2 * len;
    i %= period;
    if (i < 0) i += period;
    return static_cast<std::size_t>(i < len ? i : period - 1 - i);
}

}  // namespace detail

/// Adaptive Wiener filter over a window x window neighbourhood. The noise power
/// is estimated as the mean of all local variances.
inline GrayImage wiener_denoise(const GrayImage& img, std::size_t window = 3) {
    if (window < 3 || window % 2 == 0) {
        throw InvalidArgument("wiener window must be odd and >= 3, got " + std::to_string(window));
    }
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const std::size_t ph = h + window - 1;
    const std::size_t pw = w + window - 1;

    // Integral images of the padded raster: (ph+1) x (pw+1).
    std::vector<std::int64_t> sum((ph + 1) * (pw + 1), 0);
    std::vector<std::int64_t> sq((ph + 1) * (pw + 1), 0);
    std::vector<std::size_t> col_src(pw);
    for (std::size_t c = 0; c < pw; ++c) {
        col_src[c] = detail::reflect(static_cast<std::ptrdiff_t>(c) - half, w);
    }
    for (std::size_t r = 0; r < ph; ++r) {
        const std::uint8_t* src = img.row(detail::reflect(static_cast<std::ptrdiff_t>(r) - half, h));
        std::int64_t run = 0;
        std::int64_t run_sq = 0;
        for (std::size_t c = 0; c < pw; ++c) {
            const std::int64_t v = src[col_src[c]];
            run += v;
            run_sq += v * v;
            sum[(r + 1) * (pw + 1) + c + 1] = sum[r * (pw + 1) + c + 1] + run;
            sq[(r + 1) * (pw + 1) + c + 1] = sq[r * (pw + 1) + c + 1] + run_sq;
        }
    }
    auto box = [&](const std::vector<std::int64_t>& table, std::size_t r, std::size_t c) {
        const std::size_t r1 = r + window;
        const std::size_t c1 = c + window;
        return table[r1 * (pw + 1) + c1] - table[r * (pw + 1) + c1] - table[r1 * (pw + 1) + c] +
               table[r * (pw + 1) + c];
    };

    const double n = static_cast<double>(window * window);
    std::vector<double> mean(img.size());
    std::vector<double> var(img.size());
    double noise = 0;
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double mu = static_cast<double>(box(sum, r, c)) / n;
            const double m2 = static_cast<double>(box(sq, r, c)) / n;
            const std::size_t i = r * w + c;
            mean[i] = mu;
            var[i] = std::max(0.0, m2 - mu * mu);
            noise += var[i];
        }
    }
    noise /= static_cast<double>(img.size());

    GrayImage out(h, w);
    const auto& px = img.pixels();
    auto& dst = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double denom = std::max(var[i], noise);
        const double gain = denom > 0 ? std::max(0.0, var[i] - noise) / denom : 0.0;
        const double v = mean[i] + gain * (static_cast<double>(px[i]) - mean[i]);
        dst[i] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
    return out;
}

/// Rectangle in fractions of the image height (top, height) and width (left, width).
struct FractionalRect {
    double top = 0;
    double left = 0;
    double height = 0;
    double width = 0;

    friend bool operator==(const FractionalRect&, const FractionalRect&) = default;
};

/// Pixel box for `rect` on a rows x cols image: floor for the origin, ceil for
/// the extents, clipped to the image.
inline BoundingBox to_pixel_box(const FractionalRect& rect, std::size_t rows, std::size_t cols) {
    // Absorbs representation error such as 0.7 * 100 = 70.00000000000001.
    constexpr double slack = 1e-9;
    auto origin = [&](double f, std::size_t n) {
        return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + slack));
    };
    auto extent = [&](double f, std::size_t n) {
        return static_cast<std::size_t>(std::max(0.0, std::ceil(f * static_cast<double>(n) - slack)));
    };
    BoundingBox box{origin(rect.top, rows), origin(rect.left, cols), extent(rect.height, rows),
                    extent(rect.width, cols)};
    box.top = std::min(box.top, rows);
    box.left = std::min(box.left, cols);
    box.height = std::min(box.height, rows - box.top);
    box.width = std::min(box.width, cols - box.left);
    return box;
}

/// Locations of the holographic strip and the bottom design on the normalized
/// note. The defaults are placeholders to be calibrated on real scans.
struct RoiSpec {
    FractionalRect strip{0.0, 0.60, 1.0, 0.10};
    FractionalRect bottom{0.80, 0.0, 0.20, 1.0};

    friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

inline void validate_rect(const FractionalRect& rect, const std::string& name, std::size_t rows,
                          std::size_t cols) {
    for (double f : {rect.top, rect.left, rect.height, rect.width}) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw InvalidArgument(name + " fractions must lie in [0,1]");
        }
    }
    if (rect.top + rect.height > 1.0 + 1e-12 || rect.left + rect.width > 1.0 + 1e-12) {
        throw InvalidArgument(name + " extends past the image (top+height or left+width > 1)");
    }
    const auto box = to_pixel_box(rect, rows, cols);
    if (box.height < kMinRoiSide || box.width < kMinRoiSide) {
        throw DegenerateRegionError(name + " maps to " + std::to_string(box.height) + "x" +
                                    std::to_string(box.width) + " pixels on a " +
                                    std::to_string(rows) + "x" + std::to_string(cols) +
                                    " image; at least 8x8 required");
    }
}

inline void validate(const RoiSpec& spec, std::size_t rows = kStandardRows,
                     std::size_t cols = kStandardCols) {
    validate_rect(spec.strip, "strip ROI", rows, cols);
    validate_rect(spec.bottom, "bottom ROI", rows, cols);
}

struct RoiPair {
    GrayImage strip;
    GrayImage bottom;

    friend bool operator==(const RoiPair&, const RoiPair&) = default;
};

inline RoiPair extract_rois(const GrayImage& img, const RoiSpec& spec) {
    validate(spec, img.height(), img.width());
    return {crop(img, to_pixel_box(spec.strip, img.height(), img.width())),
            crop(img, to_pixel_box(spec.bottom, img.height(), img.width()))};
}

struct PreprocessOptions {
    std::size_t rows = kStandardRows;
    std::size_t cols = kStandardCols;
    std::size_t wiener_window = 3;
    RoiSpec rois;
};

/// Grayscale note isolated from its background, resized and denoised; the
/// image the ROIs are cut from.
inline GrayImage normalize_note(const RgbImage& scan, const PreprocessOptions& opts = {}) {
    const GrayImage gray = to_grayscale(scan);
    const BoundingBox note = largest_blob(binarize(gray));
    return wiener_denoise(resize(crop(gray, note), opts.rows, opts.cols), opts.wiener_window);
}

inline RoiPair preprocess(const RgbImage& scan, const PreprocessOptions& opts = {}) {
    validate(opts.rois, opts.rows, opts.cols);
    return extract_rois(normalize_note(scan, opts), opts.rois);
}

inline RoiPair preprocess(const std::filesystem::path& path, const PreprocessOptions& opts = {}) {
    return preprocess(load_image(path), opts);
}

}  // namespace notescan
