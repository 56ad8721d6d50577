#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "notescan/dataset.hpp"
#include "notescan/error.hpp"
#include "notescan/image.hpp"
#include "notescan/image_io.hpp"
#include "notescan/imaging.hpp"
#include "notescan/rng.hpp"

namespace notescan {

/// Synthetic scans: a light note with a bright frame on a dark scanner bed.
/// Genuine notes carry a smooth strip and a periodic grating in the bottom
/// design; counterfeits a grainy strip and an aperiodic blotch pattern.
struct FixtureOptions {
    std::size_t real = 50;
    std::size_t fake = 20;
    std::uint64_t seed = 7;
    std::size_t note_rows = 1120;
    std::size_t note_cols = 2620;
    /// Background margin on each side is drawn from [margin_min, margin_max].
    std::size_t margin_min = 24;
    std::size_t margin_max = 72;
    /// Texture placement; should match the ROI configuration used to extract.
    RoiSpec rois;
};

namespace detail {

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

/// Smooth random field: cell-grid values bilinearly interpolated.
class BlotchField {
public:
    BlotchField(Rng& rng, std::size_t rows, std::size_t cols, double cell)
        : cell_(cell), gr_(static_cast<std::size_t>(rows / cell) + 2), gc_(static_cast<std::size_t>(cols / cell) + 2),
          grid_(gr_ * gc_) {
        for (auto& v : grid_) v = rng.uniform() * 2 - 1;
    }

    double operator()(std::size_t r, std::size_t c) const {
        const double y = static_cast<double>(r) / cell_;
        const double x = static_cast<double>(c) / cell_;
        const auto y0 = static_cast<std::size_t>(y);
        const auto x0 = static_cast<std::size_t>(x);
        const double fy = y - static_cast<double>(y0);
        const double fx = x - static_cast<double>(x0);
        auto at = [&](std::size_t i, std::size_t j) { return grid_[i * gc_ + j]; };
        const double top = at(y0, x0) * (1 - fx) + at(y0, x0 + 1) * fx;
        const double bot = at(y0 + 1, x0) * (1 - fx) + at(y0 + 1, x0 + 1) * fx;
        return top * (1 - fy) + bot * fy;
    }

private:
    double cell_;
    std::size_t gr_, gc_;
    std::vector<double> grid_;
};

}  // namespace detail

/// One synthetic scan. `margins` = {top, left, bottom, right} background widths.
inline RgbImage generate_note(Label label, std::uint64_t seed, const FixtureOptions& opts,
                              std::array<std::size_t, 4> margins) {
    Rng rng(seed);
    const std::size_t nr = opts.note_rows;
    const std::size_t nc = opts.note_cols;
    const std::size_t H = nr + margins[0] + margins[2];
    const std::size_t W = nc + margins[1] + margins[3];
    constexpr double bed = 16;
    GrayImage note(nr, nc, std::uint8_t{0});

    const double brightness = rng.uniform() * 16 - 8;
    const double phase = rng.uniform() * 2 * std::numbers::pi;
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double paper = 196 + 6 * std::sin(static_cast<double>(c) / 180.0 + phase) +
                                 4 * std::cos(static_cast<double>(r) / 140.0);
            note(r, c) = detail::clamp_u8(paper + brightness);
        }
    }

    const bool genuine = label == Label::yes;
    const auto strip = to_pixel_box(opts.rois.strip, nr, nc);
    const double strip_sigma = genuine ? 2 + 2 * rng.uniform() : 10 + 6 * rng.uniform();
    const double strip_base = 168 + 8 * rng.uniform() + brightness;
    for (std::size_t r = strip.top; r < strip.bottom(); ++r) {
        for (std::size_t c = strip.left; c < strip.right(); ++c) {
            const double sheen = 5 * std::sin(static_cast<double>(r) / 37.0 + phase);
            note(r, c) = detail::clamp_u8(strip_base + sheen + strip_sigma * rng.normal());
        }
    }

    const auto bottom = to_pixel_box(opts.rois.bottom, nr, nc);
    const double amplitude = 36 + 8 * rng.uniform();
    const double period = 10 + 4 * rng.uniform();
    const double bottom_base = 150 + brightness;
    detail::BlotchField blotches(rng, bottom.height, bottom.width, 5 + 3 * rng.uniform());
    for (std::size_t r = bottom.top; r < bottom.bottom(); ++r) {
        for (std::size_t c = bottom.left; c < bottom.right(); ++c) {
            double v;
            if (genuine) {
                v = bottom_base + amplitude * std::sin(2 * std::numbers::pi * static_cast<double>(c) / period + phase);
            } else {
                v = bottom_base + amplitude * blotches(r - bottom.top, c - bottom.left);
            }
            note(r, c) = detail::clamp_u8(v + 2 * rng.normal());
        }
    }

    const std::size_t frame = std::max<std::size_t>(4, nr * 3 / 200);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            if (r < frame || c < frame || r >= nr - frame || c >= nc - frame) note(r, c) = 240;
        }
    }

    RgbImage scan(H, W, Rgb{static_cast<std::uint8_t>(bed), static_cast<std::uint8_t>(bed),
                            static_cast<std::uint8_t>(bed + 2)});
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double v = note(r, c);
            // Warm paper tint with luma close to v.
            scan(r + margins[0], c + margins[1]) =
                Rgb{detail::clamp_u8(v + 6), detail::clamp_u8(v - 1), detail::clamp_u8(v - 12)};
        }
    }
    return scan;
}

struct FixtureEntry {
    std::string filename;
    Label label;
};

/// Writes real + fake PNG scans named note_NNN.png and a labels.csv manifest.
/// Note i is drawn from RNG substream i of the seed; output is byte-identical
/// for equal options.
inline std::vector<FixtureEntry> write_fixtures(const std::filesystem::path& dir, const FixtureOptions& opts) {
    const std::size_t total = opts.real + opts.fake;
    if (total == 0) throw InvalidArgument("fixture corpus needs at least one image");
    if (opts.margin_min > opts.margin_max) throw InvalidArgument("margin_min exceeds margin_max");
    validate(opts.rois, opts.note_rows, opts.note_cols);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) throw IoError("cannot create fixture directory " + dir.string());

    std::vector<FixtureEntry> entries;
    for (std::size_t i = 0; i < total; ++i) {
        const Label label = i < opts.real ? Label::yes : Label::no;
        const std::uint64_t note_seed = substream_seed(opts.seed, i);
        Rng layout(note_seed ^ 0x5bd1e995ULL);
        std::array<std::size_t, 4> margins{};
        const std::size_t span = opts.margin_max - opts.margin_min + 1;
        for (auto& m : margins) m = opts.margin_min + static_cast<std::size_t>(layout.below(span));
        char name[32];
        std::snprintf(name, sizeof name, "note_%03zu.png", i);
        save_image(generate_note(label, note_seed, opts, margins), dir / name);
        entries.push_back({name, label});
    }
    std::ofstream manifest(dir / "labels.csv", std::ios::binary | std::ios::trunc);
    manifest << "filename,label\n";
    for (const auto& e : entries) manifest << e.filename << ',' << to_string(e.label) << '\n';
    manifest.flush();
    if (!manifest) throw IoError("cannot write " + (dir / "labels.csv").string());
    return entries;
}

}  // namespace notescan
