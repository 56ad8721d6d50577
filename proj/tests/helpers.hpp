#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "notescan/notescan.hpp"

namespace testing_helpers {

inline notescan::GrayImage gray_from(std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t h = rows.size();
    const std::size_t w = rows.begin()->size();
    notescan::GrayImage img(h, w);
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (int v : row) img(r, c++) = static_cast<std::uint8_t>(v);
        ++r;
    }
    return img;
}

inline notescan::GrayImage random_gray(std::mt19937& gen, std::size_t h, std::size_t w, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> d(lo, hi);
    notescan::GrayImage img(h, w);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(d(gen));
    return img;
}

/// Record whose leading attributes are `lead` and the rest zero.
inline notescan::FeatureRecord record(std::initializer_list<double> lead, notescan::Label label) {
    notescan::FeatureRecord r;
    std::size_t i = 0;
    for (double v : lead) r.features[i++] = v;
    r.label = label;
    return r;
}

inline notescan::Dataset random_dataset(std::mt19937& gen, std::size_t n, double scale = 10.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::bernoulli_distribution coin(0.4);
    notescan::Dataset ds;
    for (std::size_t i = 0; i < n; ++i) {
        notescan::FeatureRecord r;
        for (auto& v : r.features) v = d(gen);
        r.label = coin(gen) ? notescan::Label::no : notescan::Label::yes;
        ds.records.push_back(r);
    }
    ds.records[0].label = notescan::Label::yes;
    if (n > 1) ds.records[1].label = notescan::Label::no;
    return ds;
}

/// Class determined by attribute 0 alone, with a gap around 0.5; the other
/// attributes are uniform noise. With `noise` > 0 that fraction of labels is
/// flipped (exactly round(noise * n) records, chosen at random).
inline notescan::Dataset separable_dataset(std::uint32_t seed, std::size_t n, double noise = 0.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    notescan::Dataset ds;
    for (std::size_t i = 0; i < n; ++i) {
        notescan::FeatureRecord r;
        for (auto& v : r.features) v = u(gen);
        const bool yes = i % 2 == 0;
        r.features[0] = yes ? 0.6 + 0.4 * u(gen) : 0.4 * u(gen);
        r.label = yes ? notescan::Label::yes : notescan::Label::no;
        ds.records.push_back(r);
    }
    if (noise > 0) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), gen);
        const auto flips = static_cast<std::size_t>(std::lround(noise * static_cast<double>(n)));
        for (std::size_t i = 0; i < flips; ++i) {
            auto& l = ds.records[idx[i]].label;
            l = l == notescan::Label::yes ? notescan::Label::no : notescan::Label::yes;
        }
    }
    return ds;
}

/// Fresh empty directory under the system temp directory.
inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("notescan_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing_helpers
