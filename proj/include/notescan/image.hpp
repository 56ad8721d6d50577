#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "notescan/error.hpp"

namespace notescan {

/// Dense row-major 2-D raster.
template <typename Pixel>
class Raster {
public:
    using value_type = Pixel;

    Raster() = default;

    Raster(std::size_t height, std::size_t width, Pixel fill = Pixel{})
        : height_(height), width_(width), pixels_(height * width, fill) {
        if (height == 0 || width == 0) {
            throw InvalidArgument("raster dimensions must be >= 1, got " + std::to_string(height) +
                                  "x" + std::to_string(width));
        }
    }

    Raster(std::size_t height, std::size_t width, std::vector<Pixel> pixels)
        : height_(height), width_(width), pixels_(std::move(pixels)) {
        if (height == 0 || width == 0) throw InvalidArgument("raster dimensions must be >= 1");
        if (pixels_.size() != height * width) {
            throw InvalidArgument("pixel count " + std::to_string(pixels_.size()) +
                                  " does not match " + std::to_string(height) + "x" +
                                  std::to_string(width));
        }
    }

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    Pixel& operator()(std::size_t row, std::size_t col) noexcept { return pixels_[row * width_ + col]; }
    const Pixel& operator()(std::size_t row, std::size_t col) const noexcept {
        return pixels_[row * width_ + col];
    }

    Pixel* row(std::size_t r) noexcept { return pixels_.data() + r * width_; }
    const Pixel* row(std::size_t r) const noexcept { return pixels_.data() + r * width_; }

    std::vector<Pixel>& pixels() noexcept { return pixels_; }
    const std::vector<Pixel>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<Pixel> pixels_;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Raster<Rgb>;
using GrayImage = Raster<std::uint8_t>;
/// Foreground flags; 1 = foreground.
using BinaryMask = Raster<std::uint8_t>;

struct BoundingBox {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t bottom() const noexcept { return top + height; }
    std::size_t right() const noexcept { return left + width; }
    std::size_t area() const noexcept { return height * width; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline std::string to_string(const BoundingBox& b) {
    return "(top=" + std::to_string(b.top) + ", left=" + std::to_string(b.left) +
           ", height=" + std::to_string(b.height) + ", width=" + std::to_string(b.width) + ")";
}

template <typename Pixel>
bool box_fits(const Raster<Pixel>& img, const BoundingBox& box) noexcept {
    return box.height >= 1 && box.width >= 1 && box.top < img.height() && box.left < img.width() &&
           box.height <= img.height() - box.top && box.width <= img.width() - box.left;
}

/// Copies the pixels under `box`. Throws OutOfBoundsError when the box does not
/// lie entirely inside the image.
template <typename Pixel>
Raster<Pixel> crop(const Raster<Pixel>& img, const BoundingBox& box) {
    if (!box_fits(img, box)) {
        throw OutOfBoundsError("crop box " + to_string(box) + " outside " +
                               std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                               " image");
    }
    Raster<Pixel> out(box.height, box.width);
    for (std::size_t r = 0; r < box.height; ++r) {
        const Pixel* src = img.row(box.top + r) + box.left;
        std::copy(src, src + box.width, out.row(r));
    }
    return out;
}

}  // namespace notescan
