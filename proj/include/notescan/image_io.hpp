#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "notescan/error.hpp"
#include "notescan/image.hpp"

namespace notescan {

enum class ImageFormat { png, jpeg };

namespace detail {

inline bool has_known_signature(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::array<unsigned char, 8> head{};
    in.read(reinterpret_cast<char*>(head.data()), head.size());
    const auto n = in.gcount();
    static constexpr std::array<unsigned char, 8> png{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (n >= 8 && head == png) return true;
    return n >= 3 && head[0] == 0xff && head[1] == 0xd8 && head[2] == 0xff;
}

inline cv::Mat to_mat(const RgbImage& img) {
    cv::Mat mat(static_cast<int>(img.height()), static_cast<int>(img.width()), CV_8UC3);
    for (std::size_t r = 0; r < img.height(); ++r) {
        auto* dst = mat.ptr<cv::Vec3b>(static_cast<int>(r));
        const Rgb* src = img.row(r);
        for (std::size_t c = 0; c < img.width(); ++c) dst[c] = cv::Vec3b(src[c].b, src[c].g, src[c].r);
    }
    return mat;
}

inline cv::Mat to_mat(const GrayImage& img) {
    cv::Mat mat(static_cast<int>(img.height()), static_cast<int>(img.width()), CV_8UC1);
    for (std::size_t r = 0; r < img.height(); ++r) {
        std::copy(img.row(r), img.row(r) + img.width(), mat.ptr<std::uint8_t>(static_cast<int>(r)));
    }
    return mat;
}

template <typename Image>
void write_mat(const Image& img, const std::filesystem::path& path, ImageFormat format, int quality) {
    std::vector<int> params;
    if (format == ImageFormat::png) {
        params = {cv::IMWRITE_PNG_COMPRESSION, 3};
    } else {
        params = {cv::IMWRITE_JPEG_QUALITY, quality};
    }
    std::vector<unsigned char> bytes;
    if (!cv::imencode(format == ImageFormat::png ? ".png" : ".jpg", to_mat(img), bytes, params)) {
        throw IoError("could not encode image for " + path.string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("could not write " + path.string());
}

}  // namespace detail

/// Decodes a JPEG or PNG file (format sniffed from its leading bytes, not the
/// extension). Orientation metadata is ignored so dimensions match the raster.
inline RgbImage load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw FileNotFoundError("image not found: " + path.string());
    }
    if (!detail::has_known_signature(path)) {
        throw DecodeError("not a JPEG or PNG file: " + path.string());
    }
    cv::Mat mat;
    try {
        mat = cv::imread(path.string(), cv::IMREAD_COLOR | cv::IMREAD_IGNORE_ORIENTATION);
    } catch (const cv::Exception& e) {
        throw DecodeError("failed to decode " + path.string() + ": " + e.what());
    }
    if (mat.empty() || mat.type() != CV_8UC3) {
        throw DecodeError("failed to decode " + path.string());
    }
    RgbImage img(static_cast<std::size_t>(mat.rows), static_cast<std::size_t>(mat.cols));
    for (int r = 0; r < mat.rows; ++r) {
        const auto* src = mat.ptr<cv::Vec3b>(r);
        Rgb* dst = img.row(static_cast<std::size_t>(r));
        for (int c = 0; c < mat.cols; ++c) dst[c] = Rgb{src[c][2], src[c][1], src[c][0]};
    }
    return img;
}

inline void save_image(const RgbImage& img, const std::filesystem::path& path,
                       ImageFormat format = ImageFormat::png, int jpeg_quality = 95) {
    detail::write_mat(img, path, format, jpeg_quality);
}

inline void save_image(const GrayImage& img, const std::filesystem::path& path,
                       ImageFormat format = ImageFormat::png, int jpeg_quality = 95) {
    detail::write_mat(img, path, format, jpeg_quality);
}

}  // namespace notescan
