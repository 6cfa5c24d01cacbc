#pragma once

#include "ric/histogram.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ric {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px);

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Reads binary (P5) or ASCII (P2) PGM with maxval 255.
GrayImage read_pgm(std::string_view bytes);
/// Writes binary P5.
std::string write_pgm(const GrayImage& img);
std::string write_pgm_ascii(const GrayImage& img);

/// Histogram of the 256 gray levels on the unit grid 0, 1, ..., 256.
BinnedSample gray_histogram(const GrayImage& img);

/// Per-level lookup table built once from a source histogram: every level
/// of an interval maps to that interval's rounded count-weighted mean level
/// (its midpoint when empty).
struct Quantizer {
    SubPartition partition;
    std::vector<std::uint8_t> levels;
    std::array<std::uint8_t, 256> lut{};

    GrayImage apply(const GrayImage& img) const;
};

Quantizer make_quantizer(const BinnedSample& gray_hist, const SubPartition& part);

/// Shorthand for make_quantizer(gray_histogram(img), part).apply(img).
GrayImage quantize(const GrayImage& img, const SubPartition& part);

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10·log₁₀(255² / MSE); kInfinitePsnr for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

std::size_t distinct_levels(const GrayImage& img);

/// JSON {m, levels, psnr_db}; an infinite PSNR is written as null.
std::string quantization_report_json(const Quantizer& q, double psnr_db);

} // namespace ric
