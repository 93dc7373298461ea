#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wiregraph/raster.hpp"

namespace wiregraph {

enum class Polarity {
    /// luminance >= threshold is stroke (white strokes on black maps)
    BrightIsStroke,
    /// luminance < threshold is stroke
    DarkIsStroke,
};

/// Decodes PNG/JPEG bytes (gray or color) into luminance.
GrayImage decode_gray(std::span<const std::uint8_t> bytes);

BitMap load_bitmap(std::span<const std::uint8_t> bytes, int threshold = 128,
                   Polarity polarity = Polarity::BrightIsStroke);

BitMap to_bitmap(const GrayImage& gray, int threshold = 128, Polarity polarity = Polarity::BrightIsStroke);

std::vector<std::uint8_t> encode_png(const GrayImage& image);
/// Strokes written white (255) on black.
std::vector<std::uint8_t> encode_png(const BitMap& map);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace wiregraph
