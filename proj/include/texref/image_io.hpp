#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace texref {

/// Smallest accepted decoded dimension (one full R=1 neighborhood).
inline constexpr int kMinImageSide = 3;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Decoded raster, row-major, one RGB triplet per pixel.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
    const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }

    const std::vector<Rgb>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Rgb> pixels_;
};

/// One 8-bit channel of an image.
class ChannelPlane {
public:
    ChannelPlane() = default;
    ChannelPlane(int width, int height, std::uint8_t fill = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t& at(int x, int y) { return values_[index(x, y)]; }
    std::uint8_t at(int x, int y) const { return values_[index(x, y)]; }

    const std::vector<std::uint8_t>& values() const noexcept { return values_; }

    friend bool operator==(const ChannelPlane&, const ChannelPlane&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> values_;
};

/// Red, green, blue, in that order.
using ChannelPlanes = std::array<ChannelPlane, 3>;

/// Decodes a JPEG or PNG file (detected by signature, not extension).
/// Grayscale sources are replicated into all three channels; alpha is dropped.
RgbImage load_image(const std::filesystem::path& path);

ChannelPlanes split_channels(const RgbImage& image);
RgbImage merge_channels(const ChannelPlanes& planes);

enum class LabelingRule {
    Simplicity,     // numeric stems 0..999, class = id / 100
    BySubdirectory  // class = index of the sorted subdirectory name
};

std::string_view to_string(LabelingRule rule);
LabelingRule parse_labeling(std::string_view text);

struct ManifestEntry {
    std::uint32_t image_id = 0;
    std::filesystem::path path;           // absolute or root-joined
    std::string relative_path;            // generic form, relative to root
    std::uint16_t class_label = 0;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    std::filesystem::path root;
    LabelingRule labeling = LabelingRule::Simplicity;
    std::vector<ManifestEntry> entries;   // strictly increasing image_id
    std::map<std::uint16_t, std::size_t> class_counts;

    std::size_t size() const noexcept { return entries.size(); }
};

/// True for `.jpg`, `.jpeg`, `.png` (case-insensitive).
bool has_image_extension(const std::filesystem::path& path);

DatasetManifest scan_dataset(const std::filesystem::path& root, LabelingRule labeling);

}  // namespace texref
