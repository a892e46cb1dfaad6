#pragma once

// Test-only helpers: image writers, random generators and naive reference
// implementations that do not share code with the library's fast paths.

#include "texref/descriptors.hpp"
#include "texref/image_io.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

namespace texref::testing {

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);
void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& values);
void write_jpeg(const std::filesystem::path& path, const RgbImage& image, int quality = 95);

ChannelPlane random_plane(std::mt19937& rng, int width, int height);
RgbImage random_image(std::mt19937& rng, int width, int height);
BinaryEdgeMap random_edge_map(std::mt19937& rng, int width, int height);

/// 90° counter-clockwise: out(y, W-1-x) = in(x, y).
ChannelPlane rotate_plane_ccw(const ChannelPlane& plane);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// --- naive oracles -------------------------------------------------------

/// Bits computed one by one from the sample, δ(x) = 1 iff x >= 0 (ties within 1e-9).
std::vector<int> oracle_bits(const NeighborhoodSample& sample);
std::uint64_t oracle_code(const std::vector<int>& bits);
int oracle_uniformity(const std::vector<int>& bits);
int oracle_elbp_label(const std::vector<int>& bits, int threshold);

/// Direct cos/sin placement and four-weight bilinear interpolation.
NeighborhoodSample oracle_sample(const ChannelPlane& plane, int cx, int cy, int radius);

std::vector<double> oracle_elbp_histogram(const ChannelPlane& plane, int radius, int threshold);
std::vector<double> oracle_prepu_histogram(const BinaryEdgeMap& edges, int radius);

/// Synthetic two-class corpus in `root/constant` and `root/checker`: ten flat
/// images with distinct gray levels and ten checkerboards with distinct
/// (horizontal, vertical) periods.
void write_two_class_corpus(const std::filesystem::path& root, int side = 64);

}  // namespace texref::testing
