#pragma once

#include "texref/image_io.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace texref {

/// Circular neighborhood of radius R with P = 8R samples.
class NeighborhoodSpec {
public:
    static constexpr int kMinRadius = 1;
    static constexpr int kMaxRadius = 3;

    /// Throws InvalidArgument unless radius is in [1, 3].
    static NeighborhoodSpec from_radius(int radius);

    int radius() const noexcept { return radius_; }
    int neighbors() const noexcept { return 8 * radius_; }

    friend bool operator==(const NeighborhoodSpec&, const NeighborhoodSpec&) = default;

private:
    explicit NeighborhoodSpec(int radius) : radius_(radius) {}
    int radius_;
};

/// Center intensity and its P circular neighbors, neighbor k at angle 2πk/P
/// (counter-clockwise from +x, image y pointing down).
struct NeighborhoodSample {
    double center = 0.0;
    std::vector<double> neighbors;
};

/// Offset magnitudes below this are treated as ties, which set the bit.
inline constexpr double kTieTolerance = 1e-9;

/// Step function used by every binary-pattern operator: 1 iff x >= 0.
inline bool threshold_bit(double difference) noexcept {
    return difference >= -kTieTolerance;
}

struct ElbpConfig {
    NeighborhoodSpec spec = NeighborhoodSpec::from_radius(1);
    int uniformity_threshold = 2;

    /// Default threshold P/4.
    static ElbpConfig with_default_threshold(NeighborhoodSpec spec) {
        return ElbpConfig{spec, spec.neighbors() / 4};
    }

    friend bool operator==(const ElbpConfig&, const ElbpConfig&) = default;
};

/// Bilinearly interpolated neighbors. The full circle must fit inside the plane.
NeighborhoodSample sample_neighbors(const ChannelPlane& plane, int cx, int cy,
                                    const NeighborhoodSpec& spec);

/// Bit k is set when neighbor k is >= the center.
std::uint32_t lbp_code(const NeighborhoodSample& sample);

/// Circular 0/1 transition count of the bit pattern.
int uniformity(const NeighborhoodSample& sample);

/// Number of set bits for patterns with uniformity <= threshold, else P+1.
int elbp_label(const NeighborhoodSample& sample, const ElbpConfig& config);

/// Same labels computed from a packed code of `neighbor_count` bits.
int uniformity_of_code(std::uint32_t code, int neighbor_count);
int elbp_label_of_code(std::uint32_t code, int neighbor_count, int uniformity_threshold);

struct ElbpHistogram {
    std::vector<double> bins;   // P+2, last bin = non-uniform
    friend bool operator==(const ElbpHistogram&, const ElbpHistogram&) = default;
};

struct PrePuHistogram {
    std::vector<double> bins;   // P+1
    friend bool operator==(const PrePuHistogram&, const PrePuHistogram&) = default;
};

/// Label-occurrence probabilities over all pixels with a full neighborhood.
ElbpHistogram elbp_histogram(const ChannelPlane& plane, const ElbpConfig& config);

// ---------------------------------------------------------------------------
// Edges and predefined pattern units

class EdgeDetector {
public:
    enum class Kind { SobelOtsu, RobertsOtsu, SobelFixed };

    /// Largest Sobel magnitude reachable on 8-bit input is 255·√20 ≈ 1140.4.
    static constexpr double kMaxFixedThreshold = 1141.0;

    static EdgeDetector sobel_otsu() { return EdgeDetector(Kind::SobelOtsu, 0.0); }
    static EdgeDetector roberts_otsu() { return EdgeDetector(Kind::RobertsOtsu, 0.0); }
    static EdgeDetector sobel_fixed(double threshold);

    /// Accepts `sobel-otsu`, `roberts-otsu`, `sobel-fixed:<t>`.
    static EdgeDetector parse(std::string_view text);
    std::string to_string() const;

    Kind kind() const noexcept { return kind_; }
    double threshold() const noexcept { return threshold_; }

    friend bool operator==(const EdgeDetector&, const EdgeDetector&) = default;

private:
    EdgeDetector(Kind kind, double threshold) : kind_(kind), threshold_(threshold) {}
    Kind kind_;
    double threshold_;
};

class BinaryEdgeMap {
public:
    BinaryEdgeMap() = default;
    BinaryEdgeMap(int width, int height, std::uint8_t fill = 0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    std::uint8_t& at(int x, int y) { return bits_[index(x, y)]; }
    std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const BinaryEdgeMap&, const BinaryEdgeMap&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Gradient magnitude map (0 where the kernel overhangs the border).
std::vector<double> gradient_magnitude(const ChannelPlane& plane, EdgeDetector::Kind kind);

/// Binarized gradient magnitude; border pixels are 0.
BinaryEdgeMap detect_edges(const ChannelPlane& plane, const EdgeDetector& detector);

/// 0 for a non-edge center, otherwise the number of edge neighbors (positions
/// rounded to the nearest pixel).
int prepu_label(const BinaryEdgeMap& edges, int cx, int cy, const NeighborhoodSpec& spec);

PrePuHistogram prepu_histogram(const BinaryEdgeMap& edges, const NeighborhoodSpec& spec);

}  // namespace texref
