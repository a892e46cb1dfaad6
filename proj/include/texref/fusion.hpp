#pragma once

#include "texref/descriptors.hpp"
#include "texref/image_io.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace texref {

/// One neighborhood shared by ELBP and Pre-PU, applied to R, G, B in order.
struct ExtractionConfig {
    ElbpConfig elbp = ElbpConfig::with_default_threshold(NeighborhoodSpec::from_radius(1));
    EdgeDetector edge_detector = EdgeDetector::sobel_otsu();

    static ExtractionConfig for_radius(int radius);

    int radius() const noexcept { return elbp.spec.radius(); }
    int neighbors() const noexcept { return elbp.spec.neighbors(); }

    /// Canonical text form, stable across runs; equal configs give equal keys.
    std::string key() const;

    friend bool operator==(const ExtractionConfig&, const ExtractionConfig&) = default;
};

inline constexpr int kChannelCount = 3;
inline constexpr int kBlockCount = 2 * kChannelCount;

/// 6P + 9
constexpr std::size_t feature_length(int neighbors) {
    return static_cast<std::size_t>(6 * neighbors + 9);
}

enum class BlockKind { Elbp, PrePu };

/// Six probability blocks: (red ELBP, red Pre-PU, green ELBP, green Pre-PU,
/// blue ELBP, blue Pre-PU). ELBP blocks have P+2 bins, Pre-PU blocks P+1.
class FeatureVector {
public:
    FeatureVector() = default;

    /// Throws CorruptFeatureLength unless values.size() == 6P+9.
    FeatureVector(int neighbors, std::vector<double> values);

    int neighbors() const noexcept { return neighbors_; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }

    static std::size_t block_offset(int neighbors, int block);
    static std::size_t block_size(int neighbors, int block);
    static BlockKind block_kind(int block) { return block % 2 == 0 ? BlockKind::Elbp : BlockKind::PrePu; }

    std::span<const double> block(int index) const;
    std::span<double> block(int index);

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    int neighbors_ = 0;
    std::vector<double> values_;
};

/// Per channel: ELBP histogram of the plane, then Pre-PU histogram of its edge map.
FeatureVector extract_features(const RgbImage& image, const ExtractionConfig& config);

}  // namespace texref
