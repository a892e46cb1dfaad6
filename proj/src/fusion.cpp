#include "texref/fusion.hpp"

#include "texref/error.hpp"

namespace texref {

ExtractionConfig ExtractionConfig::for_radius(int radius) {
    ExtractionConfig config;
    config.elbp = ElbpConfig::with_default_threshold(NeighborhoodSpec::from_radius(radius));
    return config;
}

std::string ExtractionConfig::key() const {
    return "R=" + std::to_string(radius()) + ";P=" + std::to_string(neighbors()) +
           ";UT=" + std::to_string(elbp.uniformity_threshold) +
           ";edge=" + edge_detector.to_string() + ";order=rgb;blocks=elbp,prepu";
}

FeatureVector::FeatureVector(int neighbors, std::vector<double> values)
    : neighbors_(neighbors), values_(std::move(values)) {
    if (neighbors <= 0 || values_.size() != feature_length(neighbors)) {
        throw Error(ErrorCode::CorruptFeatureLength,
                    "corrupt index: feature length " + std::to_string(values_.size()) +
                        " does not match 6P+9 for P=" + std::to_string(neighbors));
    }
}

std::size_t FeatureVector::block_size(int neighbors, int block) {
    return static_cast<std::size_t>(block_kind(block) == BlockKind::Elbp ? neighbors + 2
                                                                          : neighbors + 1);
}

std::size_t FeatureVector::block_offset(int neighbors, int block) {
    const auto channel = static_cast<std::size_t>(block / 2);
    std::size_t offset = channel * static_cast<std::size_t>(2 * neighbors + 3);
    if (block_kind(block) == BlockKind::PrePu) offset += static_cast<std::size_t>(neighbors + 2);
    return offset;
}

std::span<const double> FeatureVector::block(int index) const {
    if (index < 0 || index >= kBlockCount) {
        throw Error(ErrorCode::InvalidArgument, "block index out of range");
    }
    return std::span<const double>(values_).subspan(block_offset(neighbors_, index),
                                                    block_size(neighbors_, index));
}

std::span<double> FeatureVector::block(int index) {
    if (index < 0 || index >= kBlockCount) {
        throw Error(ErrorCode::InvalidArgument, "block index out of range");
    }
    return std::span<double>(values_).subspan(block_offset(neighbors_, index),
                                              block_size(neighbors_, index));
}

FeatureVector extract_features(const RgbImage& image, const ExtractionConfig& config) {
    const int side = 2 * config.radius() + 1;
    if (image.width() < side || image.height() < side) {
        throw Error(ErrorCode::ImageTooSmall,
                    "image of " + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()) + " too small for radius " +
                        std::to_string(config.radius()));
    }
    const auto planes = split_channels(image);
    std::vector<double> values;
    values.reserve(feature_length(config.neighbors()));
    for (const auto& plane : planes) {
        const auto elbp = elbp_histogram(plane, config.elbp);
        values.insert(values.end(), elbp.bins.begin(), elbp.bins.end());
        const auto edges = detect_edges(plane, config.edge_detector);
        const auto prepu = prepu_histogram(edges, config.elbp.spec);
        values.insert(values.end(), prepu.bins.begin(), prepu.bins.end());
    }
    return FeatureVector(config.neighbors(), std::move(values));
}

}  // namespace texref
