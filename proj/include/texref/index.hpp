#pragma once

#include "texref/fusion.hpp"
#include "texref/image_io.hpp"
#include "texref/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace texref {

inline constexpr int kIndexFormatVersion = 1;

struct IndexHeader {
    int version = kIndexFormatVersion;
    int radius = 1;
    int neighbors = 8;
    int uniformity_threshold = 2;
    std::string edge_detector = "sobel-otsu";
    std::string labeling = "simplicity";
    std::size_t feature_length = 57;
    std::size_t count = 0;

    friend bool operator==(const IndexHeader&, const IndexHeader&) = default;
};

struct IndexRecord {
    std::uint32_t image_id = 0;
    std::uint16_t class_label = 0;
    std::string relative_path;
    FeatureVector features;

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

/// Immutable once built or loaded; safe to share across concurrent queries.
struct FeatureIndex {
    ExtractionConfig config;
    LabelingRule labeling = LabelingRule::Simplicity;
    std::vector<IndexRecord> records;

    IndexHeader header() const;

    friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;
};

/// Extracts every manifest entry (in parallel), keeping manifest order.
/// Any failure aborts the whole build and names the offending path.
FeatureIndex build_index(const DatasetManifest& manifest, const ExtractionConfig& config);

/// Length-prefixed JSON header followed by little-endian binary records.
std::string serialize_index(const FeatureIndex& index);
FeatureIndex deserialize_index(std::string_view bytes);

void save_index(const FeatureIndex& index, const std::filesystem::path& path);
FeatureIndex load_index(const std::filesystem::path& path);

struct QueryHit {
    std::uint32_t image_id = 0;
    std::uint16_t class_label = 0;
    std::string relative_path;
    double distance = 0.0;

    friend bool operator==(const QueryHit&, const QueryHit&) = default;
};

struct QueryResult {
    std::vector<QueryHit> hits;
};

/// Ranks the index against already-extracted features. `excluded_id`, when
/// set, removes that record from the candidates.
QueryResult query_features(const FeatureIndex& index, const FeatureVector& features,
                           MetricId metric, std::size_t n,
                           std::optional<std::uint32_t> excluded_id = std::nullopt);

/// True when the trailing path components of `query_path` spell `relative_path`.
bool same_relative_path(const std::filesystem::path& query_path, const std::string& relative_path);

/// Extracts the query with the index's configuration and returns the top n.
/// Records whose relative path matches the query are dropped unless include_self.
QueryResult query(const FeatureIndex& index, const std::filesystem::path& query_image_path,
                  MetricId metric, std::size_t n, bool include_self);

}  // namespace texref
