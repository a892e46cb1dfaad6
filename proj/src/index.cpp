#include "texref/index.hpp"

#include "texref/error.hpp"
#include "texref/parallel.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <unordered_map>

namespace texref {

namespace fs = std::filesystem;
using nlohmann::json;

IndexHeader FeatureIndex::header() const {
    IndexHeader h;
    h.radius = config.radius();
    h.neighbors = config.neighbors();
    h.uniformity_threshold = config.elbp.uniformity_threshold;
    h.edge_detector = config.edge_detector.to_string();
    h.labeling = std::string(to_string(labeling));
    h.feature_length = feature_length(config.neighbors());
    h.count = records.size();
    return h;
}

FeatureIndex build_index(const DatasetManifest& manifest, const ExtractionConfig& config) {
    if (manifest.entries.empty()) {
        throw Error(ErrorCode::EmptyDataset, "cannot build an index from an empty manifest");
    }
    FeatureIndex index;
    index.config = config;
    index.labeling = manifest.labeling;
    index.records.resize(manifest.entries.size());
    parallel_for(manifest.entries.size(), [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        try {
            const auto image = load_image(entry.path);
            index.records[i] = IndexRecord{entry.image_id, entry.class_label, entry.relative_path,
                                           extract_features(image, config)};
        } catch (const Error& e) {
            const std::string what = e.what();
            if (what.find(entry.path.string()) != std::string::npos) throw;
            throw Error(e.code(), "failed to index " + entry.path.string() + ": " + what);
        }
    });
    return index;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t uint(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    double f64() { return std::bit_cast<double>(uint(8)); }

    std::string_view take(std::size_t n) {
        need(n);
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(ErrorCode::Truncated, "truncated index file");
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

template <typename T>
T header_field(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw Error(ErrorCode::Corrupt, std::string("corrupt index: header lacks '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::Corrupt, std::string("corrupt index: bad header field '") + key + "'");
    }
}

void check_block_invariants(const IndexRecord& record) {
    for (int b = 0; b < kBlockCount; ++b) {
        double sum = 0.0;
        for (double v : record.features.block(b)) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw Error(ErrorCode::Corrupt, "corrupt index: negative or non-finite feature in " +
                                                    record.relative_path);
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw Error(ErrorCode::Corrupt,
                        "corrupt index: feature block does not sum to 1 in " + record.relative_path);
        }
    }
}

std::vector<IndexRecord> parse_records(std::string_view body, std::size_t count, int neighbors,
                                       std::size_t length) {
    Reader in(body);
    // Each record needs at least id + label + path length + features.
    const std::size_t min_record = 8 + 8 * length;
    if (count > in.remaining() / min_record) {
        throw Error(ErrorCode::Truncated,
                    "truncated index file: " + std::to_string(count) + " records declared");
    }
    std::vector<IndexRecord> records;
    records.reserve(count);
    std::set<std::uint32_t> ids;
    for (std::size_t i = 0; i < count; ++i) {
        IndexRecord record;
        record.image_id = static_cast<std::uint32_t>(in.uint(4));
        record.class_label = static_cast<std::uint16_t>(in.uint(2));
        const auto path_size = static_cast<std::size_t>(in.uint(2));
        record.relative_path = std::string(in.take(path_size));
        std::vector<double> values(length);
        for (auto& v : values) v = in.f64();
        record.features = FeatureVector(neighbors, std::move(values));
        if (!ids.insert(record.image_id).second) {
            throw Error(ErrorCode::Corrupt,
                        "corrupt index: duplicate image id " + std::to_string(record.image_id));
        }
        check_block_invariants(record);
        records.push_back(std::move(record));
    }
    if (in.remaining() != 0) {
        throw Error(ErrorCode::Corrupt, "corrupt index: " + std::to_string(in.remaining()) +
                                            " trailing bytes after the declared records");
    }
    return records;
}

// Record length (in reals) under which `count` records exactly tile `body`,
// used to tell a feature-length mismatch apart from plain truncation.
std::optional<std::size_t> record_length_that_fits(std::string_view body, std::size_t count) {
    constexpr std::size_t kMaxProbe = 4096;
    if (count == 0) return std::nullopt;
    for (std::size_t length = 1; length <= kMaxProbe; ++length) {
        std::size_t pos = 0;
        bool ok = true;
        for (std::size_t i = 0; i < count && ok; ++i) {
            if (body.size() - pos < 8) {
                ok = false;
                break;
            }
            const std::size_t path_size = static_cast<unsigned char>(body[pos + 6]) |
                                          (static_cast<std::size_t>(static_cast<unsigned char>(body[pos + 7])) << 8);
            const std::size_t step = 8 + path_size + 8 * length;
            if (body.size() - pos < step) ok = false;
            else pos += step;
        }
        if (ok && pos == body.size()) return length;
    }
    return std::nullopt;
}

}  // namespace

std::string serialize_index(const FeatureIndex& index) {
    const IndexHeader h = index.header();
    const json header = {
        {"version", h.version},
        {"radius", h.radius},
        {"neighbors", h.neighbors},
        {"uniformity_threshold", h.uniformity_threshold},
        {"edge_detector", h.edge_detector},
        {"labeling", h.labeling},
        {"feature_length", h.feature_length},
        {"count", h.count},
    };
    const std::string text = header.dump();

    std::string out;
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out += text;
    for (const auto& record : index.records) {
        if (record.relative_path.size() > 0xFFFF) {
            throw Error(ErrorCode::InvalidArgument, "path too long to store: " + record.relative_path);
        }
        if (record.features.size() != h.feature_length) {
            throw Error(ErrorCode::CorruptFeatureLength,
                        "corrupt index: feature length of " + record.relative_path);
        }
        put_u32(out, record.image_id);
        put_u16(out, record.class_label);
        put_u16(out, static_cast<std::uint16_t>(record.relative_path.size()));
        out += record.relative_path;
        for (double v : record.features.values()) put_f64(out, v);
    }
    return out;
}

FeatureIndex deserialize_index(std::string_view bytes) {
    Reader in(bytes);
    const auto header_size = static_cast<std::size_t>(in.uint(4));
    const auto header_text = in.take(header_size);

    json header;
    try {
        header = json::parse(header_text);
    } catch (const json::exception&) {
        throw Error(ErrorCode::Corrupt, "corrupt index: header is not valid JSON");
    }
    if (!header.is_object()) {
        throw Error(ErrorCode::Corrupt, "corrupt index: header is not a JSON object");
    }
    const int version = header_field<int>(header, "version");
    if (version != kIndexFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion,
                    "unsupported version " + std::to_string(version) + " (expected 1)");
    }
    const int radius = header_field<int>(header, "radius");
    const int neighbors = header_field<int>(header, "neighbors");
    const int threshold = header_field<int>(header, "uniformity_threshold");
    const auto edge = header_field<std::string>(header, "edge_detector");
    const auto labeling = header_field<std::string>(header, "labeling");
    const auto length = header_field<std::size_t>(header, "feature_length");
    const auto count = header_field<std::size_t>(header, "count");

    FeatureIndex index;
    try {
        index.config.elbp = ElbpConfig{NeighborhoodSpec::from_radius(radius), threshold};
        index.config.edge_detector = EdgeDetector::parse(edge);
        index.labeling = parse_labeling(labeling);
    } catch (const Error& e) {
        throw Error(ErrorCode::IncompatibleConfig, std::string("incompatible index config: ") + e.what());
    }
    if (neighbors != 8 * radius || threshold < 0) {
        throw Error(ErrorCode::IncompatibleConfig,
                    "incompatible index config: neighbors=" + std::to_string(neighbors) +
                        " radius=" + std::to_string(radius));
    }
    if (length != feature_length(neighbors)) {
        throw Error(ErrorCode::CorruptFeatureLength,
                    "corrupt index: feature length " + std::to_string(length) +
                        " does not equal 6P+9=" + std::to_string(feature_length(neighbors)));
    }
    const std::string_view body = bytes.substr(4 + header_size);
    try {
        index.records = parse_records(body, count, neighbors, length);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Truncated && e.code() != ErrorCode::Corrupt) throw;
        if (const auto actual = record_length_that_fits(body, count); actual && *actual != length) {
            throw Error(ErrorCode::CorruptFeatureLength,
                        "corrupt index: feature length (records hold " + std::to_string(*actual) +
                            " values, header declares " + std::to_string(length) + ")");
        }
        throw;
    }
    return index;
}

void save_index(const FeatureIndex& index, const fs::path& path) {
    const std::string bytes = serialize_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write index: " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write index: " + path.string());
    }
}

FeatureIndex load_index(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read index: " + path.string());
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return deserialize_index(bytes);
    } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + ": " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Query

QueryResult query_features(const FeatureIndex& index, const FeatureVector& features,
                           MetricId metric, std::size_t n,
                           std::optional<std::uint32_t> excluded_id) {
    if (index.records.empty()) {
        throw Error(ErrorCode::EmptyCandidates, "index is empty");
    }
    std::vector<Candidate> candidates;
    candidates.reserve(index.records.size());
    for (const auto& record : index.records) {
        if (excluded_id && record.image_id == *excluded_id) continue;
        candidates.emplace_back(record.image_id, &record.features);
    }
    QueryResult result;
    if (candidates.empty()) return result;

    const auto ranked = rank(features, candidates, metric, n);
    std::unordered_map<std::uint32_t, const IndexRecord*> by_id;
    by_id.reserve(index.records.size());
    for (const auto& record : index.records) by_id.emplace(record.image_id, &record);
    result.hits.reserve(ranked.size());
    for (const auto& r : ranked) {
        const IndexRecord* record = by_id.at(r.id);
        result.hits.push_back(QueryHit{r.id, record->class_label, record->relative_path, r.distance});
    }
    return result;
}

bool same_relative_path(const fs::path& query_path, const std::string& relative_path) {
    const fs::path rel(relative_path);
    std::error_code ec;
    fs::path full = fs::weakly_canonical(query_path, ec);
    if (ec) full = query_path;

    std::vector<fs::path> tail(full.begin(), full.end());
    std::vector<fs::path> want(rel.begin(), rel.end());
    if (want.empty() || want.size() > tail.size()) return false;
    return std::equal(want.rbegin(), want.rend(), tail.rbegin());
}

QueryResult query(const FeatureIndex& index, const fs::path& query_image_path, MetricId metric,
                  std::size_t n, bool include_self) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    }
    if (index.records.empty()) {
        throw Error(ErrorCode::EmptyCandidates, "index is empty");
    }
    const auto features = extract_features(load_image(query_image_path), index.config);
    std::optional<std::uint32_t> excluded;
    if (!include_self) {
        for (const auto& record : index.records) {
            if (same_relative_path(query_image_path, record.relative_path)) {
                excluded = record.image_id;
                break;
            }
        }
    }
    return query_features(index, features, metric, n, excluded);
}

}  // namespace texref
