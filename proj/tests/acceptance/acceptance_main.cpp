// Acceptance criteria that run on generated data. The Simplicity-corpus
// criteria live in corpus_acceptance.cpp.

#include "harness.hpp"
#include "support/test_support.hpp"

#include "texref/error.hpp"
#include "texref/eval.hpp"
#include "texref/index.hpp"

#include "texref/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace texref::acceptance {
namespace {

namespace fs = std::filesystem;
namespace t = texref::testing;

std::string count_text(std::size_t mismatches, std::size_t total) {
    return std::to_string(mismatches) + " mismatches in " + std::to_string(total) + " checks";
}

// Checks one sample both ways: the library's sampling against the oracle's
// independent sampling, and the library's operators against the oracle bit
// loop on the same sample.
std::size_t sample_mismatches(const ChannelPlane& plane, int c, int radius) {
    const auto spec = NeighborhoodSpec::from_radius(radius);
    const auto config = ElbpConfig::with_default_threshold(spec);
    const auto sample = sample_neighbors(plane, c, c, spec);
    const auto reference = t::oracle_sample(plane, c, c, radius);
    std::size_t bad = 0;
    for (const auto* s : {&sample, &reference}) {
        const auto bits = t::oracle_bits(*s);
        bad += lbp_code(*s) != t::oracle_code(bits);
        bad += uniformity(*s) != t::oracle_uniformity(bits);
        bad += elbp_label(*s, config) != t::oracle_elbp_label(bits, config.uniformity_threshold);
    }
    bad += lbp_code(sample) != t::oracle_code(t::oracle_bits(reference));
    return bad;
}

Verdict descriptor_oracle_equivalence() {
    std::mt19937 rng(1001);
    std::size_t bad = 0;
    std::size_t total = 0;
    for (int i = 0; i < 10000; ++i, ++total) bad += sample_mismatches(t::random_plane(rng, 3, 3), 1, 1);
    for (int i = 0; i < 1000; ++i, ++total) bad += sample_mismatches(t::random_plane(rng, 5, 5), 2, 2);
    return {bad == 0, count_text(bad, total) + " (10000 R=1 patches, 1000 R=2 samples)"};
}

Verdict histogram_properties() {
    std::mt19937 rng(2002);
    std::uniform_int_distribution<int> radius_dist(1, 3);
    std::size_t bad = 0;
    std::string first_failure;
    for (int i = 0; i < 200; ++i) {
        const int r = radius_dist(rng);
        std::uniform_int_distribution<int> side(2 * r + 1, 64);
        const auto plane = t::random_plane(rng, side(rng), side(rng));
        const auto spec = NeighborhoodSpec::from_radius(r);
        const auto config = ElbpConfig::with_default_threshold(spec);
        const int p = spec.neighbors();

        const auto elbp = elbp_histogram(plane, config).bins;
        const auto edges = detect_edges(plane, EdgeDetector::sobel_otsu());
        const auto prepu = prepu_histogram(edges, spec).bins;
        auto valid = [](const std::vector<double>& h, std::size_t len) {
            const double sum = std::accumulate(h.begin(), h.end(), 0.0);
            return h.size() == len && std::abs(sum - 1.0) <= 1e-9 &&
                   std::all_of(h.begin(), h.end(), [](double v) { return v >= 0.0; });
        };
        const bool ok = valid(elbp, static_cast<std::size_t>(p + 2)) &&
                        valid(prepu, static_cast<std::size_t>(p + 1)) &&
                        elbp == t::oracle_elbp_histogram(plane, r, config.uniformity_threshold) &&
                        prepu == t::oracle_prepu_histogram(edges, r);
        if (!ok) {
            ++bad;
            if (first_failure.empty()) {
                first_failure = "; first failure at plane " + std::to_string(i) + " R=" + std::to_string(r);
            }
        }
    }
    return {bad == 0, std::to_string(bad) + " of 200 planes failed" + first_failure};
}

Verdict rotation_invariance() {
    std::mt19937 rng(3003);
    std::uniform_int_distribution<int> side(3, 64);
    const auto config = ElbpConfig::with_default_threshold(NeighborhoodSpec::from_radius(1));
    std::size_t plane_bad = 0;
    for (int i = 0; i < 500; ++i) {
        const auto plane = t::random_plane(rng, side(rng), side(rng));
        plane_bad += elbp_histogram(plane, config) != elbp_histogram(t::rotate_plane_ccw(plane), config);
    }
    std::size_t pattern_bad = 0;
    for (int code = 0; code < 256; ++code) {
        NeighborhoodSample s{100.0, {}};
        for (int k = 0; k < 8; ++k) s.neighbors.push_back((code >> k) & 1 ? 200.0 : 0.0);
        const int label = elbp_label(s, config);
        for (int shift = 1; shift < 8; ++shift) {
            std::rotate(s.neighbors.begin(), s.neighbors.begin() + 1, s.neighbors.end());
            pattern_bad += elbp_label(s, config) != label;
        }
    }
    return {plane_bad == 0 && pattern_bad == 0,
            std::to_string(plane_bad) + " of 500 planes changed under a quarter turn; " +
                std::to_string(pattern_bad) + " of 1792 cyclic shifts changed the label"};
}

Verdict feature_dimensionality() {
    std::mt19937 rng(4004);
    const auto image = t::random_image(rng, 20, 20);
    std::string detail;
    bool ok = true;
    const std::size_t expected[3] = {57, 105, 153};
    for (int r = 1; r <= 3; ++r) {
        const auto n = extract_features(image, ExtractionConfig::for_radius(r)).size();
        ok = ok && n == expected[r - 1];
        detail += "R=" + std::to_string(r) + " -> " + std::to_string(n) + (r < 3 ? ", " : "");
    }
    return {ok, detail};
}

FeatureVector random_histograms(std::mt19937& rng, int neighbors = 8) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FeatureVector v(neighbors, std::vector<double>(feature_length(neighbors), 0.0));
    for (int b = 0; b < kBlockCount; ++b) {
        auto block = v.block(b);
        double sum = 0;
        for (double& x : block) sum += (x = u(rng));
        for (double& x : block) x /= sum;
    }
    return v;
}

Verdict blockwise_euclidean_structure() {
    std::mt19937 rng(5005);
    std::uniform_int_distribution<int> changed_blocks(1, 6);
    std::size_t bad = 0;
    std::size_t multi = 0;
    for (int i = 0; i < 100; ++i) {
        const auto q = random_histograms(rng);
        const auto other = random_histograms(rng);
        auto d = q;
        const int k = changed_blocks(rng);
        for (int b = 0; b < k; ++b) {
            std::copy(other.block(b).begin(), other.block(b).end(), d.block(b).begin());
        }
        double subnorms = 0;
        for (int b = 0; b < kBlockCount; ++b) {
            double acc = 0;
            for (std::size_t j = 0; j < q.block(b).size(); ++j) {
                acc += std::pow(q.block(b)[j] - d.block(b)[j], 2);
            }
            subnorms += std::sqrt(acc);
        }
        double whole = 0;
        for (std::size_t j = 0; j < q.size(); ++j) whole += std::pow(q.values()[j] - d.values()[j], 2);
        whole = std::sqrt(whole);

        const double blockwise = distance(q, d, MetricId::Euclidean);
        bad += std::abs(blockwise - subnorms) > 1e-12;
        if (k >= 2) {
            ++multi;
            bad += !(blockwise - whole > 1e-12);
        } else {
            bad += std::abs(blockwise - whole) > 1e-12;
        }
    }
    return {bad == 0, count_text(bad, 100) + " (" + std::to_string(multi) + " pairs with >= 2 differing blocks)"};
}

Verdict metric_axioms_and_recall_identity() {
    std::mt19937 rng(6006);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_histograms(rng);
        const auto b = random_histograms(rng);
        for (MetricId m : {MetricId::Euclidean, MetricId::CityBlock, MetricId::Canberra, MetricId::Cosine}) {
            bad += std::abs(distance(a, b, m) - distance(b, a, m)) > 1e-12;
            bad += std::abs(distance(a, a, m)) > 1e-12;
        }
    }

    // Every outcome of a few evaluations, both self modes, several N.
    t::TempDir dir;
    t::write_two_class_corpus(dir.path() / "two", 32);
    fs::create_directories(dir.path() / "rand");
    std::mt19937 img_rng(6007);
    for (int i = 0; i < 24; ++i) {
        t::write_png_rgb(dir.path() / "rand" / (std::to_string((i % 3) * 100 + i) + ".png"),
                         t::random_image(img_rng, 16, 16));
    }
    std::size_t outcomes = 0;
    std::size_t identity_bad = 0;
    const std::pair<fs::path, LabelingRule> corpora[] = {
        {dir.path() / "two", LabelingRule::BySubdirectory}, {dir.path() / "rand", LabelingRule::Simplicity}};
    for (const auto& [root, rule] : corpora) {
        const auto index = build_index(scan_dataset(root, rule), ExtractionConfig::for_radius(1));
        for (MetricId m : kAllMetrics) {
            for (bool self : {false, true}) {
                const auto report = evaluate(index, m, {1, 5, 7, 9}, self);
                for (const auto& cutoff : report.cutoffs) {
                    for (const auto& o : cutoff.outcomes) {
                        ++outcomes;
                        const double implied = o.precision * static_cast<double>(o.retrieved) /
                                               static_cast<double>(o.related_total);
                        identity_bad += std::abs(o.recall - implied) > 1e-12 * std::max(1.0, o.recall);
                        identity_bad += o.related_retrieved > std::min(o.retrieved, o.related_total);
                    }
                }
            }
        }
    }
    return {bad == 0 && identity_bad == 0,
            count_text(bad, 8000) + " on metric axioms; recall identity violated in " +
                std::to_string(identity_bad) + " of " + std::to_string(outcomes) + " outcomes"};
}

Verdict synthetic_end_to_end() {
    t::TempDir dir;
    t::write_two_class_corpus(dir.path());
    const auto index = build_index(scan_dataset(dir.path(), LabelingRule::BySubdirectory),
                                   ExtractionConfig::for_radius(1));
    const auto report = evaluate(index, MetricId::Euclidean, {9}, false);
    const auto& c = report.at(9);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "precision %.2f%%, recall %.2f%% over %zu queries", c.mean_precision,
                  c.mean_recall, c.outcomes.size());
    return {c.mean_precision == 100.0 && c.mean_recall == 100.0 && c.outcomes.size() == 20, buf};
}

ErrorCode load_error(const fs::path& p) {
    try {
        load_index(p);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io;  // "no error" is reported as a mismatch by callers
}

Verdict persistence() {
    std::mt19937 rng(1010);
    std::uniform_int_distribution<int> count_dist(1, 6);
    std::uniform_int_distribution<int> side(7, 24);
    std::uniform_int_distribution<int> radius_dist(1, 3);
    const EdgeDetector detectors[] = {EdgeDetector::sobel_otsu(), EdgeDetector::roberts_otsu(),
                                      EdgeDetector::sobel_fixed(250.5)};
    std::size_t bad = 0;
    t::TempDir dir;
    for (int trial = 0; trial < 50; ++trial) {
        const auto root = dir.path() / ("c" + std::to_string(trial));
        fs::create_directories(root);
        const int n = count_dist(rng);
        for (int i = 0; i < n; ++i) {
            t::write_png_rgb(root / (std::to_string(i * 37) + ".png"), t::random_image(rng, side(rng), side(rng)));
        }
        auto config = ExtractionConfig::for_radius(radius_dist(rng));
        config.edge_detector = detectors[trial % 3];
        const auto index = build_index(scan_dataset(root, LabelingRule::Simplicity), config);
        const auto file = dir.path() / ("i" + std::to_string(trial) + ".idx");
        save_index(index, file);
        const auto loaded = load_index(file);
        bad += !(loaded == index);
        bad += serialize_index(loaded) != serialize_index(index);
        for (std::size_t r = 0; r < index.records.size(); ++r) {
            const auto& a = index.records[r].features.values();
            const auto& b = loaded.records[r].features.values();
            bad += std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0;
        }
    }

    // Fixtures derived from the last index file.
    const auto bytes = [&] {
        std::ifstream in(dir.path() / "i49.idx", std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }();
    const std::uint32_t header_size = static_cast<unsigned char>(bytes[0]) |
                                      (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[1])) << 8);
    std::string json = bytes.substr(4, header_size);
    const auto version_pos = json.find("\"version\":1");
    json.replace(version_pos, 11, "\"version\":2");
    std::ofstream(dir.path() / "v2.idx", std::ios::binary) << bytes.substr(0, 4) << json << bytes.substr(4 + header_size);
    std::ofstream(dir.path() / "cut.idx", std::ios::binary) << bytes.substr(0, bytes.size() - 17);
    std::string garbled = bytes;
    garbled[5] = '[';
    std::ofstream(dir.path() / "garbled.idx", std::ios::binary) << garbled;

    const bool fixtures_ok = load_error(dir.path() / "v2.idx") == ErrorCode::UnsupportedVersion &&
                             load_error(dir.path() / "cut.idx") == ErrorCode::Truncated &&
                             load_error(dir.path() / "garbled.idx") == ErrorCode::Corrupt;
    return {bad == 0 && fixtures_ok,
            count_text(bad, 50) + " across round trips; corrupted-header/truncated fixtures " +
                (fixtures_ok ? "rejected with their designated errors" : "NOT rejected as designed")};
}

}  // namespace
}  // namespace texref::acceptance

int main() {
    using namespace texref::acceptance;
    const std::vector<Criterion> criteria{
        {"AC1", "descriptor oracle equivalence", descriptor_oracle_equivalence, 10.0},
        {"AC2", "histogram properties", histogram_properties},
        {"AC3", "rotation invariance", rotation_invariance},
        {"AC4", "feature dimensionality 6P+9", feature_dimensionality},
        {"AC5", "blockwise euclidean structure", blockwise_euclidean_structure},
        {"AC6", "metric axioms and recall identity", metric_axioms_and_recall_identity},
        {"AC7", "synthetic two-class end-to-end", synthetic_end_to_end, 30.0},
        {"AC10", "index persistence", persistence},
    };
    return run_all(criteria);
}
