#pragma once

#include "texref/fusion.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace texref {

enum class MetricId { Euclidean, Cosine, CityBlock, Canberra, LogLikelihood };

inline constexpr std::array<MetricId, 5> kAllMetrics{
    MetricId::Euclidean, MetricId::Cosine, MetricId::CityBlock, MetricId::Canberra,
    MetricId::LogLikelihood};

/// Floor added inside the logarithm of the log-likelihood metric.
inline constexpr double kLogLikelihoodEpsilon = 1e-10;

std::string_view to_string(MetricId metric);
MetricId parse_metric(std::string_view text);

/// Metric value of one histogram block.
double block_distance(std::span<const double> q, std::span<const double> d, MetricId metric);

/// Sum of block_distance over the six blocks. For euclidean this is the sum of
/// six sub-norms, not the norm of the whole vector.
double distance(const FeatureVector& q, const FeatureVector& d, MetricId metric);

struct Ranked {
    std::uint32_t id = 0;
    double distance = 0.0;

    friend bool operator==(const Ranked&, const Ranked&) = default;
};

using Candidate = std::pair<std::uint32_t, const FeatureVector*>;

/// Ascending distance, ties by ascending id, truncated to top_n.
std::vector<Ranked> rank(const FeatureVector& query, std::span<const Candidate> candidates,
                         MetricId metric, std::size_t top_n);

/// Orders by (distance, id).
inline bool ranks_before(const Ranked& a, const Ranked& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

}  // namespace texref
