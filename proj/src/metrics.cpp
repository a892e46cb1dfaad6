#include "texref/metrics.hpp"

#include "texref/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace texref {

std::string_view to_string(MetricId metric) {
    switch (metric) {
        case MetricId::Euclidean: return "euclidean";
        case MetricId::Cosine: return "cosine";
        case MetricId::CityBlock: return "cityblock";
        case MetricId::Canberra: return "canberra";
        case MetricId::LogLikelihood: return "loglikelihood";
    }
    return "euclidean";
}

MetricId parse_metric(std::string_view text) {
    for (MetricId m : kAllMetrics) {
        if (to_string(m) == text) return m;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown metric: " + std::string(text));
}

double block_distance(std::span<const double> q, std::span<const double> d, MetricId metric) {
    if (q.size() != d.size()) {
        throw Error(ErrorCode::LayoutMismatch, "block sizes differ");
    }
    const std::size_t n = q.size();
    switch (metric) {
        case MetricId::Euclidean: {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double diff = q[j] - d[j];
                sum += diff * diff;
            }
            return std::sqrt(sum);
        }
        case MetricId::CityBlock: {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) sum += std::abs(q[j] - d[j]);
            return sum;
        }
        case MetricId::Canberra: {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double denom = std::abs(q[j]) + std::abs(d[j]);
                if (denom > 0.0) sum += std::abs(q[j] - d[j]) / denom;
            }
            return sum;
        }
        case MetricId::Cosine: {
            double dot = 0.0;
            double qq = 0.0;
            double dd = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                dot += q[j] * d[j];
                qq += q[j] * q[j];
                dd += d[j] * d[j];
            }
            if (qq == 0.0 || dd == 0.0) {
                return std::equal(q.begin(), q.end(), d.begin()) ? 0.0 : 1.0;
            }
            // Clamp rounding so identical blocks give exactly 0.
            const double cosine = std::min(1.0, dot / (std::sqrt(qq) * std::sqrt(dd)));
            return std::equal(q.begin(), q.end(), d.begin()) ? 0.0 : 1.0 - cosine;
        }
        case MetricId::LogLikelihood: {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sum -= q[j] * std::log(d[j] + kLogLikelihoodEpsilon);
            }
            return sum;
        }
    }
    return 0.0;
}

double distance(const FeatureVector& q, const FeatureVector& d, MetricId metric) {
    if (q.neighbors() != d.neighbors() || q.size() != d.size()) {
        throw Error(ErrorCode::LayoutMismatch,
                    "feature layouts differ (P=" + std::to_string(q.neighbors()) + " vs P=" +
                        std::to_string(d.neighbors()) + ")");
    }
    double total = 0.0;
    for (int b = 0; b < kBlockCount; ++b) {
        total += block_distance(q.block(b), d.block(b), metric);
    }
    return total;
}

std::vector<Ranked> rank(const FeatureVector& query, std::span<const Candidate> candidates,
                         MetricId metric, std::size_t top_n) {
    if (top_n == 0) {
        throw Error(ErrorCode::InvalidArgument, "top_n must be >= 1");
    }
    if (candidates.empty()) {
        throw Error(ErrorCode::EmptyCandidates, "empty candidate list");
    }
    std::vector<Ranked> scored;
    scored.reserve(candidates.size());
    for (const auto& [id, features] : candidates) {
        scored.push_back(Ranked{id, distance(query, *features, metric)});
    }
    const std::size_t keep = std::min(top_n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), ranks_before);
    scored.resize(keep);
    return scored;
}

}  // namespace texref
