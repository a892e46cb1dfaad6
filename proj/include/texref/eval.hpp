#pragma once

#include "texref/index.hpp"
#include "texref/metrics.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace texref {

struct QueryOutcome {
    std::uint32_t query_id = 0;
    std::uint16_t query_class = 0;
    std::size_t retrieved = 0;          // N
    std::size_t related_retrieved = 0;  // RR
    std::size_t related_total = 0;      // M
    double precision = 0.0;             // percent
    double recall = 0.0;                // percent
};

/// Precision = 100·RR/N, recall = 100·RR/M over the first N hits.
QueryOutcome score_query(const QueryResult& result, std::uint16_t query_class,
                         std::size_t related_total, std::size_t retrieved);

struct ClassSummary {
    std::uint16_t class_label = 0;
    std::size_t queries = 0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
};

struct CutoffSummary {
    std::size_t n = 0;
    std::vector<ClassSummary> per_class;   // ascending class label
    double mean_precision = 0.0;           // over all queries
    double mean_recall = 0.0;
    std::vector<QueryOutcome> outcomes;    // one per query, index order
};

struct EvalReport {
    IndexHeader config;
    MetricId metric = MetricId::Euclidean;
    bool include_self = false;
    std::vector<CutoffSummary> cutoffs;    // in requested N order
    std::vector<std::string> warnings;
    double extraction_seconds = 0.0;       // 0 when the index was loaded
    double query_seconds = 0.0;

    const CutoffSummary& at(std::size_t n) const;
};

/// Issues every record as a query against the rest of the index.
EvalReport evaluate(const FeatureIndex& index, MetricId metric,
                    const std::vector<std::size_t>& n_values, bool include_self);

struct SweepOptions {
    std::vector<int> radii{1};
    std::vector<MetricId> metrics{MetricId::Euclidean};
    std::vector<std::size_t> n_values{10};
    bool include_self = false;
    EdgeDetector edge_detector = EdgeDetector::sobel_otsu();
};

/// One report per (radius, metric), radius-major. Each radius is indexed once
/// and shared by its metrics.
std::vector<EvalReport> sweep(const DatasetManifest& manifest, const SweepOptions& options);

/// radius,metric,N,class,mean_precision,mean_recall with `ALL` summary rows.
void write_csv(std::ostream& out, std::span<const EvalReport> reports);

/// Aligned human-readable table of the ALL rows.
void write_table(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace texref
