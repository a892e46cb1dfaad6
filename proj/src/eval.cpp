#include "texref/eval.hpp"

#include "texref/error.hpp"
#include "texref/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>

namespace texref {

QueryOutcome score_query(const QueryResult& result, std::uint16_t query_class,
                         std::size_t related_total, std::size_t retrieved) {
    if (related_total == 0) {
        throw Error(ErrorCode::DegenerateEvaluation,
                    "no related images to retrieve for class " + std::to_string(query_class) +
                        " (M = 0)");
    }
    if (retrieved == 0) {
        throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    }
    if (result.hits.size() > retrieved) {
        throw Error(ErrorCode::InvalidArgument, "result holds more than N hits");
    }
    QueryOutcome o;
    o.query_class = query_class;
    o.retrieved = retrieved;
    o.related_total = related_total;
    o.related_retrieved = static_cast<std::size_t>(
        std::count_if(result.hits.begin(), result.hits.end(),
                      [&](const QueryHit& h) { return h.class_label == query_class; }));
    o.precision = 100.0 * static_cast<double>(o.related_retrieved) / static_cast<double>(retrieved);
    o.recall = 100.0 * static_cast<double>(o.related_retrieved) / static_cast<double>(related_total);
    return o;
}

const CutoffSummary& EvalReport::at(std::size_t n) const {
    for (const auto& c : cutoffs) {
        if (c.n == n) return c;
    }
    throw Error(ErrorCode::InvalidArgument, "report has no N=" + std::to_string(n));
}

EvalReport evaluate(const FeatureIndex& index, MetricId metric,
                    const std::vector<std::size_t>& n_values, bool include_self) {
    if (index.records.empty()) {
        throw Error(ErrorCode::EmptyCandidates, "cannot evaluate an empty index");
    }
    if (n_values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "at least one N value is required");
    }
    for (auto n : n_values) {
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
    }

    EvalReport report;
    report.config = index.header();
    report.metric = metric;
    report.include_self = include_self;

    std::map<std::uint16_t, std::size_t> class_sizes;
    for (const auto& r : index.records) ++class_sizes[r.class_label];
    const std::size_t max_n = *std::max_element(n_values.begin(), n_values.end());
    if (class_sizes.size() < 2) {
        report.warnings.push_back("index has a single class; precision is trivially 100%");
    }
    for (const auto& [label, size] : class_sizes) {
        const std::size_t available = include_self ? size : size - 1;
        if (available == 0) {
            throw Error(ErrorCode::DegenerateEvaluation,
                        "class " + std::to_string(label) +
                            " has no other members to retrieve (M = 0 with self excluded)");
        }
        if (available < max_n) {
            report.warnings.push_back("class " + std::to_string(label) + " has " +
                                      std::to_string(size) + " members, fewer than N=" +
                                      std::to_string(max_n) + (include_self ? "" : " + 1"));
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const std::size_t q = index.records.size();
    std::vector<QueryResult> results(q);
    parallel_for(q, [&](std::size_t i) {
        const auto& record = index.records[i];
        results[i] = query_features(index, record.features, metric, max_n,
                                    include_self ? std::nullopt
                                                 : std::optional<std::uint32_t>(record.image_id));
    });
    report.query_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (std::size_t n : n_values) {
        CutoffSummary cutoff;
        cutoff.n = n;
        cutoff.outcomes.reserve(q);
        std::map<std::uint16_t, ClassSummary> per_class;
        for (std::size_t i = 0; i < q; ++i) {
            const auto& record = index.records[i];
            QueryResult top;
            const std::size_t take = std::min(n, results[i].hits.size());
            top.hits.assign(results[i].hits.begin(),
                            results[i].hits.begin() + static_cast<std::ptrdiff_t>(take));
            const std::size_t size = class_sizes[record.class_label];
            auto outcome = score_query(top, record.class_label, include_self ? size : size - 1, n);
            outcome.query_id = record.image_id;
            auto& summary = per_class[record.class_label];
            summary.class_label = record.class_label;
            ++summary.queries;
            summary.mean_precision += outcome.precision;
            summary.mean_recall += outcome.recall;
            cutoff.mean_precision += outcome.precision;
            cutoff.mean_recall += outcome.recall;
            cutoff.outcomes.push_back(outcome);
        }
        for (auto& [label, summary] : per_class) {
            summary.mean_precision /= static_cast<double>(summary.queries);
            summary.mean_recall /= static_cast<double>(summary.queries);
            cutoff.per_class.push_back(summary);
        }
        cutoff.mean_precision /= static_cast<double>(q);
        cutoff.mean_recall /= static_cast<double>(q);
        report.cutoffs.push_back(std::move(cutoff));
    }
    return report;
}

std::vector<EvalReport> sweep(const DatasetManifest& manifest, const SweepOptions& options) {
    if (options.radii.empty() || options.metrics.empty()) {
        throw Error(ErrorCode::InvalidArgument, "sweep needs at least one radius and one metric");
    }
    std::vector<EvalReport> reports;
    for (int radius : options.radii) {
        ExtractionConfig config = ExtractionConfig::for_radius(radius);
        config.edge_detector = options.edge_detector;
        const auto start = std::chrono::steady_clock::now();
        const auto index = build_index(manifest, config);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (MetricId metric : options.metrics) {
            auto report = evaluate(index, metric, options.n_values, options.include_self);
            report.extraction_seconds = seconds;
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& out, std::span<const EvalReport> reports) {
    out << "radius,metric,N,class,mean_precision,mean_recall\n";
    for (const auto& report : reports) {
        const std::string prefix =
            std::to_string(report.config.radius) + "," + std::string(to_string(report.metric)) + ",";
        for (const auto& cutoff : report.cutoffs) {
            for (const auto& c : cutoff.per_class) {
                out << prefix << cutoff.n << "," << c.class_label << "," << fixed2(c.mean_precision)
                    << "," << fixed2(c.mean_recall) << "\n";
            }
            out << prefix << cutoff.n << ",ALL," << fixed2(cutoff.mean_precision) << ","
                << fixed2(cutoff.mean_recall) << "\n";
        }
    }
}

void write_table(std::ostream& out, std::span<const EvalReport> reports) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-6s %-14s %5s %12s %10s\n", "radius", "metric", "N",
                  "precision%", "recall%");
    out << line;
    for (const auto& report : reports) {
        for (const auto& cutoff : report.cutoffs) {
            std::snprintf(line, sizeof(line), "%-6d %-14s %5zu %12.2f %10.2f\n",
                          report.config.radius, std::string(to_string(report.metric)).c_str(),
                          cutoff.n, cutoff.mean_precision, cutoff.mean_recall);
            out << line;
        }
    }
}

}  // namespace texref
