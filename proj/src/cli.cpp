#include "texref/cli.hpp"

#include "texref/error.hpp"
#include "texref/eval.hpp"
#include "texref/index.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unistd.h>

namespace texref::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return kMissingFile;
        case ErrorCode::InvalidArgument: return kUsage;
        case ErrorCode::UnsupportedVersion:
        case ErrorCode::Truncated:
        case ErrorCode::CorruptFeatureLength:
        case ErrorCode::Corrupt:
        case ErrorCode::IncompatibleConfig:
        case ErrorCode::LayoutMismatch: return kBadIndex;
        default: return kBadData;
    }
}

void require_writable(const fs::path& target) {
    const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::error_code ec;
    const bool target_ok = !fs::exists(target, ec) || ::access(target.c_str(), W_OK) == 0;
    if (!fs::is_directory(parent, ec) || ::access(parent.c_str(), W_OK) != 0 || !target_ok) {
        throw Error(ErrorCode::Io, "cannot write to " + target.string());
    }
}

void require_readable(const fs::path& path, const char* what) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        throw Error(ErrorCode::Io, std::string(what) + " not found: " + path.string());
    }
}

void write_csv_file(const fs::path& path, std::span<const EvalReport> reports) {
    require_writable(path);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::Io, "cannot write to " + path.string());
    write_csv(file, reports);
    file.close();
    if (!file) throw Error(ErrorCode::Io, "cannot write to " + path.string());
}

void print_warnings(std::ostream& err, std::span<const EvalReport> reports) {
    for (const auto& r : reports) {
        for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    }
}

std::vector<std::size_t> to_sizes(const std::vector<int>& values) {
    std::vector<std::size_t> out;
    for (int v : values) {
        if (v < 1) throw Error(ErrorCode::InvalidArgument, "--n values must be >= 1");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Texture-descriptor image retrieval: index, query, evaluate, sweep", "texref"};
    app.require_subcommand(1, 1);

    // index
    auto* index_cmd = app.add_subcommand("index", "Extract features for a dataset and save an index");
    std::string root;
    std::string labeling = "simplicity";
    int radius = 1;
    std::string edge = "sobel-otsu";
    std::string out_path;
    int threshold = -1;
    index_cmd->add_option("--root", root, "Dataset directory")->required();
    index_cmd->add_option("--labeling", labeling, "simplicity | by-subdirectory")
        ->check(CLI::IsMember({"simplicity", "by-subdirectory"}));
    index_cmd->add_option("--radius", radius, "Neighborhood radius")->check(CLI::Range(1, 3));
    index_cmd->add_option("--edge", edge, "sobel-otsu | roberts-otsu | sobel-fixed:<t>");
    index_cmd->add_option("--uniformity-threshold", threshold, "Defaults to P/4");
    index_cmd->add_option("--out", out_path, "Index file to write")->required();

    // query
    auto* query_cmd = app.add_subcommand("query", "Rank indexed images against a query image");
    std::string index_path;
    std::string image_path;
    std::string metric = "euclidean";
    int n = 10;
    bool include_self = false;
    query_cmd->add_option("--index", index_path)->required();
    query_cmd->add_option("--image", image_path)->required();
    query_cmd->add_option("--metric", metric);
    query_cmd->add_option("--n", n)->check(CLI::PositiveNumber);
    query_cmd->add_flag("--include-self", include_self);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Precision/recall with every image as a query");
    std::vector<int> n_values{10};
    std::string csv_path;
    eval_cmd->add_option("--index", index_path)->required();
    eval_cmd->add_option("--metric", metric);
    eval_cmd->add_option("--n", n_values, "Comma-separated N values")->delimiter(',');
    eval_cmd->add_flag("--include-self", include_self);
    eval_cmd->add_option("--csv", csv_path);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate every (radius, metric) combination");
    std::vector<int> radii{1, 2, 3};
    std::vector<std::string> metrics{"euclidean"};
    sweep_cmd->add_option("--root", root)->required();
    sweep_cmd->add_option("--labeling", labeling)
        ->check(CLI::IsMember({"simplicity", "by-subdirectory"}));
    sweep_cmd->add_option("--radii", radii)->delimiter(',')->check(CLI::Range(1, 3));
    sweep_cmd->add_option("--metrics", metrics)->delimiter(',');
    sweep_cmd->add_option("--n", n_values)->delimiter(',');
    sweep_cmd->add_option("--edge", edge);
    sweep_cmd->add_flag("--include-self", include_self);
    sweep_cmd->add_option("--csv", csv_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "texref: error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (index_cmd->parsed()) {
            ExtractionConfig config = ExtractionConfig::for_radius(radius);
            config.edge_detector = EdgeDetector::parse(edge);
            if (threshold >= 0) config.elbp.uniformity_threshold = threshold;
            const auto rule = parse_labeling(labeling);
            require_writable(out_path);
            const auto manifest = scan_dataset(root, rule);
            const auto index = build_index(manifest, config);
            save_index(index, out_path);
            out << "indexed " << index.records.size() << " images (feature length "
                << feature_length(config.neighbors()) << ") -> " << out_path << "\n";
        } else if (query_cmd->parsed()) {
            const auto id = parse_metric(metric);
            require_readable(index_path, "index");
            require_readable(image_path, "image");
            const auto index = load_index(index_path);
            const auto result = query(index, image_path, id, static_cast<std::size_t>(n), include_self);
            char line[64];
            for (std::size_t i = 0; i < result.hits.size(); ++i) {
                const auto& hit = result.hits[i];
                std::snprintf(line, sizeof(line), "%.6f", hit.distance);
                out << (i + 1) << " " << hit.image_id << " " << hit.class_label << " " << line << " "
                    << hit.relative_path << "\n";
            }
        } else if (eval_cmd->parsed()) {
            const auto id = parse_metric(metric);
            const auto sizes = to_sizes(n_values);
            require_readable(index_path, "index");
            if (!csv_path.empty()) require_writable(csv_path);
            const auto index = load_index(index_path);
            const std::vector<EvalReport> reports{evaluate(index, id, sizes, include_self)};
            print_warnings(err, reports);
            write_table(out, reports);
            if (!csv_path.empty()) write_csv_file(csv_path, reports);
        } else if (sweep_cmd->parsed()) {
            SweepOptions options;
            options.radii = radii;
            options.metrics.clear();
            for (const auto& m : metrics) options.metrics.push_back(parse_metric(m));
            options.n_values = to_sizes(n_values);
            options.include_self = include_self;
            options.edge_detector = EdgeDetector::parse(edge);
            if (!csv_path.empty()) require_writable(csv_path);
            const auto manifest = scan_dataset(root, parse_labeling(labeling));
            const auto reports = sweep(manifest, options);
            print_warnings(err, reports);
            write_table(out, reports);
            if (!csv_path.empty()) write_csv_file(csv_path, reports);
        }
    } catch (const Error& e) {
        err << "texref: error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "texref: error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}

}  // namespace texref::cli
