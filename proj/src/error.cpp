#include "texref/error.hpp"

namespace texref {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "io";
        case ErrorCode::UnsupportedFormat: return "unsupported format";
        case ErrorCode::ImageTooSmall: return "image too small";
        case ErrorCode::EmptyDataset: return "no images found";
        case ErrorCode::BadFilename: return "bad filename";
        case ErrorCode::DuplicateId: return "duplicate id";
        case ErrorCode::Precondition: return "precondition violation";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::LayoutMismatch: return "layout mismatch";
        case ErrorCode::EmptyCandidates: return "empty candidate list";
        case ErrorCode::UnsupportedVersion: return "unsupported version";
        case ErrorCode::Truncated: return "truncated file";
        case ErrorCode::CorruptFeatureLength: return "corrupt index: feature length";
        case ErrorCode::Corrupt: return "corrupt index";
        case ErrorCode::IncompatibleConfig: return "incompatible config";
        case ErrorCode::DegenerateEvaluation: return "degenerate evaluation";
    }
    return "unknown";
}

}  // namespace texref
