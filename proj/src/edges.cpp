#include "texref/descriptors.hpp"

#include "texref/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace texref {

BinaryEdgeMap::BinaryEdgeMap(int width, int height, std::uint8_t fill)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

EdgeDetector EdgeDetector::sobel_fixed(double threshold) {
    if (!(threshold >= 0.0 && threshold <= kMaxFixedThreshold)) {
        throw Error(ErrorCode::InvalidArgument,
                    "sobel-fixed threshold must lie in [0, 1141]");
    }
    return EdgeDetector(Kind::SobelFixed, threshold);
}

EdgeDetector EdgeDetector::parse(std::string_view text) {
    if (text == "sobel-otsu") return sobel_otsu();
    if (text == "roberts-otsu") return roberts_otsu();
    constexpr std::string_view kFixed = "sobel-fixed:";
    if (text.substr(0, kFixed.size()) == kFixed) {
        const auto number = text.substr(kFixed.size());
        double t = 0.0;
        const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), t);
        if (ec != std::errc{} || ptr != number.data() + number.size() || number.empty()) {
            throw Error(ErrorCode::InvalidArgument,
                        "bad edge detector threshold: " + std::string(text));
        }
        return sobel_fixed(t);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown edge detector: " + std::string(text));
}

std::string EdgeDetector::to_string() const {
    switch (kind_) {
        case Kind::SobelOtsu: return "sobel-otsu";
        case Kind::RobertsOtsu: return "roberts-otsu";
        case Kind::SobelFixed: {
            std::array<char, 64> buf{};
            const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), threshold_);
            return "sobel-fixed:" + std::string(buf.data(), ptr);
        }
    }
    return "sobel-otsu";
}

namespace {

struct Border {
    int low;    // pixels without a full kernel at the top/left
    int high;   // ... at the bottom/right
};

Border kernel_border(EdgeDetector::Kind kind) {
    return kind == EdgeDetector::Kind::RobertsOtsu ? Border{0, 1} : Border{1, 1};
}

// Otsu over a 256-bin histogram of the interior magnitudes spanning
// [min, max]. Returns the highest bin index of the background class, or -1
// when the distribution cannot be split.
int otsu_bin(const std::vector<int>& histogram) {
    const int nonempty = static_cast<int>(
        std::count_if(histogram.begin(), histogram.end(), [](int c) { return c > 0; }));
    if (nonempty < 2) return -1;

    double total = 0.0;
    double weighted_total = 0.0;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
        total += histogram[i];
        weighted_total += static_cast<double>(i) * histogram[i];
    }
    double background = 0.0;
    double weighted_background = 0.0;
    double best = -1.0;
    int best_bin = -1;
    for (std::size_t t = 0; t + 1 < histogram.size(); ++t) {
        background += histogram[t];
        weighted_background += static_cast<double>(t) * histogram[t];
        const double foreground = total - background;
        if (background == 0.0 || foreground == 0.0) continue;
        const double mean_b = weighted_background / background;
        const double mean_f = (weighted_total - weighted_background) / foreground;
        const double between = background * foreground * (mean_b - mean_f) * (mean_b - mean_f);
        if (between > best) {
            best = between;
            best_bin = static_cast<int>(t);
        }
    }
    return best_bin;
}

}  // namespace

std::vector<double> gradient_magnitude(const ChannelPlane& plane, EdgeDetector::Kind kind) {
    const int w = plane.width();
    const int h = plane.height();
    std::vector<double> magnitude(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
    const Border border = kernel_border(kind);
    auto px = [&](int x, int y) { return static_cast<int>(plane.at(x, y)); };

    for (int y = border.low; y < h - border.high; ++y) {
        for (int x = border.low; x < w - border.high; ++x) {
            int gx = 0;
            int gy = 0;
            if (kind == EdgeDetector::Kind::RobertsOtsu) {
                gx = px(x, y) - px(x + 1, y + 1);
                gy = px(x + 1, y) - px(x, y + 1);
            } else {
                gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
                gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
            }
            magnitude[static_cast<std::size_t>(y) * w + x] =
                std::sqrt(static_cast<double>(gx * gx + gy * gy));
        }
    }
    return magnitude;
}

BinaryEdgeMap detect_edges(const ChannelPlane& plane, const EdgeDetector& detector) {
    const int w = plane.width();
    const int h = plane.height();
    if (w < kMinImageSide || h < kMinImageSide) {
        throw Error(ErrorCode::ImageTooSmall, "plane too small for edge detection");
    }
    const auto kind = detector.kind();
    const auto magnitude = gradient_magnitude(plane, kind);
    const Border border = kernel_border(kind);
    BinaryEdgeMap edges(w, h);

    auto for_interior = [&](auto&& fn) {
        for (int y = border.low; y < h - border.high; ++y) {
            for (int x = border.low; x < w - border.high; ++x) {
                fn(x, y, magnitude[static_cast<std::size_t>(y) * w + x]);
            }
        }
    };

    if (kind == EdgeDetector::Kind::SobelFixed) {
        const double t = detector.threshold();
        for_interior([&](int x, int y, double m) { edges.at(x, y) = m > t ? 1 : 0; });
        return edges;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for_interior([&](int, int, double m) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    });
    // A single-valued distribution has no edges.
    if (!(hi > lo)) return edges;

    constexpr int kBins = 256;
    const double scale = kBins / (hi - lo);
    auto bin_of = [&](double m) {
        return std::min(kBins - 1, static_cast<int>((m - lo) * scale));
    };
    std::vector<int> histogram(kBins, 0);
    for_interior([&](int, int, double m) { ++histogram[static_cast<std::size_t>(bin_of(m))]; });
    const int split = otsu_bin(histogram);
    if (split < 0) return edges;
    for_interior([&](int x, int y, double m) { edges.at(x, y) = bin_of(m) > split ? 1 : 0; });
    return edges;
}

}  // namespace texref
