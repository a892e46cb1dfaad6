#include "texref/descriptors.hpp"

#include "sampling.hpp"
#include "texref/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

namespace texref {

NeighborhoodSpec NeighborhoodSpec::from_radius(int radius) {
    if (radius < kMinRadius || radius > kMaxRadius) {
        throw Error(ErrorCode::InvalidArgument,
                    "radius must be 1, 2 or 3 (got " + std::to_string(radius) + ")");
    }
    return NeighborhoodSpec(radius);
}

namespace detail {

namespace {

double snap(double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 1e-9 ? r : v;
}

// Nearest pixel offset, halves rounded away from zero on the exact value
// (3·sin 30° must round like 1.5, not like 1.4999999999999998).
int nearest(double v) {
    const double twice = std::round(2.0 * v);
    if (std::abs(2.0 * v - twice) < 1e-9) v = twice / 2.0;
    return static_cast<int>(std::lround(v));
}

NeighborGeometry first_quadrant_neighbor(int radius, int k, int count) {
    const double theta = 2.0 * std::numbers::pi * k / count;
    const double ox = snap(radius * std::cos(theta));
    const double oy = snap(-radius * std::sin(theta));

    const double x0 = std::floor(ox);
    const double y0 = std::floor(oy);
    const double fx = ox - x0;
    const double fy = oy - y0;
    const int ix = static_cast<int>(x0);
    const int iy = static_cast<int>(y0);

    std::array<Tap, 4> candidates{{
        {ix, iy, (1.0 - fx) * (1.0 - fy)},
        {ix + 1, iy, fx * (1.0 - fy)},
        {ix, iy + 1, (1.0 - fx) * fy},
        {ix + 1, iy + 1, fx * fy},
    }};
    NeighborGeometry g;
    for (const Tap& t : candidates) {
        if (t.weight != 0.0) g.taps.push_back(t);
    }
    std::stable_sort(g.taps.begin(), g.taps.end(),
                     [](const Tap& a, const Tap& b) { return a.weight > b.weight; });
    g.nearest_dx = nearest(ox);
    g.nearest_dy = nearest(oy);
    return g;
}

// Quarter turn counter-clockwise on screen: (x, y) -> (y, -x).
NeighborGeometry rotate_quarter(const NeighborGeometry& g) {
    NeighborGeometry r = g;
    for (Tap& t : r.taps) {
        const int x = t.dx;
        t.dx = t.dy;
        t.dy = -x;
    }
    r.nearest_dx = g.nearest_dy;
    r.nearest_dy = -g.nearest_dx;
    return r;
}

std::vector<NeighborGeometry> build_geometry(int radius) {
    const int count = 8 * radius;
    const int quarter = count / 4;
    std::vector<NeighborGeometry> all(static_cast<std::size_t>(count));
    for (int k = 0; k < quarter; ++k) {
        all[k] = first_quadrant_neighbor(radius, k, count);
    }
    for (int k = quarter; k < count; ++k) {
        all[k] = rotate_quarter(all[k - quarter]);
    }
    return all;
}

}  // namespace

const std::vector<NeighborGeometry>& neighbor_geometry(const NeighborhoodSpec& spec) {
    static const std::array<std::vector<NeighborGeometry>, 3> tables{
        build_geometry(1), build_geometry(2), build_geometry(3)};
    return tables[static_cast<std::size_t>(spec.radius() - 1)];
}

}  // namespace detail

namespace {

template <typename Grid>
void require_interior(const Grid& grid, int cx, int cy, int radius) {
    if (cx < radius || cy < radius || cx >= grid.width() - radius || cy >= grid.height() - radius) {
        throw Error(ErrorCode::Precondition,
                    "center (" + std::to_string(cx) + "," + std::to_string(cy) +
                        ") too close to the border for radius " + std::to_string(radius));
    }
}

template <typename Grid>
void require_fits(const Grid& grid, int radius, const char* what) {
    const int side = 2 * radius + 1;
    if (grid.width() < side || grid.height() < side) {
        throw Error(ErrorCode::ImageTooSmall,
                    std::string(what) + " of " + std::to_string(grid.width()) + "x" +
                        std::to_string(grid.height()) + " too small for radius " +
                        std::to_string(radius));
    }
}

std::uint32_t rotate_right(std::uint32_t code, int bits) {
    const std::uint32_t mask = bits >= 32 ? ~0u : ((1u << bits) - 1u);
    return ((code >> 1) | ((code & 1u) << (bits - 1))) & mask;
}

std::uint32_t plane_code(const ChannelPlane& plane, int cx, int cy,
                         const std::vector<detail::NeighborGeometry>& geometry) {
    const double center = plane.at(cx, cy);
    std::uint32_t code = 0;
    for (std::size_t k = 0; k < geometry.size(); ++k) {
        const double v = detail::interpolate(plane, cx, cy, geometry[k]);
        if (threshold_bit(v - center)) code |= (1u << k);
    }
    return code;
}

}  // namespace

NeighborhoodSample sample_neighbors(const ChannelPlane& plane, int cx, int cy,
                                    const NeighborhoodSpec& spec) {
    require_interior(plane, cx, cy, spec.radius());
    const auto& geometry = detail::neighbor_geometry(spec);
    NeighborhoodSample sample;
    sample.center = plane.at(cx, cy);
    sample.neighbors.reserve(geometry.size());
    for (const auto& g : geometry) {
        sample.neighbors.push_back(detail::interpolate(plane, cx, cy, g));
    }
    return sample;
}

std::uint32_t lbp_code(const NeighborhoodSample& sample) {
    if (sample.neighbors.empty() || sample.neighbors.size() > 32) {
        throw Error(ErrorCode::InvalidArgument, "sample must hold 1..32 neighbors");
    }
    std::uint32_t code = 0;
    for (std::size_t k = 0; k < sample.neighbors.size(); ++k) {
        if (threshold_bit(sample.neighbors[k] - sample.center)) code |= (1u << k);
    }
    return code;
}

int uniformity_of_code(std::uint32_t code, int neighbor_count) {
    return std::popcount(code ^ rotate_right(code, neighbor_count));
}

int elbp_label_of_code(std::uint32_t code, int neighbor_count, int uniformity_threshold) {
    if (uniformity_of_code(code, neighbor_count) <= uniformity_threshold) {
        return std::popcount(code);
    }
    return neighbor_count + 1;
}

int uniformity(const NeighborhoodSample& sample) {
    return uniformity_of_code(lbp_code(sample), static_cast<int>(sample.neighbors.size()));
}

int elbp_label(const NeighborhoodSample& sample, const ElbpConfig& config) {
    const int count = static_cast<int>(sample.neighbors.size());
    if (count != config.spec.neighbors()) {
        throw Error(ErrorCode::InvalidArgument,
                    "sample has " + std::to_string(count) + " neighbors, config expects " +
                        std::to_string(config.spec.neighbors()));
    }
    return elbp_label_of_code(lbp_code(sample), count, config.uniformity_threshold);
}

ElbpHistogram elbp_histogram(const ChannelPlane& plane, const ElbpConfig& config) {
    const int radius = config.spec.radius();
    const int count = config.spec.neighbors();
    if (config.uniformity_threshold < 0) {
        throw Error(ErrorCode::InvalidArgument, "uniformity threshold must be >= 0");
    }
    require_fits(plane, radius, "plane");
    const auto& geometry = detail::neighbor_geometry(config.spec);

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(count) + 2, 0);
    for (int y = radius; y < plane.height() - radius; ++y) {
        for (int x = radius; x < plane.width() - radius; ++x) {
            const auto code = plane_code(plane, x, y, geometry);
            ++counts[static_cast<std::size_t>(
                elbp_label_of_code(code, count, config.uniformity_threshold))];
        }
    }
    const double total = static_cast<double>(plane.width() - 2 * radius) *
                         static_cast<double>(plane.height() - 2 * radius);
    ElbpHistogram h;
    h.bins.reserve(counts.size());
    for (auto c : counts) h.bins.push_back(static_cast<double>(c) / total);
    return h;
}

int prepu_label(const BinaryEdgeMap& edges, int cx, int cy, const NeighborhoodSpec& spec) {
    require_interior(edges, cx, cy, spec.radius());
    if (edges.at(cx, cy) == 0) return 0;
    int ones = 0;
    for (const auto& g : detail::neighbor_geometry(spec)) {
        ones += edges.at(cx + g.nearest_dx, cy + g.nearest_dy) != 0 ? 1 : 0;
    }
    return ones;
}

PrePuHistogram prepu_histogram(const BinaryEdgeMap& edges, const NeighborhoodSpec& spec) {
    const int radius = spec.radius();
    require_fits(edges, radius, "edge map");
    const auto& geometry = detail::neighbor_geometry(spec);

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(spec.neighbors()) + 1, 0);
    for (int y = radius; y < edges.height() - radius; ++y) {
        for (int x = radius; x < edges.width() - radius; ++x) {
            int label = 0;
            if (edges.at(x, y) != 0) {
                for (const auto& g : geometry) {
                    label += edges.at(x + g.nearest_dx, y + g.nearest_dy) != 0 ? 1 : 0;
                }
            }
            ++counts[static_cast<std::size_t>(label)];
        }
    }
    const double total = static_cast<double>(edges.width() - 2 * radius) *
                         static_cast<double>(edges.height() - 2 * radius);
    PrePuHistogram h;
    h.bins.reserve(counts.size());
    for (auto c : counts) h.bins.push_back(static_cast<double>(c) / total);
    return h;
}

}  // namespace texref
