#pragma once

// Precomputed circular sampling geometry shared by the ELBP and Pre-PU
// operators.

#include "texref/descriptors.hpp"

#include <vector>

namespace texref::detail {

struct Tap {
    int dx = 0;
    int dy = 0;
    double weight = 0.0;
};

/// Bilinear taps for one neighbor. taps[0] carries the largest weight and its
/// weight is implied (1 minus the rest) so constant patches interpolate exactly.
struct NeighborGeometry {
    std::vector<Tap> taps;
    int nearest_dx = 0;
    int nearest_dy = 0;
};

/// Neighbors 0..P-1. The first quadrant is computed from cos/sin; the other
/// three are exact 90° rotations of it so sampling commutes with quarter turns.
const std::vector<NeighborGeometry>& neighbor_geometry(const NeighborhoodSpec& spec);

template <typename Grid>
double interpolate(const Grid& grid, int cx, int cy, const NeighborGeometry& geometry) {
    const auto& taps = geometry.taps;
    const double base = grid.at(cx + taps[0].dx, cy + taps[0].dy);
    double acc = base;
    for (std::size_t i = 1; i < taps.size(); ++i) {
        const double v = grid.at(cx + taps[i].dx, cy + taps[i].dy);
        acc += taps[i].weight * (v - base);
    }
    return acc;
}

}  // namespace texref::detail
