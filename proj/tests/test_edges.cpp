#include "texref/descriptors.hpp"
#include "texref/error.hpp"

#include "support/test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace texref {
namespace {

ChannelPlane vertical_step(int width, int height) {
    ChannelPlane plane(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = width / 2; x < width; ++x) plane.at(x, y) = 255;
    return plane;
}

TEST(EdgeDetector, ParsesAndPrintsConfigStrings) {
    EXPECT_EQ(EdgeDetector::parse("sobel-otsu"), EdgeDetector::sobel_otsu());
    EXPECT_EQ(EdgeDetector::parse("roberts-otsu").kind(), EdgeDetector::Kind::RobertsOtsu);
    const auto fixed = EdgeDetector::parse("sobel-fixed:200.5");
    EXPECT_EQ(fixed.kind(), EdgeDetector::Kind::SobelFixed);
    EXPECT_EQ(fixed.threshold(), 200.5);
    EXPECT_EQ(fixed.to_string(), "sobel-fixed:200.5");
    EXPECT_EQ(EdgeDetector::parse(fixed.to_string()), fixed);
    EXPECT_NO_THROW(EdgeDetector::parse("sobel-fixed:1141"));

    EXPECT_THROW(EdgeDetector::parse("canny"), Error);
    EXPECT_THROW(EdgeDetector::parse("sobel-fixed:"), Error);
    EXPECT_THROW(EdgeDetector::parse("sobel-fixed:abc"), Error);
    EXPECT_THROW(EdgeDetector::parse("sobel-fixed:-1"), Error);
    EXPECT_THROW(EdgeDetector::parse("sobel-fixed:1142"), Error);
}

TEST(GradientMagnitude, SobelPeakIsBelowFixedThresholdCeiling) {
    // Largest magnitude over all binary 3x3 patches (found by enumeration).
    ChannelPlane plane(3, 3);
    plane.at(2, 1) = plane.at(0, 2) = plane.at(1, 2) = plane.at(2, 2) = 255;
    const auto m = gradient_magnitude(plane, EdgeDetector::Kind::SobelOtsu);
    EXPECT_NEAR(m[4], 255.0 * std::sqrt(20.0), 1e-9);
    EXPECT_LT(m[4], EdgeDetector::kMaxFixedThreshold);
}

TEST(DetectEdges, ConstantPlaneHasNoEdges) {
    for (const auto& d : {EdgeDetector::sobel_otsu(), EdgeDetector::roberts_otsu(),
                          EdgeDetector::sobel_fixed(0.0)}) {
        const auto edges = detect_edges(ChannelPlane(12, 9, 77), d);
        for (auto b : edges.bits()) EXPECT_EQ(b, 0);
    }
}

TEST(DetectEdges, LinearRampHasSingleValuedMagnitudeAndNoEdges) {
    ChannelPlane plane(10, 10);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) plane.at(x, y) = static_cast<std::uint8_t>(10 * x);
    const auto edges = detect_edges(plane, EdgeDetector::sobel_otsu());
    for (auto b : edges.bits()) EXPECT_EQ(b, 0);
}

TEST(DetectEdges, VerticalStepMarksStepColumnsOnly) {
    const auto plane = vertical_step(16, 10);
    for (const auto& d : {EdgeDetector::sobel_otsu(), EdgeDetector::roberts_otsu()}) {
        const auto edges = detect_edges(plane, d);
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 16; ++x) {
                const bool near_step = x == 7 || x == 8;
                const bool border = d.kind() == EdgeDetector::Kind::SobelOtsu
                                        ? (x == 0 || y == 0 || x == 15 || y == 9)
                                        : (x == 15 || y == 9);
                if (border || !near_step) {
                    EXPECT_EQ(edges.at(x, y), 0) << d.to_string() << " x=" << x << " y=" << y;
                }
            }
        }
        int on_step = 0;
        for (int y = 1; y < 9; ++y) on_step += edges.at(7, y) + edges.at(8, y);
        EXPECT_GT(on_step, 0) << d.to_string();
    }
    // Sobel sees the step at both adjacent columns.
    const auto sobel = detect_edges(plane, EdgeDetector::sobel_otsu());
    for (int y = 1; y < 9; ++y) {
        EXPECT_EQ(sobel.at(7, y), 1);
        EXPECT_EQ(sobel.at(8, y), 1);
    }
}

TEST(DetectEdges, FixedThresholdIsStrict) {
    const auto plane = vertical_step(8, 8);
    // Magnitude at the step columns is 4·255 = 1020.
    const auto at = detect_edges(plane, EdgeDetector::sobel_fixed(1020.0));
    const auto below = detect_edges(plane, EdgeDetector::sobel_fixed(1019.0));
    EXPECT_EQ(at.at(3, 3), 0);
    EXPECT_EQ(below.at(3, 3), 1);
    EXPECT_EQ(below.at(4, 3), 1);
    EXPECT_EQ(below.at(1, 3), 0);
}

TEST(DetectEdges, RandomPlaneIsBinaryAndDeterministic) {
    std::mt19937 rng(21);
    const auto plane = testing::random_plane(rng, 32, 32);
    for (const auto& d : {EdgeDetector::sobel_otsu(), EdgeDetector::roberts_otsu()}) {
        const auto a = detect_edges(plane, d);
        const auto b = detect_edges(plane, d);
        EXPECT_EQ(a, b);
        int ones = 0;
        for (auto bit : a.bits()) {
            EXPECT_TRUE(bit == 0 || bit == 1);
            ones += bit;
        }
        EXPECT_GT(ones, 0);
        EXPECT_LT(ones, 32 * 32);
    }
}

TEST(DetectEdges, RejectsTinyPlanes) {
    EXPECT_THROW(detect_edges(ChannelPlane(2, 5), EdgeDetector::sobel_otsu()), Error);
}

TEST(DetectEdges, QuarterTurnCommutesWithSobel) {
    std::mt19937 rng(4);
    const auto plane = testing::random_plane(rng, 17, 11);
    const auto rotated_edges = detect_edges(testing::rotate_plane_ccw(plane), EdgeDetector::sobel_otsu());
    const auto edges = detect_edges(plane, EdgeDetector::sobel_otsu());
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 17; ++x) EXPECT_EQ(rotated_edges.at(y, 16 - x), edges.at(x, y));
}

}  // namespace
}  // namespace texref
