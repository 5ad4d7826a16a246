#pragma once

#include <cstdint>
#include <vector>

#include "gazekit/camera.hpp"

namespace gazekit {

/// Row-major run-length encoded binary mask. Runs alternate background /
/// foreground, starting with a (possibly zero) background run. sum(runs)
/// always equals width*height.
struct RleMask {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint32_t> runs;

    uint64_t pixel_count() const { return uint64_t(width) * height; }
    void validate() const;
};

/// Half-open interval [begin, end) of set pixels in flat row-major index space.
struct PixelSpan {
    uint32_t begin = 0;
    uint32_t end = 0;
};

RleMask rle_encode(const std::vector<uint8_t>& bitmap, uint32_t width, uint32_t height);
std::vector<uint8_t> rle_decode(const RleMask& mask);

uint64_t rle_area(const RleMask& mask);
uint64_t rle_intersect_count(const RleMask& a, const RleMask& b);

std::vector<PixelSpan> set_spans(const RleMask& mask);
RleMask mask_from_spans(const std::vector<PixelSpan>& spans, uint32_t width, uint32_t height);

/// Intersection of two sorted span lists.
std::vector<PixelSpan> intersect_spans(const std::vector<PixelSpan>& a,
                                       const std::vector<PixelSpan>& b);

/// Total set-pixel count of the union of several sorted span lists.
uint64_t union_area(const std::vector<std::vector<PixelSpan>>& span_lists);

/// Merged (sorted, disjoint) union of several sorted span lists.
std::vector<PixelSpan> union_spans(const std::vector<std::vector<PixelSpan>>& span_lists);

uint64_t span_area(const std::vector<PixelSpan>& spans);

/// Pixel (i,j) is set iff (i-cx)^2 + (j-cy)^2 <= r^2, clipped to the frame.
/// The center may lie outside the frame.
RleMask rasterize_disk(double cx, double cy, int radius_px, uint32_t width, uint32_t height);

/// Angular accuracy to pixel radius via the horizontal pixel-per-degree
/// scale, rounded to nearest.
int deg_to_px_radius(double accuracy_deg, const CameraModel& camera);

} // namespace gazekit
