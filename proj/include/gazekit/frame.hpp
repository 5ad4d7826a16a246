#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "gazekit/rle.hpp"

namespace gazekit {

/// One class-labeled, confidence-scored instance mask. Ground-truth masks
/// carry confidence 1.0.
struct InstanceMask {
    int instance_id = 0;
    int class_id = 0;
    RleMask mask;
    std::array<int, 4> bbox = {0, 0, 0, 0}; // x0, y0, x1, y1 inclusive
    double confidence = 1.0;
};

struct FrameSegmentation {
    int frame_index = 0;
    double timestamp_ms = 0.0;
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<InstanceMask> masks;
};

/// Tight bounding box of a mask's set pixels; all-zero for an empty mask.
std::array<int, 4> bbox_of(const RleMask& mask);

/// Fraction of the frame covered by the union of all instance masks.
double frame_coverage(const FrameSegmentation& frame);

/// Union spans of all masks of one class in a frame.
std::vector<PixelSpan> class_union_spans(const FrameSegmentation& frame, int class_id);

inline std::array<int, 4> bbox_of(const RleMask& mask) {
    std::array<int, 4> bb = {int(mask.width), int(mask.height), -1, -1};
    for (const auto& s : set_spans(mask)) {
        for (uint32_t p = s.begin; p < s.end;) {
            int y = int(p / mask.width);
            uint32_t row_end = std::min(s.end, (uint32_t(y) + 1) * mask.width);
            int x0 = int(p % mask.width);
            int x1 = int((row_end - 1) % mask.width);
            bb[0] = std::min(bb[0], x0);
            bb[1] = std::min(bb[1], y);
            bb[2] = std::max(bb[2], x1);
            bb[3] = std::max(bb[3], y);
            p = row_end;
        }
    }
    if (bb[2] < 0) return {0, 0, 0, 0};
    return bb;
}

inline double frame_coverage(const FrameSegmentation& frame) {
    if (frame.width == 0 || frame.height == 0) return 0.0;
    std::vector<std::vector<PixelSpan>> lists;
    lists.reserve(frame.masks.size());
    for (const auto& m : frame.masks) lists.push_back(set_spans(m.mask));
    return double(union_area(lists)) / (double(frame.width) * frame.height);
}

inline std::vector<PixelSpan> class_union_spans(const FrameSegmentation& frame, int class_id) {
    std::vector<std::vector<PixelSpan>> lists;
    for (const auto& m : frame.masks)
        if (m.class_id == class_id) lists.push_back(set_spans(m.mask));
    return union_spans(lists);
}

} // namespace gazekit
