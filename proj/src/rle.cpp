#include "gazekit/rle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gazekit {

void RleMask::validate() const {
    uint64_t total = 0;
    for (uint32_t r : runs) total += r;
    if (total != pixel_count())
        throw std::invalid_argument("rle: run sum does not match mask dimensions");
    for (size_t i = 1; i + 1 < runs.size(); ++i)
        if (runs[i] == 0 && runs[i + 1] == 0)
            throw std::invalid_argument("rle: consecutive zero-length runs");
}

RleMask rle_encode(const std::vector<uint8_t>& bitmap, uint32_t width, uint32_t height) {
    if (width == 0 || height == 0)
        throw std::invalid_argument("rle_encode: dimensions must be positive");
    if (bitmap.size() != uint64_t(width) * height)
        throw std::invalid_argument("rle_encode: bitmap size does not match dimensions");
    RleMask m{width, height, {}};
    uint8_t cur = 0; // leading run counts background pixels
    uint32_t len = 0;
    for (uint8_t b : bitmap) {
        uint8_t v = b ? 1 : 0;
        if (v == cur) {
            ++len;
        } else {
            m.runs.push_back(len);
            cur = v;
            len = 1;
        }
    }
    m.runs.push_back(len);
    return m;
}

std::vector<uint8_t> rle_decode(const RleMask& mask) {
    mask.validate();
    std::vector<uint8_t> out;
    out.reserve(mask.pixel_count());
    uint8_t cur = 0;
    for (uint32_t r : mask.runs) {
        out.insert(out.end(), r, cur);
        cur ^= 1;
    }
    return out;
}

uint64_t rle_area(const RleMask& mask) {
    uint64_t area = 0;
    for (size_t i = 1; i < mask.runs.size(); i += 2) area += mask.runs[i];
    return area;
}

std::vector<PixelSpan> set_spans(const RleMask& mask) {
    std::vector<PixelSpan> spans;
    spans.reserve(mask.runs.size() / 2);
    uint32_t pos = 0;
    for (size_t i = 0; i < mask.runs.size(); ++i) {
        if (i % 2 == 1 && mask.runs[i] > 0)
            spans.push_back({pos, pos + mask.runs[i]});
        pos += mask.runs[i];
    }
    return spans;
}

uint64_t rle_intersect_count(const RleMask& a, const RleMask& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("rle_intersect_count: dimension mismatch");
    const auto sa = set_spans(a);
    const auto sb = set_spans(b);
    uint64_t count = 0;
    size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        uint32_t lo = std::max(sa[i].begin, sb[j].begin);
        uint32_t hi = std::min(sa[i].end, sb[j].end);
        if (hi > lo) count += hi - lo;
        if (sa[i].end <= sb[j].end) ++i; else ++j;
    }
    return count;
}

RleMask mask_from_spans(const std::vector<PixelSpan>& spans, uint32_t width, uint32_t height) {
    // coalesce overlapping/abutting spans; input must be sorted by begin
    std::vector<PixelSpan> merged;
    merged.reserve(spans.size());
    for (const auto& s : spans) {
        if (s.end <= s.begin) continue;
        if (!merged.empty() && s.begin <= merged.back().end)
            merged.back().end = std::max(merged.back().end, s.end);
        else
            merged.push_back(s);
    }
    RleMask m{width, height, {}};
    const uint64_t total = m.pixel_count();
    uint32_t pos = 0;
    for (const auto& s : merged) {
        m.runs.push_back(s.begin - pos);
        m.runs.push_back(s.end - s.begin);
        pos = s.end;
    }
    if (m.runs.empty() || pos < total)
        m.runs.push_back(uint32_t(total - pos));
    return m;
}

std::vector<PixelSpan> intersect_spans(const std::vector<PixelSpan>& a,
                                       const std::vector<PixelSpan>& b) {
    std::vector<PixelSpan> out;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        uint32_t lo = std::max(a[i].begin, b[j].begin);
        uint32_t hi = std::min(a[i].end, b[j].end);
        if (hi > lo) out.push_back({lo, hi});
        if (a[i].end <= b[j].end) ++i; else ++j;
    }
    return out;
}

std::vector<PixelSpan> union_spans(const std::vector<std::vector<PixelSpan>>& span_lists) {
    std::vector<PixelSpan> all;
    for (const auto& l : span_lists) all.insert(all.end(), l.begin(), l.end());
    std::sort(all.begin(), all.end(),
              [](const PixelSpan& x, const PixelSpan& y) { return x.begin < y.begin; });
    std::vector<PixelSpan> merged;
    for (const auto& s : all) {
        if (s.end <= s.begin) continue;
        if (!merged.empty() && s.begin <= merged.back().end)
            merged.back().end = std::max(merged.back().end, s.end);
        else
            merged.push_back(s);
    }
    return merged;
}

uint64_t span_area(const std::vector<PixelSpan>& spans) {
    uint64_t a = 0;
    for (const auto& s : spans) a += s.end - s.begin;
    return a;
}

uint64_t union_area(const std::vector<std::vector<PixelSpan>>& span_lists) {
    return span_area(union_spans(span_lists));
}

RleMask rasterize_disk(double cx, double cy, int radius_px, uint32_t width, uint32_t height) {
    if (width == 0 || height == 0)
        throw std::invalid_argument("rasterize_disk: dimensions must be positive");
    if (radius_px < 0)
        throw std::invalid_argument("rasterize_disk: negative radius");
    const double r2 = double(radius_px) * radius_px;
    auto inside = [&](int i, int j) {
        double dx = i - cx, dy = j - cy;
        return dx * dx + dy * dy <= r2;
    };
    std::vector<PixelSpan> spans;
    int j0 = std::max(0, int(std::floor(cy)) - radius_px - 1);
    int j1 = std::min(int(height) - 1, int(std::ceil(cy)) + radius_px + 1);
    for (int j = j0; j <= j1; ++j) {
        double dy = j - cy;
        double rem = r2 - dy * dy;
        if (rem < 0) continue;
        double dx = std::sqrt(rem);
        int i_lo = int(std::ceil(cx - dx));
        int i_hi = int(std::floor(cx + dx));
        // nudge boundaries so inclusion is exact despite sqrt rounding
        while (inside(i_lo - 1, j)) --i_lo;
        while (i_lo <= i_hi && !inside(i_lo, j)) ++i_lo;
        while (inside(i_hi + 1, j)) ++i_hi;
        while (i_hi >= i_lo && !inside(i_hi, j)) --i_hi;
        i_lo = std::max(i_lo, 0);
        i_hi = std::min(i_hi, int(width) - 1);
        if (i_lo > i_hi) continue;
        uint32_t base = uint32_t(j) * width;
        spans.push_back({base + uint32_t(i_lo), base + uint32_t(i_hi) + 1});
    }
    return mask_from_spans(spans, width, height);
}

int deg_to_px_radius(double accuracy_deg, const CameraModel& camera) {
    if (accuracy_deg <= 0.0)
        throw std::invalid_argument("deg_to_px_radius: accuracy must be positive");
    camera.validate();
    return int(std::lround(accuracy_deg * camera.px_per_deg_h()));
}

} // namespace gazekit
