#include "gazekit/gaze.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gazekit/rle.hpp"

namespace gazekit {

double estimate_accuracy(const std::vector<CalibrationObservation>& observations,
                         const CameraModel& camera) {
    if (observations.empty())
        throw std::invalid_argument("estimate_accuracy: no observations");
    camera.validate();
    const double deg_per_px = camera.hfov_deg / camera.width_px;
    double sum = 0.0;
    for (const auto& o : observations) {
        double dx = o.est_x - o.known_x;
        double dy = o.est_y - o.known_y;
        sum += std::hypot(dx, dy) * deg_per_px;
    }
    return sum / double(observations.size());
}

std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& stream,
                                       double min_duration_ms, double dispersion_px) {
    for (size_t i = 1; i < stream.size(); ++i)
        if (stream[i].t_ms < stream[i - 1].t_ms)
            throw std::invalid_argument("detect_fixations: timestamps not ordered");

    std::vector<Fixation> out;
    const size_t n = stream.size();
    size_t i = 0;
    while (i < n) {
        if (!stream[i].valid) {
            ++i;
            continue;
        }
        // grow a maximal stable window starting at i
        double min_x = stream[i].x_px, max_x = min_x;
        double min_y = stream[i].y_px, max_y = min_y;
        size_t j = i;
        while (j + 1 < n && stream[j + 1].valid) {
            double nx0 = std::min(min_x, stream[j + 1].x_px);
            double nx1 = std::max(max_x, stream[j + 1].x_px);
            double ny0 = std::min(min_y, stream[j + 1].y_px);
            double ny1 = std::max(max_y, stream[j + 1].y_px);
            if (std::max(nx1 - nx0, ny1 - ny0) > dispersion_px) break;
            min_x = nx0; max_x = nx1; min_y = ny0; max_y = ny1;
            ++j;
        }
        if (stream[j].t_ms - stream[i].t_ms >= min_duration_ms) {
            Fixation f;
            f.start_ms = stream[i].t_ms;
            f.end_ms = stream[j].t_ms;
            double sx = 0.0, sy = 0.0;
            for (size_t k = i; k <= j; ++k) {
                sx += stream[k].x_px;
                sy += stream[k].y_px;
            }
            f.x = sx / double(j - i + 1);
            f.y = sy / double(j - i + 1);
            out.push_back(f);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

std::pair<int, int> align_to_frames(const Fixation& f, double fps) {
    if (fps <= 0.0) throw std::invalid_argument("align_to_frames: fps must be positive");
    int first = int(std::floor(f.start_ms * fps / 1000.0));
    int last = int(std::floor(f.end_ms * fps / 1000.0));
    if (last < first) last = first;
    return {first, last};
}

SniffingFilterResult filter_sniffing(
    const std::vector<std::pair<Fixation, const FrameSegmentation*>>& pairs,
    size_t max_masks) {
    SniffingFilterResult res;
    for (const auto& p : pairs) {
        if (p.second != nullptr && p.second->masks.size() <= max_masks)
            ++res.removed;
        else
            res.retained.push_back(p);
    }
    return res;
}

} // namespace gazekit
