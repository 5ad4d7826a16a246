#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gazekit/camera.hpp"
#include "gazekit/frame.hpp"

namespace gazekit {

struct GazeSample {
    double t_ms = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;
    bool valid = true;
};

struct CalibrationObservation {
    double known_x = 0.0, known_y = 0.0;
    double est_x = 0.0, est_y = 0.0;
    int frame_index = 0;
};

struct DogProfile {
    std::string dog_id;
    double spatial_accuracy_deg = 0.0;
    int radius_px = 0; // derived via deg_to_px_radius
};

struct Fixation {
    std::string dog_id;
    double start_ms = 0.0;
    double end_ms = 0.0;
    double x = 0.0; // centroid of window samples
    double y = 0.0;
    int first_frame = -1;
    int last_frame = -1;
};

/// Mean angular error between known and estimated points of regard,
/// using the horizontal pixel-per-degree scale.
double estimate_accuracy(const std::vector<CalibrationObservation>& observations,
                         const CameraModel& camera);

/// Dispersion-threshold (I-DT) fixation detection. A maximal run of valid
/// samples whose per-axis coordinate spread stays within dispersion_px and
/// whose duration reaches min_duration_ms yields one fixation at the sample
/// centroid. Invalid samples terminate windows.
std::vector<Fixation> detect_fixations(const std::vector<GazeSample>& stream,
                                       double min_duration_ms, double dispersion_px);

/// Frame index pair for a fixation: floor(t * fps / 1000) at both ends,
/// clamped so the range is never empty.
std::pair<int, int> align_to_frames(const Fixation& f, double fps);

/// Drops fixation/frame pairs whose frame holds at most max_masks instance
/// masks (sniffing bouts). Order preserved.
struct SniffingFilterResult {
    std::vector<std::pair<Fixation, const FrameSegmentation*>> retained;
    size_t removed = 0;
};
SniffingFilterResult filter_sniffing(
    const std::vector<std::pair<Fixation, const FrameSegmentation*>>& pairs,
    size_t max_masks = 2);

} // namespace gazekit
