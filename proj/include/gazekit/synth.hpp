#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gazekit/camera.hpp"
#include "gazekit/frame.hpp"
#include "gazekit/gaze.hpp"
#include "gazekit/taxonomy.hpp"

#include <nlohmann/json_fwd.hpp>

namespace gazekit {

/// Per-class planting parameters. Sizes are fractions of the frame area;
/// attention weights must sum to 1 across classes.
struct ClassPlant {
    double availability = 0.0;
    double size_mean = 0.02;
    double size_sd = 0.005;
    double attention = 0.0;
};

struct SynthConfig {
    uint64_t seed = 1;
    int fixation_count = 100;
    CameraModel camera{640, 480, 101.55, 73.60, 29.96};
    ClassTaxonomy taxonomy;
    std::vector<ClassPlant> classes; // indexed 0..K-1 for class ids 1..K
    double null_rate = 0.0;
    std::string dog_id = "synth-dog";
    double accuracy_deg = 5.32;
    int min_present = 3; // keeps fixation frames clear of the sniffing filter
    int min_samples = 4;
    int max_samples = 18;

    void validate() const;
};

/// Deterministic synthetic corpus. Instances sit on a non-overlapping grid
/// so every planted fixation region lies wholly inside its target mask (or
/// on uncovered pixels for planted nulls); target classes are allocated by
/// largest-remainder quota so the realized draw matches the planted
/// attention distribution up to rounding.
struct SynthCorpus {
    std::vector<FrameSegmentation> frames; // one per fixation, at its first frame index
    std::vector<GazeSample> gaze;
    std::vector<Fixation> planted_fixations;
    nlohmann::json manifest() const;

    // planted truths, realized
    std::vector<int64_t> target_count;   // per class id (0 = null)
    std::vector<int64_t> in_view_frames; // per class id, over fixation frames
    double mean_objects_per_frame = 0.0;
    double sd_objects_per_frame = 0.0;
    std::vector<double> planted_attention; // per class id
    double planted_null_rate = 0.0;
    int fixation_count = 0;
};

SynthCorpus synth_corpus(const SynthConfig& cfg);

struct CorruptionParams {
    uint64_t seed = 1;
    double label_swap_rate = 0.0;
    double erosion_keep = 1.0; // fraction of each mask's pixels kept
    double drop_rate = 0.0;
    double spurious_rate = 0.0;
};

/// Applies quota-sampled label swaps, mask shrinking, instance drops and
/// spurious duplicates. Zero rates are the identity.
std::vector<FrameSegmentation> corrupt_predictions(const std::vector<FrameSegmentation>& gt,
                                                   const CorruptionParams& params,
                                                   int num_classes);

/// Axis-aligned shape helpers shared with tests.
RleMask rect_mask(int cx, int cy, int half_w, int half_h, uint32_t width, uint32_t height);
RleMask ellipse_mask(int cx, int cy, int semi_x, int semi_y, uint32_t width, uint32_t height);

} // namespace gazekit
