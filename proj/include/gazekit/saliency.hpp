#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gazekit/attribution.hpp"

namespace gazekit {

struct ImageRGB {
    int width = 0, height = 0;
    std::vector<float> r, g, b; // row-major, [0, 1]
};

struct SaliencyMap {
    int width = 0, height = 0;
    std::vector<float> values; // min-max normalized to [0, 1]
    bool degenerate = false;   // constant input map, normalized to all-zero
};

enum class SaliencyMode { color, grayscale };

/// Simplified center-surround saliency: 5-level Gaussian pyramid, intensity
/// + RG/BY opponency (color mode) + 4 orientation channels, surround offset
/// 2, per-channel max normalization, equal-weight sum.
SaliencyMap saliency_map(const ImageRGB& image, SaliencyMode mode);

/// Mean map value over the region's disk pixels.
double fixation_score(const SaliencyMap& map, const FixationRegion& region);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points; // sorted by increasing fpr, ends pinned at (0,0)/(1,1)
    double auc = 0.0;
};

/// AUC-Judd: thresholds are the (jittered) fixation scores; TPR counts
/// scores at or above threshold, FPR counts map pixels at or above it. The
/// area is integrated under the exact step ROC, which equals the normalized
/// Mann-Whitney U statistic.
RocCurve auc_judd(const std::vector<double>& scores, const std::vector<float>& map_values,
                  uint64_t seed, double jitter = 1e-7);

/// Per-frame FPR variant: each score carries its own frame's map; FPR at a
/// threshold is averaged over the per-frame pixel pools.
RocCurve auc_judd_per_frame(const std::vector<double>& scores,
                            const std::vector<const SaliencyMap*>& maps, uint64_t seed,
                            double jitter = 1e-7);

/// 8- or 16-bit PGM (P2/P5), rescaled to [0, 1].
SaliencyMap load_pgm(const std::string& path);
/// 8-bit PPM (P3/P6).
ImageRGB load_ppm(const std::string& path);

} // namespace gazekit
