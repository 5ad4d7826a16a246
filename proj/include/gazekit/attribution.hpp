#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gazekit/frame.hpp"
#include "gazekit/gaze.hpp"

namespace gazekit {

/// Circular region of error around a fixation point, rasterized and clipped
/// to the frame.
struct FixationRegion {
    double cx = 0.0;
    double cy = 0.0;
    int radius_px = 0;
    RleMask disk;
};

/// Probability vector over taxonomy ids (background at index 0). A null
/// distribution means the region intersected no mask.
struct ClassDistribution {
    std::vector<double> probs;
    bool is_null = true;
};

struct AttributionRecord {
    std::string dog_id;
    Fixation fixation;
    int frame_index = -1;
    ClassDistribution distribution;
    std::vector<double> occupancy; // fraction of region pixels covered per class
    bool error = false;
    std::string error_message;
};

enum class ChiMode { pearson, symmetric };

FixationRegion make_region(const Fixation& f, const DogProfile& profile,
                           const CameraModel& camera);

/// Per-class intersection pixel counts (index 0 = region pixels covered by
/// no mask). A pixel under two instances counts once per instance.
std::vector<uint64_t> attribute_counts(const FixationRegion& region,
                                       const FrameSegmentation& frame, int num_classes);

/// Per-class occupancy: fraction of region pixels covered by the union of
/// that class's masks.
std::vector<double> region_occupancy(const FixationRegion& region,
                                     const FrameSegmentation& frame, int num_classes);

ClassDistribution attribute(const FixationRegion& region, const FrameSegmentation& frame,
                            int num_classes, bool include_background = false);

/// Chi-square distance between two probability (or count) vectors. Pearson
/// mode treats q as the expected distribution; zero-expected cells with
/// observed mass contribute p^2 / eps.
double chi_square_distance(const std::vector<double>& p, const std::vector<double>& q,
                           ChiMode mode = ChiMode::pearson, double eps = 1e-6);
double chi_square_distance(const ClassDistribution& p, const ClassDistribution& q,
                           ChiMode mode = ChiMode::pearson, double eps = 1e-6);

struct GofResult {
    bool accept = false;
    double critical = 0.0;
    double margin = 0.0;
};
GofResult goodness_of_fit(double distance, int dof, double alpha);

struct BatchSummary {
    size_t total = 0;
    size_t nulls = 0;
    size_t retained = 0;
    size_t errors = 0;
};

/// Attribute every fixation against its first frame. Missing frames yield
/// per-record errors, never a batch abort. Output order matches input order
/// regardless of thread count.
std::vector<AttributionRecord> batch_attribute(
    const std::vector<Fixation>& fixations,
    const std::unordered_map<int, const FrameSegmentation*>& frames,
    const std::unordered_map<std::string, DogProfile>& profiles, const CameraModel& camera,
    int num_classes, bool include_background, int threads, BatchSummary* summary);

} // namespace gazekit
