#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gazekit/frame.hpp"
#include "gazekit/taxonomy.hpp"

namespace gazekit {

/// Bidirectional max-IoU assignment between one frame's ground-truth and
/// predicted mask sets. partner < 0 means no counterpart existed.
struct MaskPairing {
    struct Match {
        int partner = -1; // index into the other side's mask vector
        double iou = 0.0;
    };
    std::vector<Match> gt_to_pred;
    std::vector<Match> pred_to_gt;
};

/// (K+1)x(K+1) counts; rows are ground-truth class (0 = background),
/// columns predicted class.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<int64_t> counts;

    explicit ConfusionMatrix(int k = 0)
        : num_classes(k), counts(size_t(k + 1) * size_t(k + 1), 0) {}
    int64_t& at(int gt, int pred) { return counts[size_t(gt) * (num_classes + 1) + pred]; }
    int64_t at(int gt, int pred) const { return counts[size_t(gt) * (num_classes + 1) + pred]; }
    int64_t total() const;
    int64_t trace() const;
};

struct ClassRates {
    std::vector<double> precision; // indexed by class id, 0 = background
    std::vector<double> recall;
    double accuracy = 0.0;
};

struct CoverageStats {
    double mean_gt_coverage = 0.0;
    double mean_pred_coverage = 0.0;
    std::vector<double> class_gap; // (pred area - gt area) / frame area, per class
};

struct MetricsReport {
    std::vector<std::optional<double>> mean_iou;       // per class, absent if never seen
    std::vector<std::optional<double>> count_accuracy; // per class
    ClassRates rates;
    ConfusionMatrix confusion{0};
    CoverageStats coverage;
    double median_iou = 0.0;
    double median_count_accuracy = 0.0;
    double median_precision = 0.0;
    double median_recall = 0.0;
};

double mask_iou(const InstanceMask& a, const InstanceMask& b);

MaskPairing pair_masks(const FrameSegmentation& gt, const FrameSegmentation& pred);

void accumulate_confusion(ConfusionMatrix& m, const MaskPairing& pairing,
                          const FrameSegmentation& gt, const FrameSegmentation& pred);

/// Best same-class IoU between the two mask sets of one frame; 0 when
/// either side has no mask of the class.
double per_class_iou(const FrameSegmentation& gt, const FrameSegmentation& pred, int class_id);

/// min(gt_count, pred_count) / max(...) per image, averaged over images
/// where the class appears on either side.
std::optional<double> class_count_accuracy(const std::vector<FrameSegmentation>& gt,
                                           const std::vector<FrameSegmentation>& pred,
                                           int class_id);

ClassRates rates_from_confusion(const ConfusionMatrix& m);

CoverageStats coverage_gap(const std::vector<FrameSegmentation>& gt,
                           const std::vector<FrameSegmentation>& pred, int num_classes);

/// Loss gating coefficient: (1 - C) when the class matches and the pair IoU
/// clears the gate, otherwise 1 (loss unmodified).
double loss_weight(double confidence, double pair_iou, bool class_match,
                   double iou_threshold = 0.75);

MetricsReport evaluate_corpus(const std::vector<FrameSegmentation>& gt,
                              const std::vector<FrameSegmentation>& pred,
                              const ClassTaxonomy& taxonomy);

std::string metrics_table(const MetricsReport& report, const ClassTaxonomy& taxonomy);

} // namespace gazekit
