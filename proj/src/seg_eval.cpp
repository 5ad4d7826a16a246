#include "gazekit/seg_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gazekit {

int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), int64_t(0));
}

int64_t ConfusionMatrix::trace() const {
    int64_t t = 0;
    for (int c = 0; c <= num_classes; ++c) t += at(c, c);
    return t;
}

double mask_iou(const InstanceMask& a, const InstanceMask& b) {
    uint64_t inter = rle_intersect_count(a.mask, b.mask);
    uint64_t uni = rle_area(a.mask) + rle_area(b.mask) - inter;
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

MaskPairing pair_masks(const FrameSegmentation& gt, const FrameSegmentation& pred) {
    MaskPairing p;
    p.gt_to_pred.resize(gt.masks.size());
    p.pred_to_gt.resize(pred.masks.size());
    // O(n*m) IoU table; frames hold at most a handful of masks
    std::vector<std::vector<double>> iou(gt.masks.size(),
                                         std::vector<double>(pred.masks.size(), 0.0));
    for (size_t i = 0; i < gt.masks.size(); ++i)
        for (size_t j = 0; j < pred.masks.size(); ++j)
            iou[i][j] = mask_iou(gt.masks[i], pred.masks[j]);

    auto better = [](double cand_iou, int cand_id, double best_iou, int best_id) {
        if (cand_iou != best_iou) return cand_iou > best_iou;
        return cand_id < best_id; // ties to lower instance id
    };

    for (size_t i = 0; i < gt.masks.size(); ++i) {
        int best = -1;
        double best_iou = -1.0;
        for (size_t j = 0; j < pred.masks.size(); ++j) {
            if (best < 0 || better(iou[i][j], pred.masks[j].instance_id, best_iou,
                                   pred.masks[size_t(best)].instance_id)) {
                best = int(j);
                best_iou = iou[i][j];
            }
        }
        p.gt_to_pred[i] = {best, best < 0 ? 0.0 : best_iou};
    }
    for (size_t j = 0; j < pred.masks.size(); ++j) {
        int best = -1;
        double best_iou = -1.0;
        for (size_t i = 0; i < gt.masks.size(); ++i) {
            if (best < 0 || better(iou[i][j], gt.masks[i].instance_id, best_iou,
                                   gt.masks[size_t(best)].instance_id)) {
                best = int(i);
                best_iou = iou[i][j];
            }
        }
        p.pred_to_gt[j] = {best, best < 0 ? 0.0 : best_iou};
    }
    return p;
}

void accumulate_confusion(ConfusionMatrix& m, const MaskPairing& pairing,
                          const FrameSegmentation& gt, const FrameSegmentation& pred) {
    for (size_t i = 0; i < pairing.gt_to_pred.size(); ++i) {
        const auto& match = pairing.gt_to_pred[i];
        int gt_class = gt.masks[i].class_id;
        if (match.partner >= 0 && match.iou > 0.0)
            ++m.at(gt_class, pred.masks[size_t(match.partner)].class_id);
        else
            ++m.at(gt_class, ClassTaxonomy::kBackgroundId);
    }
    // predicted masks nothing claims are false positives charged to background
    for (size_t j = 0; j < pairing.pred_to_gt.size(); ++j) {
        const auto& match = pairing.pred_to_gt[j];
        if (match.partner < 0 || match.iou == 0.0)
            ++m.at(ClassTaxonomy::kBackgroundId, pred.masks[j].class_id);
    }
}

double per_class_iou(const FrameSegmentation& gt, const FrameSegmentation& pred, int class_id) {
    double best = 0.0;
    bool gt_any = false, pred_any = false;
    for (const auto& g : gt.masks) {
        if (g.class_id != class_id) continue;
        gt_any = true;
        for (const auto& p : pred.masks) {
            if (p.class_id != class_id) continue;
            pred_any = true;
            best = std::max(best, mask_iou(g, p));
        }
    }
    return (gt_any && pred_any) ? best : 0.0;
}

std::optional<double> class_count_accuracy(const std::vector<FrameSegmentation>& gt,
                                           const std::vector<FrameSegmentation>& pred,
                                           int class_id) {
    if (gt.size() != pred.size())
        throw std::invalid_argument("class_count_accuracy: misaligned corpora");
    double sum = 0.0;
    size_t n = 0;
    for (size_t f = 0; f < gt.size(); ++f) {
        auto count = [&](const FrameSegmentation& fr) {
            size_t c = 0;
            for (const auto& m : fr.masks)
                if (m.class_id == class_id) ++c;
            return c;
        };
        size_t cg = count(gt[f]), cp = count(pred[f]);
        if (cg == 0 && cp == 0) continue;
        sum += double(std::min(cg, cp)) / double(std::max(cg, cp));
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / double(n);
}

ClassRates rates_from_confusion(const ConfusionMatrix& m) {
    ClassRates r;
    int k = m.num_classes;
    r.precision.assign(size_t(k) + 1, 0.0);
    r.recall.assign(size_t(k) + 1, 0.0);
    for (int c = 0; c <= k; ++c) {
        int64_t row = 0, col = 0;
        for (int j = 0; j <= k; ++j) {
            row += m.at(c, j);
            col += m.at(j, c);
        }
        r.recall[size_t(c)] = row == 0 ? 0.0 : double(m.at(c, c)) / double(row);
        r.precision[size_t(c)] = col == 0 ? 0.0 : double(m.at(c, c)) / double(col);
    }
    int64_t total = m.total();
    r.accuracy = total == 0 ? 0.0 : double(m.trace()) / double(total);
    return r;
}

CoverageStats coverage_gap(const std::vector<FrameSegmentation>& gt,
                           const std::vector<FrameSegmentation>& pred, int num_classes) {
    if (gt.size() != pred.size())
        throw std::invalid_argument("coverage_gap: misaligned corpora");
    CoverageStats s;
    s.class_gap.assign(size_t(num_classes) + 1, 0.0);
    if (gt.empty()) return s;
    for (size_t f = 0; f < gt.size(); ++f) {
        if (gt[f].width != pred[f].width || gt[f].height != pred[f].height)
            throw std::invalid_argument("coverage_gap: frame dimension mismatch");
        s.mean_gt_coverage += frame_coverage(gt[f]);
        s.mean_pred_coverage += frame_coverage(pred[f]);
        double frame_area = double(gt[f].width) * gt[f].height;
        for (int c = 1; c <= num_classes; ++c) {
            double ga = double(span_area(class_union_spans(gt[f], c)));
            double pa = double(span_area(class_union_spans(pred[f], c)));
            s.class_gap[size_t(c)] += (pa - ga) / frame_area;
        }
    }
    double n = double(gt.size());
    s.mean_gt_coverage /= n;
    s.mean_pred_coverage /= n;
    for (auto& g : s.class_gap) g /= n;
    return s;
}

double loss_weight(double confidence, double pair_iou, bool class_match,
                   double iou_threshold) {
    if (confidence < 0.0 || confidence > 1.0)
        throw std::invalid_argument("loss_weight: confidence outside [0, 1]");
    if (class_match && pair_iou >= iou_threshold) return 1.0 - confidence;
    return 1.0;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

MetricsReport evaluate_corpus(const std::vector<FrameSegmentation>& gt,
                              const std::vector<FrameSegmentation>& pred,
                              const ClassTaxonomy& taxonomy) {
    if (gt.size() != pred.size())
        throw std::invalid_argument("evaluate_corpus: misaligned corpora");
    const int k = taxonomy.num_classes();
    MetricsReport rep;
    rep.confusion = ConfusionMatrix(k);
    rep.mean_iou.assign(size_t(k) + 1, std::nullopt);
    rep.count_accuracy.assign(size_t(k) + 1, std::nullopt);

    std::vector<double> iou_sum(size_t(k) + 1, 0.0);
    std::vector<size_t> iou_n(size_t(k) + 1, 0);
    for (size_t f = 0; f < gt.size(); ++f) {
        auto pairing = pair_masks(gt[f], pred[f]);
        accumulate_confusion(rep.confusion, pairing, gt[f], pred[f]);
        for (int c = 1; c <= k; ++c) {
            bool present = false;
            for (const auto& m : gt[f].masks) present |= (m.class_id == c);
            for (const auto& m : pred[f].masks) present |= (m.class_id == c);
            if (!present) continue;
            iou_sum[size_t(c)] += per_class_iou(gt[f], pred[f], c);
            ++iou_n[size_t(c)];
        }
    }
    std::vector<double> ious, caccs;
    for (int c = 1; c <= k; ++c) {
        if (iou_n[size_t(c)] > 0) {
            rep.mean_iou[size_t(c)] = iou_sum[size_t(c)] / double(iou_n[size_t(c)]);
            ious.push_back(*rep.mean_iou[size_t(c)]);
        }
        rep.count_accuracy[size_t(c)] = class_count_accuracy(gt, pred, c);
        if (rep.count_accuracy[size_t(c)]) caccs.push_back(*rep.count_accuracy[size_t(c)]);
    }
    rep.rates = rates_from_confusion(rep.confusion);
    rep.coverage = coverage_gap(gt, pred, k);
    rep.median_iou = median(ious);
    rep.median_count_accuracy = median(caccs);
    std::vector<double> precs, recs;
    for (int c = 1; c <= k; ++c) {
        precs.push_back(rep.rates.precision[size_t(c)]);
        recs.push_back(rep.rates.recall[size_t(c)]);
    }
    rep.median_precision = median(precs);
    rep.median_recall = median(recs);
    return rep;
}

std::string metrics_table(const MetricsReport& report, const ClassTaxonomy& taxonomy) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    auto cell = [](std::optional<double> v) {
        if (!v) return std::string("   --  ");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%7.4f", *v);
        return std::string(buf);
    };
    os << "class               mean-IoU  count-acc  precision  recall   cover-gap\n";
    for (int c = 1; c <= taxonomy.num_classes(); ++c) {
        char line[160];
        std::snprintf(line, sizeof line, "%-18s  %s   %s    %7.4f   %7.4f  %+8.4f\n",
                      taxonomy.name(c).c_str(), cell(report.mean_iou[size_t(c)]).c_str(),
                      cell(report.count_accuracy[size_t(c)]).c_str(),
                      report.rates.precision[size_t(c)], report.rates.recall[size_t(c)],
                      report.coverage.class_gap[size_t(c)]);
        os << line;
    }
    os << "\nmedian IoU " << report.median_iou << "  median count-acc "
       << report.median_count_accuracy << "  median precision " << report.median_precision
       << "  median recall " << report.median_recall << "\n";
    os << "mask accuracy " << report.rates.accuracy << "  mean coverage gt "
       << report.coverage.mean_gt_coverage << " pred " << report.coverage.mean_pred_coverage
       << "\n";
    return os.str();
}

} // namespace gazekit
