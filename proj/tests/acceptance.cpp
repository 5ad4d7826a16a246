// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails. Oracles here are independent
// re-implementations (per-pixel bitmaps, direct statistical formulas), not
// calls back into the code under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gazekit/attribution.hpp"
#include "gazekit/config.hpp"
#include "gazekit/io.hpp"
#include "gazekit/numeric.hpp"
#include "gazekit/report.hpp"
#include "gazekit/rle.hpp"
#include "gazekit/rng.hpp"
#include "gazekit/saliency.hpp"
#include "gazekit/seg_eval.hpp"
#include "gazekit/stats.hpp"
#include "gazekit/synth.hpp"

using namespace gazekit;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report_check(bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("%s — %s%s%s\n", ok ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1

void check_chi_square_critical() {
    volatile double warm = chi_square_critical(15, 0.05);
    (void)warm;
    auto t0 = clock_type::now();
    double v = 0.0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) v = chi_square_critical(15, 0.05);
    double per_call_ms = seconds_since(t0) * 1000.0 / reps;
    bool ok = std::fabs(v - 24.996) <= 0.001 && per_call_ms < 1.0;
    std::ostringstream d;
    d << "value " << v << ", " << per_call_ms << " ms per call";
    report_check(ok, "chi-square critical value at dof 15, alpha 0.05 is 24.996 +/- 0.001 "
                     "in under 1 ms",
                 d.str());
}

// ---------------------------------------------------------------- criterion 2

void check_region_scale() {
    bool ok = true;
    std::ostringstream d;
    for (auto [w, h] : {std::pair{640, 480}, {960, 720}, {1920, 1080}, {512, 384}}) {
        CameraModel cam{w, h, 101.55, 73.60, 29.96};
        DogProfile profile{"d", 5.32, deg_to_px_radius(5.32, cam)};
        Fixation f;
        f.x = w / 2.0;
        f.y = h / 2.0;
        auto region = make_region(f, profile, cam);
        double frac = double(rle_area(region.disk)) / (double(w) * h);
        d << w << "x" << h << " -> " << frac * 100.0 << "% ";
        if (frac < 0.008 || frac > 0.016) ok = false;
    }
    report_check(ok, "fixation-region area is 0.8%-1.6% of the frame for a "
                     "101.55x73.60 degree camera at 5.32 degree accuracy, at any resolution",
                 d.str());
}

// ---------------------------------------------------------------- criterion 3

std::vector<uint64_t> brute_counts(const FixationRegion& region,
                                   const FrameSegmentation& frame, int num_classes) {
    std::vector<uint64_t> counts(size_t(num_classes) + 1, 0);
    auto disk = rle_decode(region.disk);
    std::vector<uint8_t> covered(disk.size(), 0);
    for (const auto& m : frame.masks) {
        auto bm = rle_decode(m.mask);
        for (size_t i = 0; i < disk.size(); ++i)
            if (disk[i] && bm[i]) {
                ++counts[size_t(m.class_id)];
                covered[i] = 1;
            }
    }
    for (size_t i = 0; i < disk.size(); ++i)
        if (disk[i] && !covered[i]) ++counts[0];
    return counts;
}

void check_attribution_oracle() {
    auto t0 = clock_type::now();
    Rng rng(2024);
    const int K = 6;
    bool ok = true;
    std::string detail;
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        uint32_t W = uint32_t(rng.uniform_int(16, 256));
        uint32_t H = uint32_t(rng.uniform_int(16, 256));
        FrameSegmentation frame;
        frame.width = W;
        frame.height = H;
        int n_masks = int(rng.uniform_int(0, 12));
        for (int m = 0; m < n_masks; ++m) {
            InstanceMask im;
            im.instance_id = m + 1;
            im.class_id = int(rng.uniform_int(1, K));
            int cx = int(rng.uniform_int(-10, int64_t(W) + 10));
            int cy = int(rng.uniform_int(-10, int64_t(H) + 10));
            int hw = int(rng.uniform_int(1, int64_t(W) / 2 + 2));
            int hh = int(rng.uniform_int(1, int64_t(H) / 2 + 2));
            im.mask = rng.uniform() < 0.5 ? rect_mask(cx, cy, hw, hh, W, H)
                                          : ellipse_mask(cx, cy, hw, hh, W, H);
            im.bbox = bbox_of(im.mask);
            frame.masks.push_back(std::move(im));
        }
        FixationRegion region;
        region.cx = rng.uniform(-5.0, double(W) + 5.0);
        region.cy = rng.uniform(-5.0, double(H) + 5.0);
        region.radius_px = int(rng.uniform_int(0, std::min(W, H) / 3));
        region.disk = rasterize_disk(region.cx, region.cy, region.radius_px, W, H);

        auto fast = attribute_counts(region, frame, K);
        auto slow = brute_counts(region, frame, K);
        if (fast != slow) {
            ok = false;
            detail = "integer counts diverged on case " + std::to_string(iter);
            break;
        }
        auto dist = attribute(region, frame, K);
        uint64_t fg = 0;
        for (int c = 1; c <= K; ++c) fg += slow[size_t(c)];
        if (fg == 0) {
            if (!dist.is_null) {
                ok = false;
                detail = "expected null on case " + std::to_string(iter);
            }
        } else {
            if (dist.is_null) {
                ok = false;
                detail = "unexpected null on case " + std::to_string(iter);
                break;
            }
            for (int c = 0; c <= K; ++c) {
                double expect = c == 0 ? 0.0 : double(slow[size_t(c)]) / double(fg);
                if (std::fabs(dist.probs[size_t(c)] - expect) > 1e-12) {
                    ok = false;
                    detail = "normalized probabilities off on case " + std::to_string(iter);
                    break;
                }
            }
        }
    }
    double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) {
        ok = false;
        detail = "too slow";
    }
    std::ostringstream d;
    d << (detail.empty() ? "1000 cases" : detail) << ", " << elapsed << " s";
    report_check(ok, "attribution matches a per-pixel brute-force oracle exactly on 1000 "
                     "random frames (counts exact, probabilities within 1e-12) in under 60 s",
                 d.str());
}

// ---------------------------------------------------------------- criterion 4

SynthConfig recovery_config() {
    SynthConfig cfg;
    cfg.seed = 99;
    cfg.fixation_count = 5000;
    cfg.camera = CameraModel{960, 720, 101.55, 73.60, 29.96};
    cfg.taxonomy = ClassTaxonomy({"building", "car", "person", "pavement", "sky", "pole"});
    cfg.classes = {
        {0.85, 0.030, 0.006, 0.30},
        {0.60, 0.020, 0.004, 0.25},
        {0.50, 0.015, 0.003, 0.20},
        {0.90, 0.035, 0.006, 0.12},
        {0.70, 0.025, 0.005, 0.08},
        {0.40, 0.012, 0.002, 0.05},
    };
    cfg.null_rate = 0.015;
    cfg.dog_id = "rex";
    cfg.accuracy_deg = 5.32;
    return cfg;
}

void check_planted_recovery(const SynthCorpus& corpus, const SynthConfig& cfg) {
    auto t0 = clock_type::now();
    PipelineConfig pc;
    pc.taxonomy = cfg.taxonomy;
    pc.camera = cfg.camera;
    pc.profiles["rex"] = DogProfile{"rex", cfg.accuracy_deg,
                                    deg_to_px_radius(cfg.accuracy_deg, cfg.camera)};
    Corpus c;
    c.camera = cfg.camera;
    c.taxonomy = cfg.taxonomy;
    c.frames = corpus.frames;
    auto run = run_attribution(pc, c, corpus.gaze, "rex");

    const int K = cfg.taxonomy.num_classes();
    std::vector<double> recovered(size_t(K) + 1, 0.0);
    size_t nulls = 0, usable = 0;
    for (const auto& r : run.records) {
        if (r.error) continue;
        ++usable;
        if (r.distribution.is_null) {
            ++nulls;
            continue;
        }
        for (int cc = 1; cc <= K; ++cc) recovered[size_t(cc)] += r.distribution.probs[size_t(cc)];
    }
    double non_null = double(usable - nulls);
    double l1 = 0.0;
    for (int cc = 1; cc <= K; ++cc)
        l1 += std::fabs(recovered[size_t(cc)] / non_null - corpus.planted_attention[size_t(cc)]);
    double null_rate = double(nulls) / double(usable);
    double elapsed = seconds_since(t0);

    bool ok = run.records.size() == size_t(cfg.fixation_count) && run.summary.errors == 0 &&
              l1 <= 0.02 && std::fabs(null_rate - 0.015) <= 0.003 && elapsed < 120.0;
    std::ostringstream d;
    d << "L1 " << l1 << ", null rate " << null_rate << ", " << run.records.size()
      << " fixations, " << elapsed << " s";
    report_check(ok, "pipeline on a 5000-fixation synthetic corpus recovers the planted "
                     "attention distribution within 2% L1 and the 1.5% null rate within "
                     "0.3pp in under 2 min",
                 d.str());
}

// ---------------------------------------------------------------- criterion 5

void check_seg_eval_corruption(const SynthCorpus& corpus, const SynthConfig& cfg) {
    const int K = cfg.taxonomy.num_classes();
    std::vector<FrameSegmentation> gt(corpus.frames.begin(),
                                      corpus.frames.begin() + 1500);

    CorruptionParams swap;
    swap.seed = 5;
    swap.label_swap_rate = 0.10;
    auto swapped = corrupt_predictions(gt, swap, K);
    auto swap_report = evaluate_corpus(gt, swapped, cfg.taxonomy);
    double total = double(swap_report.confusion.total());
    double off_diag = (total - double(swap_report.confusion.trace())) / total;

    CorruptionParams erode;
    erode.erosion_keep = 0.90;
    auto eroded = corrupt_predictions(gt, erode, K);
    auto erode_report = evaluate_corpus(gt, eroded, cfg.taxonomy);
    bool iou_ok = true;
    double worst_iou = 1.0;
    for (int c = 1; c <= K; ++c) {
        if (!erode_report.mean_iou[size_t(c)].has_value()) {
            iou_ok = false;
            continue;
        }
        double v = *erode_report.mean_iou[size_t(c)];
        worst_iou = std::min(worst_iou, v);
        if (std::fabs(v - 0.9) > 0.02) iou_ok = false;
    }

    // analytic coverage expectation: each mask keeps 90% of its pixels, so
    // each class gap is -0.1 x (mean ground-truth share of that class)
    double frame_area = double(gt[0].width) * gt[0].height;
    std::vector<double> gt_share(size_t(K) + 1, 0.0);
    for (const auto& f : gt)
        for (int c = 1; c <= K; ++c)
            gt_share[size_t(c)] += double(span_area(class_union_spans(f, c))) / frame_area;
    for (auto& s : gt_share) s /= double(gt.size());
    bool gap_ok = true;
    for (int c = 1; c <= K; ++c) {
        double gap = erode_report.coverage.class_gap[size_t(c)];
        if (gap >= 0.0) gap_ok = false;
        if (std::fabs(gap + 0.1 * gt_share[size_t(c)]) > 2e-3) gap_ok = false;
    }
    double cov_ratio =
        erode_report.coverage.mean_pred_coverage / erode_report.coverage.mean_gt_coverage;
    if (std::fabs(cov_ratio - 0.9) > 0.01) gap_ok = false;

    bool ok = std::fabs(off_diag - 0.10) <= 0.01 && iou_ok && gap_ok;
    std::ostringstream d;
    d << "off-diagonal " << off_diag << ", worst class IoU " << worst_iou
      << ", coverage ratio " << cov_ratio;
    report_check(ok, "segmentation evaluation recovers planted corruption: 10% label swaps "
                     "show as 10% +/- 1pp off-diagonal confusion; 90% mask erosion gives "
                     "per-class IoU 0.9 +/- 0.02 and the analytic negative coverage gap",
                 d.str());
}

// ---------------------------------------------------------------- criterion 6

void check_anova() {
    // independent oracle: direct sums over row/column/grand means
    std::vector<std::vector<double>> grid{{0.12, 0.30, 0.45},
                                          {0.20, 0.28, 0.50},
                                          {0.05, 0.33, 0.60}};
    const int R = 3, C = 3;
    double grand = 0.0;
    for (const auto& row : grid)
        for (double v : row) grand += v;
    grand /= double(R * C);
    std::vector<double> row_mean(R, 0.0), col_mean(C, 0.0);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) {
            row_mean[size_t(i)] += grid[size_t(i)][size_t(j)] / C;
            col_mean[size_t(j)] += grid[size_t(i)][size_t(j)] / R;
        }
    double ss_dog = 0.0, ss_class = 0.0, ss_total = 0.0;
    for (int i = 0; i < R; ++i) ss_dog += C * (row_mean[size_t(i)] - grand) * (row_mean[size_t(i)] - grand);
    for (int j = 0; j < C; ++j) ss_class += R * (col_mean[size_t(j)] - grand) * (col_mean[size_t(j)] - grand);
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j)
            ss_total += (grid[size_t(i)][size_t(j)] - grand) * (grid[size_t(i)][size_t(j)] - grand);
    double ss_err = ss_total - ss_dog - ss_class;
    double f_class = (ss_class / (C - 1)) / (ss_err / ((R - 1) * (C - 1)));
    double f_dog = (ss_dog / (R - 1)) / (ss_err / ((R - 1) * (C - 1)));

    auto res = two_way_anova(grid);
    auto rel = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b)); };
    bool ok = rel(res.ss_class, ss_class) && rel(res.ss_dog, ss_dog) &&
              rel(res.ss_error, ss_err) && rel(res.ss_total, ss_total) &&
              rel(res.f_class, f_class) && rel(res.f_dog, f_dog) &&
              std::fabs(res.ss_total - (res.ss_class + res.ss_dog + res.ss_error)) <=
                  1e-12 * res.ss_total;

    // dof shape on an 11 dogs x 15 classes grid
    Rng rng(7);
    std::vector<std::vector<double>> big(11, std::vector<double>(15));
    for (auto& row : big)
        for (double& v : row) v = rng.uniform();
    auto bres = two_way_anova(big);
    ok = ok && bres.dof_class == 14 && bres.dof_dog == 10 && bres.dof_error == 140;

    std::ostringstream d;
    d << "F_class " << res.f_class << " vs oracle " << f_class << "; big-grid dofs ("
      << bres.dof_class << "," << bres.dof_error << ") and (" << bres.dof_dog << ","
      << bres.dof_error << ")";
    report_check(ok, "two-way ANOVA matches the direct sums-of-squares oracle to 1e-9, "
                     "decomposes SS_total exactly, and reports dofs (14,140)/(10,140) on "
                     "an 11x15 grid",
                 d.str());
}

// ---------------------------------------------------------------- criterion 7

void check_firth() {
    bool ok = true;
    std::ostringstream d;
    // intercept-only closed form p = (k + 1/2) / (n + 1)
    for (int k : {0, 1, 5, 12}) {
        const int n = 12;
        Eigen::MatrixXd X = Eigen::MatrixXd::Ones(n, 1);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < k; ++i) y(i) = 1.0;
        auto fit = fit_firth_logistic(X, y);
        double p = 1.0 / (1.0 + std::exp(-fit.coefficients(0)));
        double expect = (k + 0.5) / (n + 1.0);
        if (!fit.converged || std::fabs(p - expect) > 1e-8) {
            ok = false;
            d << "intercept-only failed at k=" << k << " ";
        }
    }
    // complete separation stays finite
    {
        Eigen::MatrixXd X(10, 2);
        Eigen::VectorXd y(10);
        for (int i = 0; i < 10; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = i < 5 ? -1.0 : 1.0;
            y(i) = i < 5 ? 0.0 : 1.0;
        }
        auto fit = fit_firth_logistic(X, y);
        if (!std::isfinite(fit.coefficients(1)) || std::fabs(fit.coefficients(1)) > 10.0 ||
            !std::isfinite(fit.standard_errors(1))) {
            ok = false;
            d << "separable fit not finite ";
        }
    }
    // monotone penalized likelihood trace on a generic fit
    {
        Rng rng(13);
        const int n = 80;
        Eigen::MatrixXd X(n, 3);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            X(i, 1) = rng.normal(0, 1);
            X(i, 2) = rng.normal(0, 1);
            double eta = 0.4 + 0.8 * X(i, 1) - 0.5 * X(i, 2);
            y(i) = rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
        }
        auto fit = fit_firth_logistic(X, y);
        if (!fit.converged) ok = false;
        for (size_t i = 1; i < fit.loglik_trace.size(); ++i)
            if (fit.loglik_trace[i] < fit.loglik_trace[i - 1] - 1e-9) {
                ok = false;
                d << "likelihood decreased at iteration " << i << " ";
            }
    }
    report_check(ok, "Firth logistic regression: intercept-only model hits the "
                     "(k+1/2)/(n+1) closed form to 1e-8, separable data gives finite "
                     "estimates, and the penalized likelihood is monotone over iterations",
                 d.str());
}

// ---------------------------------------------------------------- criterion 8

double naive_spearman(std::vector<double> x, std::vector<double> y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        size_t i = 0;
        while (i < idx.size()) {
            size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = (double(i) + double(j)) / 2.0 + 1.0;
            for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    auto rx = ranks(x), ry = ranks(y);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / double(rx.size());
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / double(ry.size());
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

void check_spearman() {
    Rng rng(31);
    bool ok = true;
    std::string detail = "1000 tied samples";
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        size_t n = size_t(rng.uniform_int(5, 40));
        std::vector<double> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = double(rng.uniform_int(0, 6)); // coarse grid forces ties
            y[i] = double(rng.uniform_int(0, 6));
        }
        bool xc = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
        bool yc = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
        auto res = spearman(x, y);
        if (xc || yc) {
            if (res.defined) {
                ok = false;
                detail = "constant input not flagged undefined";
            }
            continue;
        }
        double oracle = naive_spearman(x, y);
        if (!res.defined || std::fabs(res.rho - oracle) > 1e-12) {
            ok = false;
            detail = "rho diverged from the rank-then-Pearson oracle on case " +
                     std::to_string(iter);
        }
        // exact invariance under strictly monotone transforms
        std::vector<double> tx(x), ty(y);
        for (auto& v : tx) v = std::exp(v);
        for (auto& v : ty) v = v * v * v + 2.0;
        auto tres = spearman(tx, ty);
        if (tres.rho != res.rho) {
            ok = false;
            detail = "monotone-transform invariance broken on case " + std::to_string(iter);
        }
    }
    report_check(ok, "Spearman correlation matches a naive rank-then-Pearson oracle to "
                     "1e-12 on 1000 seeded samples with ties and is exactly invariant "
                     "under monotone transforms",
                 detail);
}

// ---------------------------------------------------------------- criterion 9

void check_auc_judd() {
    Rng rng(47);
    std::vector<float> pool(10000);
    for (auto& v : pool) v = float(rng.uniform());
    std::vector<double> random_scores(10000);
    for (auto& v : random_scores) v = rng.uniform();
    double random_auc = auc_judd(random_scores, pool, 1).auc;

    std::vector<double> strong_scores(50, 0.0);
    for (auto& v : strong_scores) v = rng.uniform(1.5, 2.0); // above every pixel
    double perfect_auc = auc_judd(strong_scores, pool, 1).auc;

    // Mann-Whitney equivalence on shared, well-separated inputs
    std::vector<double> px(300), sc(60);
    for (size_t i = 0; i < px.size(); ++i) px[i] = double((i * 97) % 300) / 300.0;
    for (size_t j = 0; j < sc.size(); ++j) sc[j] = double((j * 41) % 60) / 60.0 + 0.00173;
    double wins = 0.0;
    for (double s : sc)
        for (double p : px)
            if (s > p) wins += 1.0;
    double u = wins / (double(sc.size()) * double(px.size()));
    std::vector<float> pxf(px.begin(), px.end());
    double mw_auc = auc_judd(sc, pxf, 3).auc;

    bool ok = std::fabs(random_auc - 0.5) <= 0.02 && perfect_auc >= 0.99 &&
              std::fabs(mw_auc - u) <= 1e-6;
    std::ostringstream d;
    d << "random " << random_auc << ", perfect " << perfect_auc << ", |auc - U| "
      << std::fabs(mw_auc - u);
    report_check(ok, "AUC-Judd is 0.5 +/- 0.02 for 10k random fixation draws, >= 0.99 for "
                     "a perfect predictor, and equals the normalized Mann-Whitney U to 1e-6",
                 d.str());
}

// --------------------------------------------------------------- criterion 10

void check_rle_and_throughput() {
    Rng rng(61);
    bool ok = true;
    std::string detail;
    for (int iter = 0; iter < 10000 && ok; ++iter) {
        uint32_t w = uint32_t(rng.uniform_int(1, 64));
        uint32_t h = uint32_t(rng.uniform_int(1, 64));
        double density = rng.uniform();
        std::vector<uint8_t> a(size_t(w) * h), b(size_t(w) * h);
        for (auto& v : a) v = rng.uniform() < density ? 1 : 0;
        for (auto& v : b) v = rng.uniform() < density ? 1 : 0;
        auto ra = rle_encode(a, w, h), rb = rle_encode(b, w, h);
        uint64_t pa = 0, pb = 0, pand = 0, por = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            pa += a[i];
            pb += b[i];
            pand += a[i] & b[i];
            por += a[i] | b[i];
        }
        if (rle_decode(ra) != a || rle_area(ra) != pa || rle_area(rb) != pb ||
            rle_intersect_count(ra, rb) != pand) {
            ok = false;
            detail = "area/intersect oracle diverged on case " + std::to_string(iter);
            break;
        }
        FrameSegmentation f;
        f.width = w;
        f.height = h;
        f.masks.push_back({1, 1, ra, bbox_of(ra), 1.0});
        f.masks.push_back({2, 2, rb, bbox_of(rb), 1.0});
        double cov = frame_coverage(f);
        if (std::fabs(cov - double(por) / double(size_t(w) * h)) > 1e-12) {
            ok = false;
            detail = "coverage oracle diverged on case " + std::to_string(iter);
            break;
        }
    }

    // throughput: attribute one fixation against each of 100k frames
    auto t0 = clock_type::now();
    const uint32_t W = 320, H = 240;
    CameraModel cam{int(W), int(H), 101.55, 73.60, 29.96};
    const int K = 6;
    std::vector<FrameSegmentation> frames(100000);
    std::vector<Fixation> fixations(frames.size());
    int next_id = 1;
    for (size_t i = 0; i < frames.size(); ++i) {
        auto& f = frames[i];
        f.frame_index = int(i);
        f.width = W;
        f.height = H;
        for (int m = 0; m < 4; ++m) {
            InstanceMask im;
            im.instance_id = next_id++;
            im.class_id = int(rng.uniform_int(1, K));
            im.mask = rect_mask(int(rng.uniform_int(0, W - 1)), int(rng.uniform_int(0, H - 1)),
                                int(rng.uniform_int(5, 40)), int(rng.uniform_int(5, 30)), W, H);
            im.bbox = bbox_of(im.mask);
            f.masks.push_back(std::move(im));
        }
        auto& fx = fixations[i];
        fx.dog_id = "d";
        fx.first_frame = int(i);
        fx.last_frame = int(i);
        fx.x = rng.uniform(0, double(W));
        fx.y = rng.uniform(0, double(H));
    }
    std::unordered_map<std::string, DogProfile> profiles{
        {"d", DogProfile{"d", 5.32, deg_to_px_radius(5.32, cam)}}};
    BatchSummary summary;
    auto records =
        batch_attribute(fixations, frame_index(frames), profiles, cam, K, false, 0, &summary);
    double elapsed = seconds_since(t0);
    if (records.size() != frames.size() || summary.errors != 0) {
        ok = false;
        detail = "batch attribution failed";
    }
    if (elapsed >= 300.0) {
        ok = false;
        detail = "too slow";
    }
    std::ostringstream d;
    d << (detail.empty() ? "10k mask-algebra cases" : detail) << "; 100k-frame run "
      << elapsed << " s";
    report_check(ok, "RLE intersect/area/coverage equal bitmap oracles exactly on 10k "
                     "seeded cases and a 100k-frame attribution run finishes in under 5 min",
                 d.str());
}

// --------------------------------------------------------------- criterion 11

void check_report_determinism() {
    fs::path base = fs::temp_directory_path() / "gazekit_acceptance_report";
    fs::remove_all(base);
    fs::create_directories(base);

    SynthConfig cfg;
    cfg.seed = 5;
    cfg.fixation_count = 200;
    cfg.camera = CameraModel{640, 480, 101.55, 73.60, 29.96};
    cfg.taxonomy = ClassTaxonomy({"building", "car", "person", "pavement"});
    cfg.classes = {
        {0.8, 0.025, 0.005, 0.45},
        {0.6, 0.020, 0.004, 0.30},
        {0.5, 0.015, 0.003, 0.15},
        {0.9, 0.030, 0.005, 0.10},
    };
    cfg.null_rate = 0.02;
    cfg.dog_id = "rex";
    auto corpus = synth_corpus(cfg);
    Corpus c;
    c.camera = cfg.camera;
    c.taxonomy = cfg.taxonomy;
    c.frames = corpus.frames;
    auto corpus_path = (base / "corpus.json").string();
    auto gaze_path = (base / "gaze.csv").string();
    write_corpus(corpus_path, c);
    write_gaze_csv(gaze_path, corpus.gaze);

    ReportInputs inputs;
    inputs.config.taxonomy = cfg.taxonomy;
    inputs.config.camera = cfg.camera;
    inputs.config.profiles["rex"] =
        DogProfile{"rex", cfg.accuracy_deg, deg_to_px_radius(cfg.accuracy_deg, cfg.camera)};
    inputs.corpus_path = corpus_path;
    inputs.gaze_path = gaze_path;
    inputs.dog_id = "rex";

    inputs.out_dir = (base / "run_a").string();
    run_report(inputs);
    inputs.out_dir = (base / "run_b").string();
    run_report(inputs);

    bool ok = true;
    std::string detail;
    size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "run_a")) {
        auto name = entry.path().filename();
        auto other = base / "run_b" / name;
        if (!fs::exists(other)) {
            ok = false;
            detail = name.string() + " missing from second run";
            break;
        }
        if (read_text_file(entry.path().string()) != read_text_file(other.string())) {
            ok = false;
            detail = name.string() + " differs between runs";
            break;
        }
        ++compared;
    }
    if (compared == 0) {
        ok = false;
        detail = "no output files produced";
    }
    std::ostringstream d;
    d << (detail.empty() ? std::to_string(compared) + " files byte-identical" : detail);
    report_check(ok, "two report runs on identical inputs produce byte-identical outputs",
                 d.str());
}

} // namespace

int main() {
    check_chi_square_critical();
    check_region_scale();
    check_attribution_oracle();
    auto cfg = recovery_config();
    auto corpus = synth_corpus(cfg);
    check_planted_recovery(corpus, cfg);
    check_seg_eval_corruption(corpus, cfg);
    check_anova();
    check_firth();
    check_spearman();
    check_auc_judd();
    check_rle_and_throughput();
    check_report_determinism();
    if (g_failures > 0) std::printf("%d check(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
