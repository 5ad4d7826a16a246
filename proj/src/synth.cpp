#include "gazekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gazekit/rle.hpp"
#include "gazekit/rng.hpp"

namespace gazekit {

void SynthConfig::validate() const {
    camera.validate();
    if (fixation_count <= 0)
        throw std::invalid_argument("synth: fixation_count must be positive");
    if (int(classes.size()) != taxonomy.num_classes())
        throw std::invalid_argument("synth: one ClassPlant per taxonomy class required");
    double att = 0.0;
    for (const auto& c : classes) {
        if (c.availability < 0.0 || c.availability > 1.0)
            throw std::invalid_argument("synth: availability outside [0, 1]");
        if (c.attention < 0.0) throw std::invalid_argument("synth: negative attention");
        if (c.size_mean <= 0.0) throw std::invalid_argument("synth: non-positive size");
        att += c.attention;
    }
    if (std::fabs(att - 1.0) > 1e-9)
        throw std::invalid_argument("synth: attention distribution must sum to 1");
    if (null_rate < 0.0 || null_rate >= 1.0)
        throw std::invalid_argument("synth: null_rate outside [0, 1)");
    if (min_present < 1 || min_present > taxonomy.num_classes())
        throw std::invalid_argument("synth: min_present outside taxonomy");
    if (min_samples < 4 || max_samples < min_samples)
        throw std::invalid_argument("synth: bad sample-count range");
}

RleMask rect_mask(int cx, int cy, int half_w, int half_h, uint32_t width, uint32_t height) {
    std::vector<PixelSpan> spans;
    int y0 = std::max(0, cy - half_h), y1 = std::min(int(height) - 1, cy + half_h);
    int x0 = std::max(0, cx - half_w), x1 = std::min(int(width) - 1, cx + half_w);
    for (int y = y0; y <= y1 && x0 <= x1; ++y)
        spans.push_back({uint32_t(y) * width + uint32_t(x0), uint32_t(y) * width + uint32_t(x1) + 1});
    return mask_from_spans(spans, width, height);
}

RleMask ellipse_mask(int cx, int cy, int semi_x, int semi_y, uint32_t width, uint32_t height) {
    std::vector<PixelSpan> spans;
    for (int y = std::max(0, cy - semi_y); y <= std::min(int(height) - 1, cy + semi_y); ++y) {
        double fy = double(y - cy) / double(semi_y);
        double rem = 1.0 - fy * fy;
        if (rem < 0.0) continue;
        int dx = int(std::floor(double(semi_x) * std::sqrt(rem)));
        int x0 = std::max(0, cx - dx), x1 = std::min(int(width) - 1, cx + dx);
        if (x0 > x1) continue;
        spans.push_back({uint32_t(y) * width + uint32_t(x0), uint32_t(y) * width + uint32_t(x1) + 1});
    }
    return mask_from_spans(spans, width, height);
}

namespace {

/// Largest-remainder quota allocation of n draws over weights.
std::vector<int64_t> quota_alloc(const std::vector<double>& weights, int64_t n) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<int64_t> out(weights.size(), 0);
    if (total <= 0.0 || n == 0) return out;
    std::vector<double> rem(weights.size());
    int64_t assigned = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        double exact = double(n) * weights[i] / total;
        out[i] = int64_t(std::floor(exact));
        rem[i] = exact - double(out[i]);
        assigned += out[i];
    }
    std::vector<size_t> idx(weights.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (rem[a] != rem[b]) return rem[a] > rem[b];
        return a < b;
    });
    for (int64_t k = 0; k < n - assigned; ++k) ++out[idx[size_t(k) % idx.size()]];
    return out;
}

} // namespace

SynthCorpus synth_corpus(const SynthConfig& cfg) {
    cfg.validate();
    const int K = cfg.taxonomy.num_classes();
    const uint32_t W = uint32_t(cfg.camera.width_px), H = uint32_t(cfg.camera.height_px);
    const int radius = deg_to_px_radius(cfg.accuracy_deg, cfg.camera);

    // grid layout: one cell per class plus at least one spare for nulls
    const int side = int(std::ceil(std::sqrt(double(K + 1))));
    const int cell_w = int(W) / side, cell_h = int(H) / side;
    if (2 * (radius + 3) >= std::min(cell_w, cell_h))
        throw std::invalid_argument(
            "synth: fixation radius does not fit the scene grid; use a larger frame or "
            "better accuracy");

    Rng rng(cfg.seed);

    // plant target classes by quota (0 = null fixation)
    const int64_t n = cfg.fixation_count;
    const int64_t n_null = int64_t(std::llround(cfg.null_rate * double(n)));
    std::vector<double> attention(size_t(K), 0.0);
    for (int c = 0; c < K; ++c) attention[size_t(c)] = cfg.classes[size_t(c)].attention;
    auto per_class = quota_alloc(attention, n - n_null);
    std::vector<int> targets;
    targets.reserve(size_t(n));
    targets.insert(targets.end(), size_t(n_null), 0);
    for (int c = 0; c < K; ++c)
        targets.insert(targets.end(), size_t(per_class[size_t(c)]), c + 1);
    rng.shuffle(targets);

    SynthCorpus out;
    out.fixation_count = int(n);
    out.target_count.assign(size_t(K) + 1, 0);
    out.in_view_frames.assign(size_t(K) + 1, 0);
    out.planted_attention.assign(size_t(K) + 1, 0.0);
    for (int c = 0; c < K; ++c) out.planted_attention[size_t(c) + 1] = attention[size_t(c)];
    out.planted_null_rate = cfg.null_rate;

    const double dt_ms = 1000.0 / cfg.camera.fps;
    double cursor_ms = 0.0;
    int next_instance = 1;
    double obj_sum = 0.0, obj_sq = 0.0;

    for (int fi = 0; fi < n; ++fi) {
        const int target = targets[size_t(fi)];
        ++out.target_count[size_t(target)];

        // availability draws, target forced present, topped up to min_present
        std::vector<int> present;
        std::vector<bool> in(size_t(K) + 1, false);
        for (int c = 1; c <= K; ++c)
            if (rng.uniform() < cfg.classes[size_t(c) - 1].availability) {
                present.push_back(c);
                in[size_t(c)] = true;
            }
        if (target != 0 && !in[size_t(target)]) {
            present.push_back(target);
            in[size_t(target)] = true;
        }
        while (int(present.size()) < cfg.min_present) {
            int c = int(rng.uniform_int(1, K));
            if (!in[size_t(c)]) {
                present.push_back(c);
                in[size_t(c)] = true;
            }
        }
        std::sort(present.begin(), present.end());

        // distinct cells per instance; one spare cell stays empty for nulls
        std::vector<int> cells(size_t(side) * side);
        std::iota(cells.begin(), cells.end(), 0);
        rng.shuffle(cells);

        FrameSegmentation frame;
        frame.width = W;
        frame.height = H;
        double target_x = 0.0, target_y = 0.0;
        for (size_t k = 0; k < present.size(); ++k) {
            int c = present[k];
            int cell = cells[k];
            int ccx = (cell % side) * cell_w + cell_w / 2;
            int ccy = (cell / side) * cell_h + cell_h / 2;
            const auto& plant = cfg.classes[size_t(c) - 1];
            double f = std::max(1e-4, rng.normal(plant.size_mean, plant.size_sd));
            double aspect = rng.uniform(0.7, 1.4);
            int hw = int(std::lround(0.5 * std::sqrt(f * double(W) * double(H) * aspect)));
            int hh = int(std::lround(0.5 * std::sqrt(f * double(W) * double(H) / aspect)));
            if (c == target) {
                hw = std::max(hw, radius + 3);
                hh = std::max(hh, radius + 3);
            }
            hw = std::clamp(hw, 2, cell_w / 2 - 1);
            hh = std::clamp(hh, 2, cell_h / 2 - 1);
            InstanceMask m;
            m.instance_id = next_instance++;
            m.class_id = c;
            m.confidence = 1.0;
            m.mask = rng.uniform() < 0.5 ? rect_mask(ccx, ccy, hw, hh, W, H)
                                         : ellipse_mask(ccx, ccy, hw, hh, W, H);
            m.bbox = bbox_of(m.mask);
            frame.masks.push_back(std::move(m));
            ++out.in_view_frames[size_t(c)];
            if (c == target) {
                target_x = ccx;
                target_y = ccy;
            }
        }
        if (target == 0) {
            int cell = cells[present.size()]; // guaranteed free
            target_x = (cell % side) * cell_w + cell_w / 2;
            target_y = (cell / side) * cell_h + cell_h / 2;
        }
        obj_sum += double(frame.masks.size());
        obj_sq += double(frame.masks.size()) * double(frame.masks.size());

        // gaze: one stable sample burst per fixation, saccade break after
        int n_samples = int(rng.uniform_int(cfg.min_samples, cfg.max_samples));
        double start_ms = cursor_ms;
        Fixation fx;
        fx.dog_id = cfg.dog_id;
        fx.start_ms = start_ms;
        fx.end_ms = start_ms + double(n_samples - 1) * dt_ms;
        double sx = 0.0, sy = 0.0;
        std::vector<GazeSample> burst;
        for (int s = 0; s < n_samples; ++s) {
            GazeSample g;
            g.t_ms = start_ms + double(s) * dt_ms;
            g.x_px = target_x + rng.uniform(-0.4, 0.4);
            g.y_px = target_y + rng.uniform(-0.4, 0.4);
            g.valid = true;
            sx += g.x_px;
            sy += g.y_px;
            burst.push_back(g);
        }
        fx.x = sx / double(n_samples);
        fx.y = sy / double(n_samples);
        auto span = align_to_frames(fx, cfg.camera.fps);
        fx.first_frame = span.first;
        fx.last_frame = span.second;
        frame.frame_index = fx.first_frame;
        frame.timestamp_ms = double(fx.first_frame) * dt_ms;

        out.gaze.insert(out.gaze.end(), burst.begin(), burst.end());
        out.frames.push_back(std::move(frame));
        out.planted_fixations.push_back(fx);

        // inter-fixation break: invalid samples spanning >= 4 frames
        int gap = int(rng.uniform_int(4, 8));
        for (int s = 1; s <= gap; ++s) {
            GazeSample g;
            g.t_ms = fx.end_ms + double(s) * dt_ms;
            g.x_px = 0.0;
            g.y_px = 0.0;
            g.valid = false;
            out.gaze.push_back(g);
        }
        cursor_ms = fx.end_ms + double(gap + 1) * dt_ms;
    }

    out.mean_objects_per_frame = obj_sum / double(n);
    double var = obj_sq / double(n) - out.mean_objects_per_frame * out.mean_objects_per_frame;
    out.sd_objects_per_frame = var > 0.0 ? std::sqrt(var) : 0.0;
    return out;
}

nlohmann::json SynthCorpus::manifest() const {
    nlohmann::json j;
    j["fixation_count"] = fixation_count;
    j["null_count"] = target_count.empty() ? 0 : target_count[0];
    j["planted_null_rate"] = planted_null_rate;
    j["mean_objects_per_frame"] = mean_objects_per_frame;
    j["sd_objects_per_frame"] = sd_objects_per_frame;
    j["target_count"] = target_count;
    j["in_view_frames"] = in_view_frames;
    j["planted_attention"] = planted_attention;
    return j;
}

namespace {

RleMask truncate_mask(const RleMask& mask, double keep) {
    uint64_t area = rle_area(mask);
    uint64_t target = uint64_t(std::llround(keep * double(area)));
    std::vector<PixelSpan> spans;
    uint64_t acc = 0;
    for (const auto& s : set_spans(mask)) {
        uint64_t len = s.end - s.begin;
        if (acc + len <= target) {
            spans.push_back(s);
            acc += len;
        } else {
            uint64_t take = target - acc;
            if (take > 0) spans.push_back({s.begin, s.begin + uint32_t(take)});
            break;
        }
    }
    return mask_from_spans(spans, mask.width, mask.height);
}

} // namespace

std::vector<FrameSegmentation> corrupt_predictions(const std::vector<FrameSegmentation>& gt,
                                                   const CorruptionParams& params,
                                                   int num_classes) {
    Rng rng(params.seed);
    std::vector<FrameSegmentation> pred = gt;

    // global mask index for quota sampling
    std::vector<std::pair<size_t, size_t>> all; // (frame, mask)
    for (size_t f = 0; f < pred.size(); ++f)
        for (size_t m = 0; m < pred[f].masks.size(); ++m) all.push_back({f, m});
    const int64_t total = int64_t(all.size());

    auto pick = [&](double rate) {
        std::vector<std::pair<size_t, size_t>> chosen = all;
        rng.shuffle(chosen);
        chosen.resize(size_t(std::llround(rate * double(total))));
        return chosen;
    };

    if (params.label_swap_rate > 0.0) {
        for (const auto& [f, m] : pick(params.label_swap_rate)) {
            int old_class = pred[f].masks[m].class_id;
            int fresh = old_class;
            while (fresh == old_class) fresh = int(rng.uniform_int(1, num_classes));
            pred[f].masks[m].class_id = fresh;
        }
    }
    if (params.erosion_keep < 1.0) {
        for (auto& frame : pred)
            for (auto& m : frame.masks) {
                m.mask = truncate_mask(m.mask, params.erosion_keep);
                m.bbox = bbox_of(m.mask);
            }
    }
    if (params.spurious_rate > 0.0) {
        int next_id = 1;
        for (const auto& frame : pred)
            for (const auto& m : frame.masks) next_id = std::max(next_id, m.instance_id + 1);
        for (const auto& [f, m] : pick(params.spurious_rate)) {
            InstanceMask dup = pred[f].masks[m];
            dup.instance_id = next_id++;
            pred[f].masks.push_back(std::move(dup));
        }
    }
    if (params.drop_rate > 0.0) {
        auto drops = pick(params.drop_rate);
        std::sort(drops.begin(), drops.end(), std::greater<>());
        for (const auto& [f, m] : drops)
            pred[f].masks.erase(pred[f].masks.begin() + std::ptrdiff_t(m));
    }
    return pred;
}

} // namespace gazekit
