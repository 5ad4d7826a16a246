#include "gazekit/saliency.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include "gazekit/rng.hpp"

namespace gazekit {

namespace {

struct GridF {
    int w = 0, h = 0;
    std::vector<float> v;
    GridF() = default;
    GridF(int w_, int h_) : w(w_), h(h_), v(size_t(w_) * h_, 0.0f) {}
    float at(int x, int y) const {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return v[size_t(y) * w + x];
    }
};

GridF gaussian_blur(const GridF& in) {
    static const float k[5] = {1 / 16.f, 4 / 16.f, 6 / 16.f, 4 / 16.f, 1 / 16.f};
    GridF tmp(in.w, in.h), out(in.w, in.h);
    for (int y = 0; y < in.h; ++y)
        for (int x = 0; x < in.w; ++x) {
            float s = 0;
            for (int i = -2; i <= 2; ++i) s += k[i + 2] * in.at(x + i, y);
            tmp.v[size_t(y) * in.w + x] = s;
        }
    for (int y = 0; y < in.h; ++y)
        for (int x = 0; x < in.w; ++x) {
            float s = 0;
            for (int i = -2; i <= 2; ++i) s += k[i + 2] * tmp.at(x, y + i);
            out.v[size_t(y) * in.w + x] = s;
        }
    return out;
}

GridF downsample2(const GridF& in) {
    GridF out(std::max(1, in.w / 2), std::max(1, in.h / 2));
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x)
            out.v[size_t(y) * out.w + x] = in.at(2 * x, 2 * y);
    return out;
}

GridF resize_bilinear(const GridF& in, int w, int h) {
    GridF out(w, h);
    for (int y = 0; y < h; ++y) {
        double sy = h > 1 ? double(y) * (in.h - 1) / (h - 1) : 0.0;
        int y0 = int(sy);
        double fy = sy - y0;
        for (int x = 0; x < w; ++x) {
            double sx = w > 1 ? double(x) * (in.w - 1) / (w - 1) : 0.0;
            int x0 = int(sx);
            double fx = sx - x0;
            double v = (1 - fx) * (1 - fy) * in.at(x0, y0) + fx * (1 - fy) * in.at(x0 + 1, y0) +
                       (1 - fx) * fy * in.at(x0, y0 + 1) + fx * fy * in.at(x0 + 1, y0 + 1);
            out.v[size_t(y) * w + x] = float(v);
        }
    }
    return out;
}

std::vector<GridF> pyramid(const GridF& base, int levels) {
    std::vector<GridF> p;
    p.push_back(base);
    for (int l = 1; l < levels; ++l) p.push_back(downsample2(gaussian_blur(p.back())));
    return p;
}

// directional derivative magnitudes at 0, 45, 90, 135 degrees
std::array<GridF, 4> orientation_responses(const GridF& in) {
    GridF gx(in.w, in.h), gy(in.w, in.h);
    for (int y = 0; y < in.h; ++y)
        for (int x = 0; x < in.w; ++x) {
            gx.v[size_t(y) * in.w + x] = 0.5f * (in.at(x + 1, y) - in.at(x - 1, y));
            gy.v[size_t(y) * in.w + x] = 0.5f * (in.at(x, y + 1) - in.at(x, y - 1));
        }
    static const double c = 0.7071067811865476;
    std::array<GridF, 4> out = {GridF(in.w, in.h), GridF(in.w, in.h), GridF(in.w, in.h),
                                GridF(in.w, in.h)};
    for (size_t i = 0; i < in.v.size(); ++i) {
        float dx = gx.v[i], dy = gy.v[i];
        out[0].v[i] = std::fabs(dx);
        out[1].v[i] = float(std::fabs(c * dx + c * dy));
        out[2].v[i] = std::fabs(dy);
        out[3].v[i] = float(std::fabs(c * dx - c * dy));
    }
    return out;
}

void max_normalize(GridF& g) {
    float mx = 0;
    for (float v : g.v) mx = std::max(mx, v);
    if (mx > 0)
        for (float& v : g.v) v /= mx;
}

// sum of center-surround contrasts of one feature pyramid, at full size
GridF conspicuity(const std::vector<GridF>& pyr, int full_w, int full_h, int surround_offset) {
    GridF acc(full_w, full_h);
    for (size_t c = 0; c + surround_offset < pyr.size(); ++c) {
        const GridF& center = pyr[c];
        GridF surround = resize_bilinear(pyr[c + surround_offset], center.w, center.h);
        GridF cs(center.w, center.h);
        for (size_t i = 0; i < cs.v.size(); ++i)
            cs.v[i] = std::fabs(center.v[i] - surround.v[i]);
        max_normalize(cs);
        GridF up = resize_bilinear(cs, full_w, full_h);
        for (size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += up.v[i];
    }
    max_normalize(acc);
    return acc;
}

} // namespace

SaliencyMap saliency_map(const ImageRGB& image, SaliencyMode mode) {
    if (image.width <= 0 || image.height <= 0)
        throw std::invalid_argument("saliency_map: empty image");
    const size_t n = size_t(image.width) * image.height;
    if (image.r.size() != n ||
        (mode == SaliencyMode::color && (image.g.size() != n || image.b.size() != n)))
        throw std::invalid_argument("saliency_map: channel size mismatch");

    constexpr int kLevels = 5;
    constexpr int kSurround = 2;
    const int w = image.width, h = image.height;

    GridF intensity(w, h);
    const bool color = mode == SaliencyMode::color;
    const bool has_rgb = image.g.size() == n && image.b.size() == n;
    for (size_t i = 0; i < n; ++i)
        intensity.v[i] = has_rgb ? (image.r[i] + image.g[i] + image.b[i]) / 3.0f : image.r[i];

    auto int_pyr = pyramid(intensity, kLevels);
    std::vector<GridF> channels;
    channels.push_back(conspicuity(int_pyr, w, h, kSurround));

    if (color) {
        GridF rg(w, h), by(w, h);
        for (size_t i = 0; i < n; ++i) {
            float r = image.r[i], g = image.g[i], b = image.b[i];
            rg.v[i] = (r - g);
            by.v[i] = b - 0.5f * (r + g);
        }
        channels.push_back(conspicuity(pyramid(rg, kLevels), w, h, kSurround));
        channels.push_back(conspicuity(pyramid(by, kLevels), w, h, kSurround));
    }

    // orientation conspicuity: responses computed per pyramid level
    {
        std::array<std::vector<GridF>, 4> orient_pyrs;
        for (const auto& level : int_pyr) {
            auto resp = orientation_responses(level);
            for (int o = 0; o < 4; ++o) orient_pyrs[size_t(o)].push_back(resp[size_t(o)]);
        }
        GridF orient_acc(w, h);
        for (int o = 0; o < 4; ++o) {
            GridF c = conspicuity(orient_pyrs[size_t(o)], w, h, kSurround);
            for (size_t i = 0; i < orient_acc.v.size(); ++i) orient_acc.v[i] += c.v[i];
        }
        max_normalize(orient_acc);
        channels.push_back(orient_acc);
    }

    SaliencyMap out;
    out.width = w;
    out.height = h;
    out.values.assign(n, 0.0f);
    for (const auto& ch : channels)
        for (size_t i = 0; i < n; ++i) out.values[i] += ch.v[i];

    float mn = out.values[0], mx = out.values[0];
    for (float v : out.values) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mx - mn <= 0.0f) {
        std::fill(out.values.begin(), out.values.end(), 0.0f);
        out.degenerate = true;
    } else {
        for (float& v : out.values) v = (v - mn) / (mx - mn);
    }
    return out;
}

double fixation_score(const SaliencyMap& map, const FixationRegion& region) {
    if (region.disk.width != uint32_t(map.width) || region.disk.height != uint32_t(map.height))
        throw std::invalid_argument("fixation_score: dimension mismatch");
    double sum = 0.0;
    uint64_t n = 0;
    for (const auto& s : set_spans(region.disk)) {
        for (uint32_t p = s.begin; p < s.end; ++p) sum += map.values[p];
        n += s.end - s.begin;
    }
    if (n == 0) throw std::invalid_argument("fixation_score: empty region");
    return sum / double(n);
}

namespace {

RocCurve roc_from_counts(const std::vector<double>& sorted_desc_scores,
                         const std::vector<double>& fpr_at_threshold) {
    const size_t n = sorted_desc_scores.size();
    RocCurve curve;
    curve.points.reserve(n + 2);
    curve.points.push_back({sorted_desc_scores.empty() ? 0.0 : sorted_desc_scores.front(),
                            0.0, 0.0});
    for (size_t k = 0; k < n; ++k)
        curve.points.push_back(
            {sorted_desc_scores[k], fpr_at_threshold[k], double(k + 1) / double(n)});
    curve.points.push_back({sorted_desc_scores.empty() ? 0.0 : sorted_desc_scores.back(),
                            1.0, 1.0});
    // area under the exact step ROC (tpr constant between thresholds); this
    // is what makes the AUC equal the normalized Mann-Whitney U
    double auc = 0.0;
    for (size_t i = 0; i + 1 < curve.points.size(); ++i)
        auc += (curve.points[i + 1].fpr - curve.points[i].fpr) * curve.points[i].tpr;
    curve.auc = auc;
    return curve;
}

} // namespace

RocCurve auc_judd(const std::vector<double>& scores, const std::vector<float>& map_values,
                  uint64_t seed, double jitter) {
    if (scores.empty()) throw std::invalid_argument("auc_judd: no fixation scores");
    if (map_values.empty()) throw std::invalid_argument("auc_judd: empty map");
    Rng rng(seed);
    std::vector<double> pixels(map_values.begin(), map_values.end());
    for (auto& v : pixels) v += rng.uniform(0.0, jitter);
    std::vector<double> jscores(scores);
    for (auto& v : jscores) v += rng.uniform(0.0, jitter);

    std::sort(pixels.begin(), pixels.end());
    std::sort(jscores.begin(), jscores.end(), std::greater<>());
    const double m = double(pixels.size());
    std::vector<double> fpr(jscores.size());
    for (size_t k = 0; k < jscores.size(); ++k) {
        auto it = std::lower_bound(pixels.begin(), pixels.end(), jscores[k]);
        fpr[k] = double(pixels.end() - it) / m; // fraction of pixels >= threshold
    }
    return roc_from_counts(jscores, fpr);
}

RocCurve auc_judd_per_frame(const std::vector<double>& scores,
                            const std::vector<const SaliencyMap*>& maps, uint64_t seed,
                            double jitter) {
    if (scores.empty()) throw std::invalid_argument("auc_judd_per_frame: no fixation scores");
    if (maps.size() != scores.size())
        throw std::invalid_argument("auc_judd_per_frame: one map per score required");
    Rng rng(seed);
    std::map<const SaliencyMap*, std::vector<double>> pools;
    for (const SaliencyMap* mp : maps) {
        if (mp == nullptr) throw std::invalid_argument("auc_judd_per_frame: null map");
        if (!pools.count(mp)) {
            std::vector<double> p(mp->values.begin(), mp->values.end());
            for (auto& v : p) v += rng.uniform(0.0, jitter);
            std::sort(p.begin(), p.end());
            pools.emplace(mp, std::move(p));
        }
    }
    std::vector<double> jscores(scores);
    for (auto& v : jscores) v += rng.uniform(0.0, jitter);
    std::vector<size_t> order(jscores.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return jscores[a] > jscores[b]; });

    std::vector<double> sorted_scores(jscores.size()), fpr(jscores.size(), 0.0);
    for (size_t k = 0; k < order.size(); ++k) {
        double t = jscores[order[k]];
        sorted_scores[k] = t;
        double acc = 0.0;
        for (const SaliencyMap* mp : maps) {
            const auto& pool = pools.at(mp);
            auto it = std::lower_bound(pool.begin(), pool.end(), t);
            acc += double(pool.end() - it) / double(pool.size());
        }
        fpr[k] = acc / double(maps.size());
    }
    return roc_from_counts(sorted_scores, fpr);
}

namespace {

int next_pnm_int(std::istream& in) {
    // skips whitespace and '#' comments
    while (true) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v = -1;
    in >> v;
    if (!in) throw std::runtime_error("pnm: malformed header");
    return v;
}

} // namespace

SaliencyMap load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: unsupported format");
    int w = next_pnm_int(in), h = next_pnm_int(in), maxval = next_pnm_int(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error("pgm: bad dimensions");
    SaliencyMap map;
    map.width = w;
    map.height = h;
    map.values.resize(size_t(w) * h);
    if (magic == "P2") {
        for (auto& v : map.values) v = float(next_pnm_int(in)) / float(maxval);
    } else {
        in.get(); // single whitespace after maxval
        int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(map.values.size() * size_t(bytes));
        in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
        if (!in) throw std::runtime_error("pgm: truncated data");
        for (size_t i = 0; i < map.values.size(); ++i) {
            unsigned v = bytes == 2 ? (unsigned(buf[2 * i]) << 8) | buf[2 * i + 1] : buf[i];
            map.values[i] = float(v) / float(maxval);
        }
    }
    return map;
}

ImageRGB load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    if (magic != "P3" && magic != "P6") throw std::runtime_error("ppm: unsupported format");
    int w = next_pnm_int(in), h = next_pnm_int(in), maxval = next_pnm_int(in);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw std::runtime_error("ppm: bad dimensions");
    ImageRGB img;
    img.width = w;
    img.height = h;
    size_t n = size_t(w) * h;
    img.r.resize(n);
    img.g.resize(n);
    img.b.resize(n);
    if (magic == "P3") {
        for (size_t i = 0; i < n; ++i) {
            img.r[i] = float(next_pnm_int(in)) / float(maxval);
            img.g[i] = float(next_pnm_int(in)) / float(maxval);
            img.b[i] = float(next_pnm_int(in)) / float(maxval);
        }
    } else {
        in.get();
        std::vector<unsigned char> buf(n * 3);
        in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
        if (!in) throw std::runtime_error("ppm: truncated data");
        for (size_t i = 0; i < n; ++i) {
            img.r[i] = float(buf[3 * i]) / float(maxval);
            img.g[i] = float(buf[3 * i + 1]) / float(maxval);
            img.b[i] = float(buf[3 * i + 2]) / float(maxval);
        }
    }
    return img;
}

} // namespace gazekit
