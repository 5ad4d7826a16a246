#include "gazekit/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gazekit/numeric.hpp"

namespace gazekit {

FixationRegion make_region(const Fixation& f, const DogProfile& profile,
                           const CameraModel& camera) {
    FixationRegion r;
    r.cx = f.x;
    r.cy = f.y;
    r.radius_px = profile.radius_px;
    r.disk = rasterize_disk(f.x, f.y, profile.radius_px, uint32_t(camera.width_px),
                            uint32_t(camera.height_px));
    return r;
}

std::vector<uint64_t> attribute_counts(const FixationRegion& region,
                                       const FrameSegmentation& frame, int num_classes) {
    if (region.disk.width != frame.width || region.disk.height != frame.height)
        throw std::invalid_argument("attribute: region/frame dimension mismatch");
    std::vector<uint64_t> counts(size_t(num_classes) + 1, 0);
    const auto disk_spans = set_spans(region.disk);
    std::vector<std::vector<PixelSpan>> covered;
    covered.reserve(frame.masks.size());
    for (const auto& m : frame.masks) {
        if (m.class_id < 1 || m.class_id > num_classes)
            throw std::invalid_argument("attribute: mask class id outside taxonomy");
        auto inter = intersect_spans(set_spans(m.mask), disk_spans);
        counts[size_t(m.class_id)] += span_area(inter);
        if (!inter.empty()) covered.push_back(std::move(inter));
    }
    uint64_t disk_area = span_area(disk_spans);
    counts[0] = disk_area - union_area(covered);
    return counts;
}

std::vector<double> region_occupancy(const FixationRegion& region,
                                     const FrameSegmentation& frame, int num_classes) {
    const auto disk_spans = set_spans(region.disk);
    const double disk_area = double(span_area(disk_spans));
    std::vector<double> occ(size_t(num_classes) + 1, 0.0);
    if (disk_area == 0.0) return occ;
    for (int c = 1; c <= num_classes; ++c) {
        auto cls = class_union_spans(frame, c);
        if (cls.empty()) continue;
        occ[size_t(c)] = double(span_area(intersect_spans(cls, disk_spans))) / disk_area;
    }
    return occ;
}

ClassDistribution attribute(const FixationRegion& region, const FrameSegmentation& frame,
                            int num_classes, bool include_background) {
    auto counts = attribute_counts(region, frame, num_classes);
    uint64_t total = 0;
    for (size_t c = include_background ? 0 : 1; c < counts.size(); ++c) total += counts[c];
    ClassDistribution d;
    d.probs.assign(counts.size(), 0.0);
    // a region touching only background pixels is null unless background
    // participates in the normalization
    uint64_t mask_total = 0;
    for (size_t c = 1; c < counts.size(); ++c) mask_total += counts[c];
    if (mask_total == 0) return d;
    d.is_null = false;
    for (size_t c = include_background ? 0 : 1; c < counts.size(); ++c)
        d.probs[c] = double(counts[c]) / double(total);
    return d;
}

double chi_square_distance(const std::vector<double>& p, const std::vector<double>& q,
                           ChiMode mode, double eps) {
    if (p.size() != q.size())
        throw std::invalid_argument("chi_square_distance: length mismatch");
    double dist = 0.0;
    if (mode == ChiMode::pearson) {
        for (size_t i = 0; i < p.size(); ++i) {
            double d = p[i] - q[i];
            if (q[i] > 0.0)
                dist += d * d / q[i];
            else if (p[i] > 0.0)
                dist += p[i] * p[i] / eps;
        }
    } else {
        for (size_t i = 0; i < p.size(); ++i) {
            double s = p[i] + q[i];
            if (s > 0.0) {
                double d = p[i] - q[i];
                dist += d * d / s;
            }
        }
    }
    return dist;
}

double chi_square_distance(const ClassDistribution& p, const ClassDistribution& q,
                           ChiMode mode, double eps) {
    if (p.is_null || q.is_null)
        throw std::invalid_argument("chi_square_distance: null distribution");
    return chi_square_distance(p.probs, q.probs, mode, eps);
}

GofResult goodness_of_fit(double distance, int dof, double alpha) {
    if (distance < 0.0)
        throw std::invalid_argument("goodness_of_fit: negative distance");
    GofResult r;
    r.critical = chi_square_critical(dof, alpha);
    r.margin = r.critical - distance;
    r.accept = distance < r.critical; // strict: the boundary rejects
    return r;
}

std::vector<AttributionRecord> batch_attribute(
    const std::vector<Fixation>& fixations,
    const std::unordered_map<int, const FrameSegmentation*>& frames,
    const std::unordered_map<std::string, DogProfile>& profiles, const CameraModel& camera,
    int num_classes, bool include_background, int threads, BatchSummary* summary) {
    std::vector<AttributionRecord> records(fixations.size());

    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            const Fixation& f = fixations[i];
            AttributionRecord& rec = records[i];
            rec.dog_id = f.dog_id;
            rec.fixation = f;
            rec.frame_index = f.first_frame;
            auto pit = profiles.find(f.dog_id);
            if (pit == profiles.end()) {
                rec.error = true;
                rec.error_message = "no profile for dog '" + f.dog_id + "'";
                continue;
            }
            auto fit = frames.find(f.first_frame);
            if (fit == frames.end() || fit->second == nullptr) {
                rec.error = true;
                rec.error_message = "missing frame " + std::to_string(f.first_frame);
                continue;
            }
            try {
                FixationRegion region = make_region(f, pit->second, camera);
                rec.distribution =
                    attribute(region, *fit->second, num_classes, include_background);
                rec.occupancy = region_occupancy(region, *fit->second, num_classes);
            } catch (const std::exception& e) {
                rec.error = true;
                rec.error_message = e.what();
            }
        }
    };

    size_t n = fixations.size();
    unsigned nthreads = threads > 0 ? unsigned(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    if (nthreads <= 1 || n < 2 * nthreads) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (n + nthreads - 1) / nthreads;
        for (unsigned t = 0; t < nthreads; ++t) {
            size_t b = t * chunk, e = std::min(n, b + chunk);
            if (b >= e) break;
            pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    if (summary) {
        *summary = BatchSummary{};
        summary->total = n;
        for (const auto& r : records) {
            if (r.error)
                ++summary->errors;
            else if (r.distribution.is_null)
                ++summary->nulls;
            else
                ++summary->retained;
        }
    }
    return records;
}

} // namespace gazekit
