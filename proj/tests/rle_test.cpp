#include <doctest.h>

#include <cstdint>
#include <vector>

#include "gazekit/frame.hpp"
#include "gazekit/rle.hpp"
#include "gazekit/rng.hpp"

using namespace gazekit;

namespace {

std::vector<uint8_t> random_bitmap(Rng& rng, uint32_t w, uint32_t h, double density) {
    std::vector<uint8_t> b(size_t(w) * h, 0);
    for (auto& v : b) v = rng.uniform() < density ? 1 : 0;
    return b;
}

uint64_t popcount(const std::vector<uint8_t>& b) {
    uint64_t n = 0;
    for (uint8_t v : b) n += v;
    return n;
}

uint64_t and_popcount(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
    uint64_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) n += a[i] && b[i];
    return n;
}

} // namespace

TEST_CASE("rle encode trivial masks") {
    RleMask empty = rle_encode({0, 0, 0, 0}, 2, 2);
    CHECK(empty.runs == std::vector<uint32_t>{4});
    CHECK(rle_area(empty) == 0);

    RleMask full = rle_encode({1, 1, 1, 1}, 2, 2);
    CHECK(full.runs == std::vector<uint32_t>{0, 4});
    CHECK(rle_area(full) == 4);
}

TEST_CASE("rle round-trip on seeded random grids") {
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        auto bitmap = random_bitmap(rng, 16, 16, rng.uniform());
        RleMask m = rle_encode(bitmap, 16, 16);
        m.validate();
        CHECK(rle_decode(m) == bitmap);
        CHECK(rle_area(m) == popcount(bitmap));
    }
}

TEST_CASE("rle intersect against bitmap oracle") {
    SUBCASE("disjoint halves of a 4x4 frame") {
        std::vector<uint8_t> left(16, 0), right(16, 0);
        for (uint32_t y = 0; y < 4; ++y)
            for (uint32_t x = 0; x < 4; ++x)
                (x < 2 ? left : right)[y * 4 + x] = 1;
        CHECK(rle_intersect_count(rle_encode(left, 4, 4), rle_encode(right, 4, 4)) == 0);
    }
    SUBCASE("self intersection equals area") {
        std::vector<uint8_t> b{1, 0, 1, 1, 0, 0, 1, 0, 1};
        RleMask m = rle_encode(b, 3, 3);
        CHECK(rle_intersect_count(m, m) == rle_area(m));
    }
    SUBCASE("seeded random pairs") {
        Rng rng(202);
        for (int i = 0; i < 1000; ++i) {
            auto a = random_bitmap(rng, 12, 10, 0.4);
            auto b = random_bitmap(rng, 12, 10, 0.6);
            RleMask ma = rle_encode(a, 12, 10), mb = rle_encode(b, 12, 10);
            uint64_t want = and_popcount(a, b);
            CHECK(rle_intersect_count(ma, mb) == want);
            CHECK(rle_intersect_count(mb, ma) == want);
        }
    }
}

TEST_CASE("disk rasterization") {
    SUBCASE("radius 0 in frame has area 1") {
        CHECK(rle_area(rasterize_disk(5, 5, 0, 10, 10)) == 1);
    }
    SUBCASE("center far outside frame has area 0") {
        CHECK(rle_area(rasterize_disk(-100, -100, 3, 10, 10)) == 0);
    }
    SUBCASE("radius 20 in 200x200 close to analytic area, exact vs oracle") {
        RleMask disk = rasterize_disk(100, 100, 20, 200, 200);
        double analytic = 3.14159265358979 * 20.0 * 20.0;
        CHECK(double(rle_area(disk)) == doctest::Approx(analytic).epsilon(0.02));
        uint64_t oracle = 0;
        for (int y = 0; y < 200; ++y)
            for (int x = 0; x < 200; ++x)
                if ((x - 100) * (x - 100) + (y - 100) * (y - 100) <= 400) ++oracle;
        CHECK(rle_area(disk) == oracle);
    }
    SUBCASE("monotone in radius") {
        for (int r1 = 0; r1 < 12; r1 += 3) {
            RleMask small = rasterize_disk(15.3, 14.8, r1, 32, 32);
            RleMask big = rasterize_disk(15.3, 14.8, r1 + 4, 32, 32);
            CHECK(rle_intersect_count(small, big) == rle_area(small));
        }
    }
}

TEST_CASE("angular accuracy to pixel radius") {
    CameraModel cam{960, 720, 101.55, 73.60, 29.96};
    CHECK(deg_to_px_radius(5.32, cam) == 50); // 5.32 * 960 / 101.55 = 50.29
    CHECK(deg_to_px_radius(cam.hfov_deg, cam) == cam.width_px);
    CHECK_THROWS(deg_to_px_radius(0.0, cam));

    // the paper-scale region is about 1.2% of the frame
    RleMask disk = rasterize_disk(480, 360, deg_to_px_radius(5.32, cam), 960, 720);
    double frac = double(rle_area(disk)) / (960.0 * 720.0);
    CHECK(frac > 0.008);
    CHECK(frac < 0.016);
}

TEST_CASE("frame coverage") {
    FrameSegmentation frame;
    frame.width = 8;
    frame.height = 8;
    CHECK(frame_coverage(frame) == 0.0);

    std::vector<uint8_t> full(64, 1);
    InstanceMask m1{1, 1, rle_encode(full, 8, 8), {0, 0, 7, 7}, 1.0};
    frame.masks.push_back(m1);
    CHECK(frame_coverage(frame) == 1.0);

    SUBCASE("overlapping random masks match bitmap OR oracle") {
        Rng rng(303);
        for (int i = 0; i < 200; ++i) {
            FrameSegmentation f;
            f.width = 10;
            f.height = 10;
            auto a = random_bitmap(rng, 10, 10, 0.3);
            auto b = random_bitmap(rng, 10, 10, 0.3);
            f.masks.push_back({1, 1, rle_encode(a, 10, 10), {}, 1.0});
            f.masks.push_back({2, 2, rle_encode(b, 10, 10), {}, 1.0});
            uint64_t orpop = 0;
            for (size_t k = 0; k < a.size(); ++k) orpop += a[k] || b[k];
            CHECK(frame_coverage(f) == double(orpop) / 100.0);
            // union never exceeds the sum of areas
            CHECK(frame_coverage(f) <= (double(popcount(a)) + double(popcount(b))) / 100.0);
        }
    }
}

TEST_CASE("span algebra") {
    std::vector<PixelSpan> a{{0, 4}, {10, 14}};
    std::vector<PixelSpan> b{{2, 12}};
    auto inter = intersect_spans(a, b);
    CHECK(span_area(inter) == 4); // [2,4) + [10,12)
    CHECK(union_area({a, b}) == 14);
    auto merged = union_spans({a, b});
    CHECK(merged.size() == 1);
    CHECK(merged[0].begin == 0);
    CHECK(merged[0].end == 14);
}
