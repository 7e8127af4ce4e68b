// Copyright 2026 The ufcsr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "ufcsr/analyze.hpp"
#include "ufcsr/ownership.hpp"
#include "support/fixtures.hpp"
#include "support/plasma_invert.hpp"

using namespace ufcsr;
using Catch::Approx;

namespace {

constexpr std::uint32_t kIgnore = palette::kDefaultIgnoreColor;
namespace fs = std::filesystem;

/// Writes a tiny capture directory of hand-made tiles and the matching
/// manifest; colors[i] empty means a solid ignore tile.
CaptureManifest write_fixture_captures(
    const std::string& dir, const std::vector<std::vector<std::uint32_t>>& tiles) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    CaptureManifest m;
    m.scenario = "fix";
    m.ignore_color = kIgnore;
    m.image_width = 40;
    m.image_height = 40;
    m.tile_rows = 1;
    m.tile_cols = 1;
    m.rate_hz = 1;
    m.duration_s = 1;
    m.frames = int(tiles.size());
    m.encoder = png::encoder_id();
    m.threshold_bytes = compute_threshold(40, 40, kIgnore).bytes;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        ImageRgb img(40, 40, kIgnore);
        int at = 0;
        for (std::uint32_t c : tiles[i]) {
            // Several pixels of each color: dedup must still count once.
            img.set_pixel(at % 40, at / 40, c);
            img.set_pixel((at + 7) % 40, (at + 3) % 40, c);
            ++at;
        }
        CaptureRecord rec;
        rec.file = tile_file_name("fix", int(i), 'L', 0, 0);
        rec.frame = int(i);
        rec.eye = 'L';
        const auto bytes = encode_tile(img);
        rec.bytes = bytes.size();
        std::ofstream f(fs::path(dir) / rec.file, std::ios::binary);
        f.write(reinterpret_cast<const char*>(bytes.data()),
                std::streamsize(bytes.size()));
        m.records.push_back(rec);
    }
    write_json_file((fs::path(dir) / "manifest.json").string(),
                    manifest_to_json(m));
    return m;
}

}  // namespace

TEST_CASE("count_image bumps each distinct color once per image") {
    ImageCounter counter;
    SECTION("solid ignore tile leaves counts untouched") {
        counter.count_image(ImageRgb(20, 20, kIgnore), kIgnore);
        CHECK(counter.counts.distinct_colors() == 0);
        CHECK(counter.counts.images_processed == 1);
    }
    SECTION("multiplicity within an image does not matter") {
        ImageRgb img(30, 30, kIgnore);
        for (int x = 0; x < 25; ++x)
            for (int y = 0; y < 20; ++y) img.set_pixel(x, y, 0xABCDEF);  // 500 px
        img.set_pixel(29, 29, 0x123456);  // 1 px
        counter.count_image(img, kIgnore);
        CHECK(counter.counts.at(0xABCDEF) == 1);
        CHECK(counter.counts.at(0x123456) == 1);

        // Processing the same file again adds again; single processing per
        // file is the manifest's job, not the counter's.
        counter.count_image(img, kIgnore);
        CHECK(counter.counts.at(0xABCDEF) == 2);
        CHECK(counter.counts.at(0x123456) == 2);
    }
}

TEST_CASE("aggregate processes each record once and honors trimming") {
    const std::string dir = "/tmp/ufcsr_agg_fixture";
    const auto manifest = write_fixture_captures(
        dir, {{0x000100, 0x000200}, {}, {0x000100}, {}, {}});
    const ExposureCounts counts = aggregate(dir, manifest);
    CHECK(counts.at(0x000100) == 2);
    CHECK(counts.at(0x000200) == 1);
    CHECK(counts.images_processed == 2);
    CHECK(counts.images_trimmed == 3);

    SECTION("no-trim decodes everything yet reports identical bookkeeping") {
        AggregateOptions opts;
        opts.no_trim = true;
        const ExposureCounts full = aggregate(dir, manifest, opts);
        CHECK(full.same_counts(counts));
        CHECK(full.images_processed == counts.images_processed);
        CHECK(full.images_trimmed == counts.images_trimmed);
    }
    SECTION("record order does not matter") {
        CaptureManifest shuffled = manifest;
        std::mt19937 rng(3);
        std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
        CHECK(aggregate(dir, shuffled).same_counts(counts));
    }
    SECTION("worker count does not matter") {
        AggregateOptions opts;
        opts.workers = 3;
        const ExposureCounts par = aggregate(dir, manifest, opts);
        CHECK(par.same_counts(counts));
        CHECK(par.images_processed == counts.images_processed);
        CHECK(par.images_trimmed == counts.images_trimmed);
    }
    SECTION("missing files are a manifest error") {
        CaptureManifest broken = manifest;
        broken.records[0].file = "Sfix_f9999_L_r0c0.png";
        CHECK_THROWS_AS(aggregate(dir, broken), Error);
    }
}

TEST_CASE("part stats aggregate counts against the part map") {
    const LabeledMesh mesh = fixtures::make_cube_subject(1.0, 100);
    const OwnershipMap map = texel_ownership(mesh);
    const TexelCensus cen = census(map, mesh.parts.size());

    // Every texel of face part 0 seen in 362 images.
    ExposureCounts counts;
    for (std::size_t t = 0; t < map.part.size(); ++t)
        if (map.part[t] == 0) counts.set(std::uint32_t(t), 362);
    counts.images_processed = 362;

    const PartStatsReport report =
        part_stats(counts, map.part, mesh.parts, cen.per_part);
    REQUIRE(report.parts.size() == 6);
    CHECK(std::is_sorted(report.parts.begin(), report.parts.end(),
                         [](const PartStats& a, const PartStats& b) {
                             return a.name < b.name;
                         }));
    const auto& hot = *std::find_if(report.parts.begin(), report.parts.end(),
                                    [](const PartStats& p) {
                                        return p.name == "FacePX";
                                    });
    CHECK(hot.total == 3620000);
    CHECK(hot.peak == 362);
    CHECK(hot.average == Approx(362.0).margin(1e-12));
    CHECK(hot.portion == Approx(1.0).margin(1e-12));
    for (const auto& part : report.parts) {
        if (part.name == "FacePX") continue;
        CHECK(part.total == 0);
        CHECK(part.peak == 0);
        CHECK(part.average == 0.0);
        CHECK(part.portion == 0.0);
    }
    CHECK(report.grand_total == 3620000);
    CHECK(report.unowned.total == 0);

    SECTION("conservation: totals sum to the grand total, portions to one") {
        std::uint64_t sum = 0;
        double portions = 0.0;
        for (const auto& part : report.parts) {
            sum += part.total;
            portions += part.portion;
        }
        CHECK(sum == report.grand_total);
        CHECK(portions == Approx(1.0).margin(1e-9));
    }
    SECTION("counts on unowned texels land in diagnostics only") {
        ExposureCounts noisy = counts;
        noisy.set(0xFFFFFF, 7);  // far corner, unowned in this fixture
        const auto r2 = part_stats(noisy, map.part, mesh.parts, cen.per_part);
        CHECK(r2.grand_total == report.grand_total);
        CHECK(r2.unowned.distinct_colors == 1);
        CHECK(r2.unowned.total == 7);
        CHECK(r2.unowned.peak == 7);
    }
    SECTION("census mismatch is a consistency error") {
        auto wrong = cen.per_part;
        wrong[0] -= 1;
        CHECK_THROWS_AS(part_stats(counts, map.part, mesh.parts, wrong), Error);
    }
}

TEST_CASE("stats documents round-trip exactly") {
    PartStatsReport report;
    report.scenario = "demo";
    report.rig.head_xy = {-3.25, 4.125};
    report.images_processed = 9050;
    report.images_trimmed = 8000;
    report.grand_total = 123456789;
    report.parts.push_back({"Alpha", 10000, 3620000, 362, 362.0, 0.97});
    report.parts.push_back({"Beta", 55, 7, 3, 7.0 / 55.0, 0.03});
    report.unowned = {2, 5, 4};

    const std::string path = "/tmp/ufcsr_stats_roundtrip.json";
    write_stats(path, report);
    const PartStatsReport back = read_stats(path);
    CHECK(back == report);

    SECTION("empty report stays valid") {
        const PartStatsReport empty;
        write_stats(path, empty);
        CHECK(read_stats(path) == empty);
    }
}

TEST_CASE("plasma endpoints and midpoint") {
    CHECK(plasma(0.0).value == 0x0D0887u);  // dark purple, first entry
    CHECK(plasma(1.0).value == 0xF0F921u);  // bright yellow, last entry
    const auto& a = plasma_lut::kEntries[127];
    const auto& b = plasma_lut::kEntries[128];
    const ColorCode mid = plasma(0.5);
    CHECK(int(mid.r()) == int(std::lround(a.r + (b.r - a.r) * 0.5)));
    CHECK(int(mid.g()) == int(std::lround(a.g + (b.g - a.g) * 0.5)));
    CHECK(int(mid.b()) == int(std::lround(a.b + (b.b - a.b) * 0.5)));
    CHECK_THROWS_AS(plasma(-0.01), Error);
    CHECK_THROWS_AS(plasma(1.01), Error);
}

TEST_CASE("plasma inverts to within one LUT step") {
    for (int i = 0; i <= 1000; ++i) {
        const double u = i / 1000.0;
        const double rec = plasma_invert::invert(plasma(u));
        if (std::fabs(rec - u) > 1.0 / 255.0)
            FAIL("inversion error " << std::fabs(rec - u) << " at u=" << u);
    }
    SUCCEED();
}

TEST_CASE("heatmap normalizes against the maximum count") {
    SECTION("single hot texel") {
        ExposureCounts counts;
        counts.set(0x000042, 5);
        const HeatmapTexture heatmap = emit_heatmap(counts);
        CHECK(heatmap.max_count == 5);
        CHECK(heatmap.image.pixel(0x42, 0) == plasma(1.0).value);
        CHECK(heatmap.image.pixel(0, 0) == plasma(0.0).value);
        CHECK(heatmap.image.pixel(4095, 4095) == plasma(0.0).value);
    }
    SECTION("uniform counts give a uniform image") {
        ExposureCounts counts;
        for (std::uint32_t c = 0; c < 4096; ++c) counts.set(c, 3);
        const HeatmapTexture heatmap = emit_heatmap(counts);
        for (int x = 0; x < 4096; x += 97)
            CHECK(heatmap.image.pixel(x, 0) == plasma(1.0).value);
        CHECK(heatmap.image.pixel(100, 100) == plasma(0.0).value);
    }
    SECTION("all-zero counts are an empty-data error") {
        CHECK_THROWS_AS(emit_heatmap(ExposureCounts{}), Error);
    }
}

TEST_CASE("counts files round-trip") {
    ExposureCounts counts;
    std::mt19937 rng(9);
    for (int i = 0; i < 5000; ++i)
        counts.set(rng() & 0xFFFFFF, 1 + (rng() % 400));
    counts.images_processed = 777;
    counts.images_trimmed = 42;
    const std::string path = "/tmp/ufcsr_counts_roundtrip.bin";
    save_counts(path, counts);
    const ExposureCounts back = load_counts(path);
    CHECK(back.same_counts(counts));
    CHECK(back.images_processed == 777);
    CHECK(back.images_trimmed == 42);
}
