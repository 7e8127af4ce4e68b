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

#include <filesystem>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "ufcsr/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace ufcsr;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> slurp(const std::string& path) {
    return png::read_bytes(path);
}

struct FixtureDir {
    std::string root;
    std::string scenario_path;

    explicit FixtureDir(const std::string& name, double rate = 30.0,
                        double duration = 0.5) {
        root = "/tmp/ufcsr_pipeline_" + name;
        fs::remove_all(root);
        fs::create_directories(root);
        const LabeledMesh mesh = fixtures::make_quad_subject(0.6, 0.6, 48);
        fixtures::write_obj(mesh, root + "/subject.obj");
        fixtures::write_parts_map(mesh, root + "/subject.parts");
        const auto spec = fixtures::make_drift_spec("subject.obj", "subject.parts",
                                                    rate, duration);
        scenario_path = root + "/scenario.json";
        fixtures::write_scenario_json(spec, scenario_path);
    }

    RunConfig config(const std::string& out_name) const {
        RunConfig cfg;
        cfg.scenario_path = scenario_path;
        cfg.out_root = root + "/" + out_name;
        cfg.scale_divisor = 20;  // 320 x 405 frames
        cfg.workers = 2;
        cfg.with_palette = false;
        return cfg;
    }
};

}  // namespace

TEST_CASE("full run produces every artifact with consistent arithmetic") {
    const FixtureDir fixture("run");
    const RunConfig cfg = fixture.config("out");
    const RunSummary summary = run(cfg);

    CHECK(summary.frames == 16);  // floor(0.5 * 30) + 1
    CHECK(summary.captures == 32);
    CHECK(summary.tile_files == 800);
    CHECK(summary.grand_total > 0);

    CHECK(fs::exists(summary.stats_path));
    CHECK(fs::exists(summary.counts_path));
    CHECK(fs::exists(summary.heatmap_path));
    CHECK(fs::exists(fs::path(summary.pidt_dir) / "pidt.png"));
    CHECK(fs::exists(fs::path(summary.pidt_dir) / "parts.json"));
    CHECK(fs::exists(fs::path(summary.captures_dir) / "manifest.json"));

    std::size_t tiles = 0;
    for (const auto& entry : fs::directory_iterator(summary.captures_dir))
        tiles += entry.path().extension() == ".png";
    CHECK(tiles == 800);

    SECTION("summary text carries the headline numbers") {
        const std::string text = format_summary(summary);
        CHECK(text.find("frames per eye:  16") != std::string::npos);
        CHECK(text.find("captures:        32") != std::string::npos);
        CHECK(text.find("tile files:      800") != std::string::npos);
    }

    SECTION("separate analyze run reproduces the stats byte-for-byte") {
        const std::string out2 = fixture.root + "/reanalysis";
        AnalysisOptions opts;
        opts.workers = 3;
        analyze_captures(summary.captures_dir, summary.pidt_dir, out2, opts);
        CHECK(slurp(out2 + "/stats.json") == slurp(summary.stats_path));
        CHECK(slurp(out2 + "/heatmap.png") == slurp(summary.heatmap_path));
    }

    SECTION("stats honor conservation") {
        const PartStatsReport report = read_stats(summary.stats_path);
        std::uint64_t total = 0;
        double portions = 0.0;
        for (const auto& part : report.parts) {
            total += part.total;
            portions += part.portion;
        }
        CHECK(total == report.grand_total);
        CHECK(portions == Catch::Approx(1.0).margin(1e-9));
        CHECK(report.unowned.total == 0);
    }

    SECTION("no count exceeds 2 x frames x 4 (tile-corner straddle bound)") {
        const ExposureCounts counts = load_counts(summary.counts_path);
        CHECK(counts.max_count() <= 2ull * summary.frames * 4);
    }
}

TEST_CASE("cached stages are skipped until forced") {
    const FixtureDir fixture("cache", 30.0, 0.2);
    const RunConfig cfg = fixture.config("out");
    const RunSummary first = run(cfg);
    const auto manifest_path = fs::path(first.captures_dir) / "manifest.json";
    const auto t0 = fs::last_write_time(manifest_path);
    const auto stats0 = slurp(first.stats_path);

    const RunSummary second = run(cfg);
    CHECK(fs::last_write_time(manifest_path) == t0);  // capture stage skipped
    CHECK(slurp(second.stats_path) == stats0);

    RunConfig forced = cfg;
    forced.force = true;
    const RunSummary third = run(forced);
    CHECK(fs::last_write_time(manifest_path) != t0);  // stage re-ran
    CHECK(slurp(third.stats_path) == stats0);         // to identical bytes

    SECTION("changing an input invalidates the cache") {
        std::ofstream(fixture.root + "/subject.parts", std::ios::app)
            << "# touched\n";
        const auto t1 = fs::last_write_time(manifest_path);
        run(cfg);
        CHECK(fs::last_write_time(manifest_path) != t1);
    }
}

TEST_CASE("unreadable inputs abort with a typed error") {
    const FixtureDir fixture("badmesh", 30.0, 0.2);
    std::ofstream(fixture.root + "/subject.obj", std::ios::trunc)
        << "v 0 0 0\nf 1 1 1\n";  // no texture coordinates
    try {
        run(fixture.config("out"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unwrap);
    }
    RunConfig missing = fixture.config("out2");
    missing.scenario_path = fixture.root + "/nope.json";
    CHECK_THROWS_AS(run(missing), Error);
}

TEST_CASE("trim modes produce byte-identical stats") {
    const FixtureDir fixture("trim", 30.0, 0.2);
    const RunSummary trimmed = run(fixture.config("out_trim"));
    RunConfig no_trim_cfg = fixture.config("out_notrim");
    no_trim_cfg.no_trim = true;
    const RunSummary full = run(no_trim_cfg);
    CHECK(slurp(trimmed.stats_path) == slurp(full.stats_path));
    CHECK(slurp(trimmed.heatmap_path) == slurp(full.heatmap_path));
    CHECK(trimmed.trimmed == full.trimmed);
    CHECK(trimmed.trimmed > 0);
}

TEST_CASE("top-5 report unions the three rankings") {
    PartStatsReport report;
    const auto add = [&](const std::string& name, std::uint64_t total,
                         std::uint32_t peak, double average) {
        PartStats p;
        p.name = name;
        p.census_texels = 100;
        p.total = total;
        p.peak = peak;
        p.average = average;
        report.parts.push_back(p);
    };
    SECTION("three parts all appear") {
        add("B", 5, 1, 0.05);
        add("A", 10, 2, 0.10);
        add("C", 1, 9, 0.01);
        const auto rows = top5_union(report);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].name == "A");
        CHECK(rows[2].name == "C");
    }
    SECTION("peak ties break by part name ascending") {
        // Seven parts; five distinct high totals; peak all equal, so the
        // peak top-5 is decided alphabetically.
        for (int i = 0; i < 7; ++i)
            add(std::string(1, char('A' + i)), std::uint64_t(100 - i), 50,
                double(100 - i) / 100.0);
        const auto rows = top5_union(report);
        // Totals pick A..E; peaks tie everywhere and also pick A..E.
        REQUIRE(rows.size() == 5);
        CHECK(rows[0].name == "A");
        CHECK(rows[4].name == "E");
    }
    SECTION("fixture-run rows match the stats document") {
        const FixtureDir fixture("report", 30.0, 0.2);
        const RunSummary summary = run(fixture.config("out"));
        const auto rows = top5_union(summary.report);
        REQUIRE(rows.size() == summary.report.parts.size());  // single part
        CHECK(rows[0].total == summary.report.parts[0].total);
        const std::string table = report_top5(summary.report);
        CHECK(table.find(rows[0].name) != std::string::npos);
    }
}

TEST_CASE("strict mode passes on clean fixtures") {
    const FixtureDir fixture("strict", 30.0, 0.2);
    RunConfig cfg = fixture.config("out");
    cfg.strict_colors = true;
    const RunSummary summary = run(cfg);
    CHECK(summary.report.unowned.total == 0);
}
