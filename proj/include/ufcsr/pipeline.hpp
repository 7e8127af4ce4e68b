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
//
// Pipeline orchestration: palette -> part bake -> render/capture -> analyze,
// with content-hash stage caching so re-runs skip finished work. Every stage
// honors the bit-identical-output contract regardless of worker count.

#ifndef UFCSR_PIPELINE_HPP_
#define UFCSR_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ufcsr/analyze.hpp"
#include "ufcsr/capture.hpp"
#include "ufcsr/mesh.hpp"
#include "ufcsr/obj_loader.hpp"
#include "ufcsr/oracle.hpp"
#include "ufcsr/ownership.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/png_io.hpp"
#include "ufcsr/raster.hpp"
#include "ufcsr/scene.hpp"
#include "ufcsr/worker_pool.hpp"

namespace ufcsr {

struct RunConfig {
    std::string scenario_path;
    std::string out_root;
    int scale_divisor = 1;
    bool no_trim = false;
    bool strict_colors = false;
    bool dump_frames = false;
    int workers = 1;
    bool force = false;
    bool with_palette = true;  // emit the palette artifact as part of `run`
};

struct RunSummary {
    std::size_t frames = 0;       // per eye
    std::size_t captures = 0;     // frames x 2 eyes
    std::size_t tile_files = 0;   // captures x tile grid
    std::uint64_t trimmed = 0;
    std::uint64_t grand_total = 0;
    std::string pidt_dir;
    std::string captures_dir;
    std::string stats_path;
    std::string counts_path;
    std::string heatmap_path;
    PartStatsReport report;
};

// ---------------------------------------------------------------------------
// Content-hash stage cache
// ---------------------------------------------------------------------------

namespace cache {

inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t seed = 1469598103934665603ull) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a_str(const std::string& s, std::uint64_t seed) {
    return fnv1a(s.data(), s.size(), seed);
}

inline std::uint64_t fnv1a_file(const std::string& path, std::uint64_t seed) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::storage, "cannot hash missing input: " + path);
    std::uint64_t h = seed;
    char buf[1 << 16];
    while (f.read(buf, sizeof buf) || f.gcount() > 0)
        h = fnv1a(buf, std::size_t(f.gcount()), h);
    return h;
}

inline std::string hex(std::uint64_t h) {
    std::ostringstream ss;
    ss << std::hex << std::setfill('0') << std::setw(16) << h;
    return ss.str();
}

/// True when the stage's stamp matches the current input hash and all its
/// outputs still exist — the stage can be skipped.
inline bool stage_is_fresh(const std::string& out_root, const std::string& stage,
                           const std::string& input_hash,
                           const std::vector<std::string>& outputs) {
    namespace fs = std::filesystem;
    const fs::path stamp = fs::path(out_root) / ".cache" / (stage + ".json");
    if (!fs::exists(stamp)) return false;
    try {
        const auto j = read_json_file(stamp.string());
        if (j.at("inputs").get<std::string>() != input_hash) return false;
    } catch (const Error&) {
        return false;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
    for (const auto& out : outputs)
        if (!fs::exists(out)) return false;
    return true;
}

inline void write_stamp(const std::string& out_root, const std::string& stage,
                        const std::string& input_hash,
                        const std::vector<std::string>& outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_root) / ".cache");
    nlohmann::ordered_json j;
    j["inputs"] = input_hash;
    j["outputs"] = outputs;
    write_json_file((fs::path(out_root) / ".cache" / (stage + ".json")).string(),
                    j);
}

}  // namespace cache

// ---------------------------------------------------------------------------
// Stage: palette artifact
// ---------------------------------------------------------------------------

inline void generate_palette_file(const std::string& out_path) {
    png::write_file(out_path, palette::generate_fcsp());
}

// ---------------------------------------------------------------------------
// Stage: part identification texture
// ---------------------------------------------------------------------------

struct PidtProducts {
    LabeledMesh mesh;
    OwnershipMap ownership;
    PartTable table;
    TexelCensus texel_census;
};

inline PidtProducts bake_pidt(const std::string& mesh_path,
                              const std::string& parts_path) {
    PidtProducts out;
    const PartNamingMap naming = load_part_naming_map(parts_path);
    out.mesh = load_mesh(mesh_path, naming);
    out.ownership = texel_ownership(out.mesh);
    out.table = make_part_table(out.mesh.parts);
    out.texel_census = census(out.ownership, out.mesh.parts.size());
    return out;
}

inline void write_pidt_files(const PidtProducts& products,
                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    png::write_file((fs::path(out_dir) / "pidt.png").string(),
                    bake_pidt_image(products.ownership, products.table));
    write_json_file((fs::path(out_dir) / "parts.json").string(),
                    pidt_sidecar_to_json(make_pidt_sidecar(
                        products.mesh, products.table, products.texel_census)));
}

// ---------------------------------------------------------------------------
// Stage: render + capture
// ---------------------------------------------------------------------------

struct CaptureOptions {
    int scale_divisor = 1;
    int workers = 1;
    bool dump_frames = false;
};

inline std::vector<WorldTriangle> build_occluders(const Scenario& scenario) {
    std::vector<WorldTriangle> occluders;
    for (const OccluderBox& box : scenario.occluder_boxes)
        append_box(occluders, box);
    for (const std::string& path : scenario.occluder_mesh_paths) {
        const auto tris = load_occluder_mesh(path);
        occluders.insert(occluders.end(), tris.begin(), tris.end());
    }
    return occluders;
}

/// Renders every scheduled frame for both eyes, splits each into tiles,
/// encodes and writes them, and returns the manifest. Frames are parallel
/// jobs; records land in deterministic slots so the manifest is identical
/// for any worker count.
inline CaptureManifest render_and_capture(const Scenario& scenario,
                                          const LabeledMesh& mesh,
                                          const palette::ColorSet& owned,
                                          std::uint32_t ignore_color,
                                          const std::string& out_dir,
                                          const CaptureOptions& options = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const CameraRig rig = scaled_rig(scenario.rig, options.scale_divisor);
    const FrameSchedule schedule = frame_schedule(scenario);
    RenderScene scene;
    scene.subject = &mesh;
    scene.owned = &owned;
    scene.occluders = build_occluders(scenario);
    scene.ignore_color = ignore_color;

    CaptureManifest manifest;
    manifest.scenario = scenario.name;
    manifest.ignore_color = ignore_color;
    manifest.image_width = rig.image_width;
    manifest.image_height = rig.image_height;
    manifest.tile_rows = rig.tile_rows;
    manifest.tile_cols = rig.tile_cols;
    manifest.rate_hz = scenario.rate_hz;
    manifest.duration_s = scenario.duration_s;
    manifest.frames = int(schedule.frames());
    manifest.scale_divisor = options.scale_divisor;
    manifest.encoder = png::encoder_id();
    manifest.threshold_bytes =
        compute_threshold(rig.image_width / rig.tile_cols,
                          rig.image_height / rig.tile_rows, ignore_color)
            .bytes;
    manifest.rig = rig;

    const std::size_t tiles_per_capture =
        std::size_t(rig.tile_rows) * rig.tile_cols;
    manifest.records.assign(schedule.frames() * 2 * tiles_per_capture, {});

    parallel_for(schedule.frames(), options.workers, [&](std::size_t k) {
        const double t = schedule.times[k];
        const Pose pose = evaluate_pose(scenario.trajectory, t);
        const EyePair eyes = eye_cameras(rig, pose.position);
        const Camera* cams[2] = {&eyes.left, &eyes.right};
        const char eye_tags[2] = {'L', 'R'};
        for (int e = 0; e < 2; ++e) {
            FrameMeta meta{scenario.name, int(k), eye_tags[e], t};
            const Frame frame = render_frame(scene, pose, *cams[e], meta);
            if (options.dump_frames) {
                char buf[48];
                std::snprintf(buf, sizeof buf, "_f%04d_%c_full.png", int(k),
                              eye_tags[e]);
                png::write_file(
                    (fs::path(out_dir) / ("S" + scenario.name + buf)).string(),
                    frame.pixels);
            }
            const auto tiles =
                split_tiles(frame.pixels, rig.tile_rows, rig.tile_cols);
            for (std::size_t i = 0; i < tiles.size(); ++i) {
                const Tile& tile = tiles[i];
                CaptureRecord rec;
                rec.file = tile_file_name(scenario.name, int(k), eye_tags[e],
                                          tile.row, tile.col);
                rec.frame = int(k);
                rec.eye = eye_tags[e];
                rec.row = tile.row;
                rec.col = tile.col;
                const auto bytes = encode_tile(tile.pixels);
                rec.bytes = bytes.size();
                std::ofstream f(fs::path(out_dir) / rec.file,
                                std::ios::binary | std::ios::trunc);
                if (!f) raise(ErrorKind::storage, "cannot write tile " + rec.file);
                f.write(reinterpret_cast<const char*>(bytes.data()),
                        std::streamsize(bytes.size()));
                if (!f) raise(ErrorKind::storage, "tile write failed " + rec.file);
                manifest.records[(k * 2 + std::size_t(e)) * tiles_per_capture + i] =
                    std::move(rec);
            }
        }
    });
    write_json_file((fs::path(out_dir) / "manifest.json").string(),
                    manifest_to_json(manifest));
    return manifest;
}

// ---------------------------------------------------------------------------
// Stage: analysis
// ---------------------------------------------------------------------------

struct AnalysisOptions {
    bool no_trim = false;
    bool strict_colors = false;
    int workers = 1;
};

struct AnalysisProducts {
    PartStatsReport report;
    std::uint32_t heatmap_max = 0;
};

inline AnalysisProducts analyze_captures(const std::string& captures_dir,
                                         const std::string& pidt_dir,
                                         const std::string& out_dir,
                                         const AnalysisOptions& options = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const CaptureManifest manifest = manifest_from_json(
        read_json_file((fs::path(captures_dir) / "manifest.json").string()));
    const PidtSidecar sidecar = pidt_sidecar_from_json(
        read_json_file((fs::path(pidt_dir) / "parts.json").string()));
    const ImageRgb pidt_img =
        png::read_file((fs::path(pidt_dir) / "pidt.png").string());
    const std::vector<std::int32_t> texel_part = parse_pidt(pidt_img, sidecar);

    AggregateOptions agg;
    agg.no_trim = options.no_trim;
    agg.workers = options.workers;
    const ExposureCounts counts = aggregate(captures_dir, manifest, agg);

    AnalysisProducts out;
    out.report = part_stats(counts, texel_part, sidecar.names, sidecar.texels);
    out.report.scenario = manifest.scenario;
    out.report.rig = manifest.rig;
    if (options.strict_colors && out.report.unowned.total > 0)
        raise(ErrorKind::strict_color,
              "captured colors outside the owned set: " +
                  std::to_string(out.report.unowned.distinct_colors) +
                  " distinct color(s)");

    write_stats((fs::path(out_dir) / "stats.json").string(), out.report);
    save_counts((fs::path(out_dir) / "counts.bin").string(), counts);
    const HeatmapTexture heatmap = emit_heatmap(counts);
    out.heatmap_max = heatmap.max_count;
    png::write_file((fs::path(out_dir) / "heatmap.png").string(), heatmap.image);
    return out;
}

// ---------------------------------------------------------------------------
// Top-5 report
// ---------------------------------------------------------------------------

/// Union of the five parts with the highest total, the five with the highest
/// average, and the five with the highest peak; ties break by part name
/// ascending. Rows print alphabetically.
inline std::vector<PartStats> top5_union(const PartStatsReport& report) {
    auto pick = [&](auto key) {
        std::vector<PartStats> sorted = report.parts;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](const PartStats& a, const PartStats& b) {
                             if (key(a) != key(b)) return key(a) > key(b);
                             return a.name < b.name;
                         });
        if (sorted.size() > 5) sorted.resize(5);
        return sorted;
    };
    std::vector<PartStats> rows;
    auto add_all = [&](const std::vector<PartStats>& picked) {
        for (const auto& p : picked) {
            bool present = false;
            for (const auto& r : rows) present = present || r.name == p.name;
            if (!present) rows.push_back(p);
        }
    };
    add_all(pick([](const PartStats& p) { return double(p.total); }));
    add_all(pick([](const PartStats& p) { return p.average; }));
    add_all(pick([](const PartStats& p) { return double(p.peak); }));
    std::sort(rows.begin(), rows.end(),
              [](const PartStats& a, const PartStats& b) { return a.name < b.name; });
    return rows;
}

inline std::string report_top5(const PartStatsReport& report) {
    const auto rows = top5_union(report);
    std::size_t name_w = 4;
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
    std::ostringstream out;
    out << std::left << std::setw(int(name_w)) << "Part" << std::right
        << std::setw(14) << "Total" << std::setw(8) << "Peak" << std::setw(12)
        << "Average" << std::setw(10) << "Portion" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(int(name_w)) << r.name << std::right
            << std::setw(14) << r.total << std::setw(8) << r.peak << std::setw(12)
            << std::fixed << std::setprecision(2) << r.average << std::setw(9)
            << std::fixed << std::setprecision(2) << r.portion * 100.0 << "%"
            << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Full run
// ---------------------------------------------------------------------------

namespace detail {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(stage) + ": " + e.what());
    }
}

}  // namespace detail

inline RunSummary run(const RunConfig& config) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_root);
    const Scenario scenario = detail::run_stage(
        "scenario", [&] { return load_scenario(config.scenario_path); });

    const std::string version_salt = "ufcsr-v1|" + png::encoder_id();

    if (config.with_palette) {
        const std::string palette_path =
            (fs::path(config.out_root) / "palette.png").string();
        const std::string hash =
            cache::hex(cache::fnv1a_str(version_salt + "|palette", 1));
        if (config.force ||
            !cache::stage_is_fresh(config.out_root, "palette", hash,
                                   {palette_path})) {
            generate_palette_file(palette_path);
            cache::write_stamp(config.out_root, "palette", hash, {palette_path});
        }
    }

    // Part identification texture.
    const std::string pidt_dir = (fs::path(config.out_root) / "pidt").string();
    const std::string pidt_png = (fs::path(pidt_dir) / "pidt.png").string();
    const std::string pidt_json = (fs::path(pidt_dir) / "parts.json").string();
    std::uint64_t h = cache::fnv1a_str(version_salt + "|pidt", 1);
    h = cache::fnv1a_file(scenario.mesh_path, h);
    h = cache::fnv1a_file(scenario.parts_path, h);
    const std::string pidt_hash = cache::hex(h);
    PidtProducts products = detail::run_stage("pidt", [&] {
        return bake_pidt(scenario.mesh_path, scenario.parts_path);
    });
    if (config.force || !cache::stage_is_fresh(config.out_root, "pidt", pidt_hash,
                                               {pidt_png, pidt_json})) {
        detail::run_stage("pidt", [&] { write_pidt_files(products, pidt_dir); return 0; });
        cache::write_stamp(config.out_root, "pidt", pidt_hash,
                           {pidt_png, pidt_json});
    }

    const palette::ColorSet owned = owned_colors(products.ownership);
    const ColorCode ignore = palette::select_ignore_color(owned);

    // Render + capture.
    const std::string captures_dir =
        (fs::path(config.out_root) / "captures").string();
    const std::string manifest_path =
        (fs::path(captures_dir) / "manifest.json").string();
    h = cache::fnv1a_str(version_salt + "|capture", 1);
    h = cache::fnv1a_file(config.scenario_path, h);
    h = cache::fnv1a_file(scenario.mesh_path, h);
    h = cache::fnv1a_file(scenario.parts_path, h);
    h = cache::fnv1a_str("scale=" + std::to_string(config.scale_divisor) +
                             "|dump=" + std::to_string(config.dump_frames),
                         h);
    const std::string capture_hash = cache::hex(h);
    CaptureManifest manifest;
    if (!config.force && cache::stage_is_fresh(config.out_root, "capture",
                                               capture_hash, {manifest_path})) {
        manifest = manifest_from_json(read_json_file(manifest_path));
    } else {
        CaptureOptions copts;
        copts.scale_divisor = config.scale_divisor;
        copts.workers = config.workers;
        copts.dump_frames = config.dump_frames;
        manifest = detail::run_stage("capture", [&] {
            return render_and_capture(scenario, products.mesh, owned,
                                      ignore.value, captures_dir, copts);
        });
        cache::write_stamp(config.out_root, "capture", capture_hash,
                           {manifest_path});
    }

    // Analysis.
    const std::string analysis_dir =
        (fs::path(config.out_root) / "analysis").string();
    const std::string stats_path = (fs::path(analysis_dir) / "stats.json").string();
    const std::string counts_path = (fs::path(analysis_dir) / "counts.bin").string();
    const std::string heatmap_path =
        (fs::path(analysis_dir) / "heatmap.png").string();
    h = cache::fnv1a_str(version_salt + "|analysis", 1);
    h = cache::fnv1a_file(manifest_path, h);
    h = cache::fnv1a_file(pidt_png, h);
    h = cache::fnv1a_file(pidt_json, h);
    h = cache::fnv1a_str("no_trim=" + std::to_string(config.no_trim), h);
    const std::string analysis_hash = cache::hex(h);
    PartStatsReport report;
    if (!config.force &&
        cache::stage_is_fresh(config.out_root, "analysis", analysis_hash,
                              {stats_path, counts_path, heatmap_path})) {
        report = read_stats(stats_path);
        if (config.strict_colors && report.unowned.total > 0)
            raise(ErrorKind::strict_color,
                  "captured colors outside the owned set: " +
                      std::to_string(report.unowned.distinct_colors) +
                      " distinct color(s)");
    } else {
        AnalysisOptions aopts;
        aopts.no_trim = config.no_trim;
        aopts.strict_colors = config.strict_colors;
        aopts.workers = config.workers;
        report = detail::run_stage("analysis", [&] {
            return analyze_captures(captures_dir, pidt_dir, analysis_dir, aopts);
        }).report;
        cache::write_stamp(config.out_root, "analysis", analysis_hash,
                           {stats_path, counts_path, heatmap_path});
    }

    RunSummary summary;
    summary.frames = std::size_t(manifest.frames);
    summary.captures = summary.frames * 2;
    summary.tile_files =
        summary.captures * std::size_t(manifest.tile_rows) * manifest.tile_cols;
    summary.trimmed = report.images_trimmed;
    summary.grand_total = report.grand_total;
    summary.pidt_dir = pidt_dir;
    summary.captures_dir = captures_dir;
    summary.stats_path = stats_path;
    summary.counts_path = counts_path;
    summary.heatmap_path = heatmap_path;
    summary.report = report;
    return summary;
}

inline std::string format_summary(const RunSummary& s) {
    std::ostringstream out;
    out << "frames per eye:  " << s.frames << '\n'
        << "captures:        " << s.captures << '\n'
        << "tile files:      " << s.tile_files << '\n'
        << "tiles trimmed:   " << s.trimmed << '\n'
        << "grand total:     " << s.grand_total << '\n'
        << '\n'
        << report_top5(s.report);
    return out.str();
}

// ---------------------------------------------------------------------------
// Oracle check
// ---------------------------------------------------------------------------

struct OracleCheckResult {
    std::uint64_t owned_texels = 0;
    std::uint64_t agreeing_texels = 0;
    double agreement_rate = 1.0;
    ExposureCounts raster_counts;
    ExposureCounts reference_counts;
};

/// Runs the raster pipeline (in memory, per-tile deduplication included) and
/// the brute-force reference over the same scenario, then compares counts on
/// every owned texel.
inline OracleCheckResult oracle_check(const Scenario& scenario, int scale_divisor,
                                      int workers = 1) {
    const PidtProducts products =
        bake_pidt(scenario.mesh_path, scenario.parts_path);
    const palette::ColorSet owned = owned_colors(products.ownership);
    const ColorCode ignore = palette::select_ignore_color(owned);
    const CameraRig rig = scaled_rig(scenario.rig, scale_divisor);
    const FrameSchedule schedule = frame_schedule(scenario);

    RenderScene scene;
    scene.subject = &products.mesh;
    scene.owned = &owned;
    scene.occluders = build_occluders(scenario);
    scene.ignore_color = ignore.value;

    std::vector<ImageCounter> counters(std::size_t(std::max(1, workers)));
    const std::size_t n = schedule.frames();
    const std::size_t chunk =
        (n + counters.size() - 1) / std::max<std::size_t>(counters.size(), 1);
    parallel_for(counters.size(), workers, [&](std::size_t w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        for (std::size_t k = lo; k < hi; ++k) {
            const double t = schedule.times[k];
            const Pose pose = evaluate_pose(scenario.trajectory, t);
            const EyePair eyes = eye_cameras(rig, pose.position);
            for (const Camera* cam : {&eyes.left, &eyes.right}) {
                const Frame frame = render_frame(
                    scene, pose, *cam, {scenario.name, int(k), 'L', t});
                for (const Tile& tile :
                     split_tiles(frame.pixels, rig.tile_rows, rig.tile_cols))
                    counters[w].count_image(tile.pixels, ignore.value);
            }
        }
    });

    OracleCheckResult result;
    result.raster_counts = std::move(counters.front().counts);
    for (std::size_t w = 1; w < counters.size(); ++w)
        result.raster_counts.merge(counters[w].counts);

    ufcsr::oracle::OracleOptions oopts;
    oopts.scale_divisor = scale_divisor;
    result.reference_counts = ufcsr::oracle::oracle_counts(
        scenario, products.mesh, products.ownership, scene.occluders, oopts);

    for (std::size_t i = 0; i < products.ownership.owner_triangle.size(); ++i) {
        if (products.ownership.owner_triangle[i] == kUnowned) continue;
        ++result.owned_texels;
        if (result.raster_counts.at(std::uint32_t(i)) ==
            result.reference_counts.at(std::uint32_t(i)))
            ++result.agreeing_texels;
    }
    result.agreement_rate =
        result.owned_texels == 0
            ? 1.0
            : double(result.agreeing_texels) / double(result.owned_texels);
    return result;
}

/// Black where counts agree; red where the raster saw more, blue where the
/// reference saw more.
inline ImageRgb disagreement_raster(const OracleCheckResult& r) {
    ImageRgb img(palette::kWidth, palette::kHeight);
    for (int y = 0; y < palette::kHeight; ++y) {
        for (int x = 0; x < palette::kWidth; ++x) {
            const std::uint32_t c = std::uint32_t(y) * palette::kWidth + x;
            const std::uint32_t a = r.raster_counts.at(c);
            const std::uint32_t b = r.reference_counts.at(c);
            if (a > b)
                img.set_pixel(x, y, 0xCC2222);
            else if (b > a)
                img.set_pixel(x, y, 0x2222CC);
        }
    }
    return img;
}

}  // namespace ufcsr

#endif  // UFCSR_PIPELINE_HPP_
