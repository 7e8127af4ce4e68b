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
// Exposure counting and per-part statistics. A color's count is the number
// of captured images it appeared in — within one image a color counts once
// no matter how many pixels carry it. Counts live in a dense 2^24 array so
// worker results merge by plain element-wise addition.

#ifndef UFCSR_ANALYZE_HPP_
#define UFCSR_ANALYZE_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ufcsr/capture.hpp"
#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/plasma.hpp"
#include "ufcsr/png_io.hpp"
#include "ufcsr/scene.hpp"
#include "ufcsr/worker_pool.hpp"

namespace ufcsr {

/// Color -> number of captured images the color appeared in.
class ExposureCounts {
public:
    ExposureCounts() : counts_(palette::kColorCount, 0) {}

    std::uint32_t at(std::uint32_t color) const { return counts_[color & 0xFFFFFF]; }
    void bump(std::uint32_t color) { ++counts_[color & 0xFFFFFF]; }
    void set(std::uint32_t color, std::uint32_t n) { counts_[color & 0xFFFFFF] = n; }

    std::uint64_t images_processed = 0;
    std::uint64_t images_trimmed = 0;

    std::uint32_t max_count() const {
        std::uint32_t best = 0;
        for (std::uint32_t c : counts_) best = std::max(best, c);
        return best;
    }

    std::uint64_t distinct_colors() const {
        std::uint64_t n = 0;
        for (std::uint32_t c : counts_) n += c != 0;
        return n;
    }

    void merge(const ExposureCounts& other) {
        for (std::size_t i = 0; i < counts_.size(); ++i)
            counts_[i] += other.counts_[i];
        images_processed += other.images_processed;
        images_trimmed += other.images_trimmed;
    }

    bool same_counts(const ExposureCounts& other) const {
        return counts_ == other.counts_;
    }

private:
    std::vector<std::uint32_t> counts_;
};

/// Wraps ExposureCounts with the per-image deduplication scratch. Feed it
/// decoded captures; each distinct non-ignore color in an image bumps its
/// count by exactly one.
class ImageCounter {
public:
    ImageCounter() : mark_(palette::kColorCount / 64, 0) {}

    void count_image(const ImageRgb& img, std::uint32_t ignore_color) {
        seen_.clear();
        const std::vector<std::uint8_t>& bytes = img.bytes();
        for (std::size_t i = 0; i < bytes.size(); i += 3) {
            const std::uint32_t c = (std::uint32_t(bytes[i]) << 16) |
                                    (std::uint32_t(bytes[i + 1]) << 8) |
                                    bytes[i + 2];
            if (c == ignore_color) continue;
            std::uint64_t& word = mark_[c >> 6];
            const std::uint64_t bit = std::uint64_t(1) << (c & 63);
            if (word & bit) continue;
            word |= bit;
            seen_.push_back(c);
        }
        for (std::uint32_t c : seen_) {
            counts.bump(c);
            mark_[c >> 6] &= ~(std::uint64_t(1) << (c & 63));
        }
        ++counts.images_processed;
    }

    ExposureCounts counts;

private:
    std::vector<std::uint64_t> mark_;
    std::vector<std::uint32_t> seen_;
};

// ---------------------------------------------------------------------------
// Aggregation over a capture directory
// ---------------------------------------------------------------------------

struct AggregateOptions {
    bool no_trim = false;
    int workers = 1;
};

/// Processes every non-trimmed tile in the manifest exactly once. Counting
/// is a commutative merge, so the result is independent of record order and
/// worker count. The processed/trimmed tallies describe the capture set
/// itself — a record at or below the threshold is "trimmed" whether it was
/// skipped or (under no_trim) decoded and verified empty — so the resulting
/// document is identical in both modes.
inline ExposureCounts aggregate(const std::string& captures_dir,
                                const CaptureManifest& manifest,
                                const AggregateOptions& options = {}) {
    namespace fs = std::filesystem;
    const TrimThreshold threshold{manifest.threshold_bytes, 0, 0};
    for (const CaptureRecord& r : manifest.records) {
        if (!fs::exists(fs::path(captures_dir) / r.file))
            raise(ErrorKind::manifest, "manifest names a missing tile: " + r.file);
    }

    const std::size_t workers = std::size_t(std::max(1, options.workers));
    std::vector<ImageCounter> counters(workers);
    const std::size_t n = manifest.records.size();
    const std::size_t chunk = (n + workers - 1) / workers;
    parallel_for(workers, int(workers), [&](std::size_t w) {
        ImageCounter& counter = counters[w];
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) {
            const CaptureRecord& r = manifest.records[i];
            if (!options.no_trim && is_empty(r, threshold)) continue;
            const auto img =
                png::read_file((fs::path(captures_dir) / r.file).string());
            counter.count_image(img, manifest.ignore_color);
        }
    });

    ExposureCounts counts = std::move(counters.front().counts);
    for (std::size_t w = 1; w < counters.size(); ++w)
        counts.merge(counters[w].counts);
    std::uint64_t trimmed = 0;
    for (const CaptureRecord& r : manifest.records)
        trimmed += is_empty(r, threshold);
    counts.images_trimmed = trimmed;
    counts.images_processed = n - trimmed;
    return counts;
}

// ---------------------------------------------------------------------------
// Per-part statistics
// ---------------------------------------------------------------------------

struct PartStats {
    std::string name;
    std::uint64_t census_texels = 0;
    std::uint64_t total = 0;      // sum of counts over the part's texels
    std::uint32_t peak = 0;       // highest count on any texel of the part
    double average = 0.0;         // total / census_texels
    double portion = 0.0;         // total / grand total

    bool operator==(const PartStats&) const = default;
};

/// Counts observed on texels no part owns. Any entry here means render
/// sampling and baking disagreed; strict runs refuse to continue.
struct UnownedDiagnostics {
    std::uint64_t distinct_colors = 0;
    std::uint64_t total = 0;
    std::uint32_t peak = 0;

    bool operator==(const UnownedDiagnostics&) const = default;
};

struct PartStatsReport {
    int format_version = 1;
    std::string scenario;
    CameraRig rig;
    std::uint64_t images_processed = 0;
    std::uint64_t images_trimmed = 0;
    std::uint64_t grand_total = 0;
    std::vector<PartStats> parts;  // sorted by part name
    UnownedDiagnostics unowned;

    bool operator==(const PartStatsReport& o) const {
        return format_version == o.format_version && scenario == o.scenario &&
               images_processed == o.images_processed &&
               images_trimmed == o.images_trimmed &&
               grand_total == o.grand_total && parts == o.parts &&
               unowned == o.unowned;
    }
};

/// Aggregates counts against the part identification texture. Totals and
/// peaks accumulate in integers; division happens only at reporting time.
inline PartStatsReport part_stats(const ExposureCounts& counts,
                                  const std::vector<std::int32_t>& texel_part,
                                  const std::vector<std::string>& part_names,
                                  const std::vector<std::uint64_t>& census_per_part) {
    if (texel_part.size() != std::size_t(palette::kWidth) * palette::kHeight)
        raise(ErrorKind::consistency, "part map has wrong size");
    if (part_names.size() != census_per_part.size())
        raise(ErrorKind::consistency, "census does not match the part table");

    std::vector<std::uint64_t> total(part_names.size(), 0);
    std::vector<std::uint32_t> peak(part_names.size(), 0);
    std::vector<std::uint64_t> seen_census(part_names.size(), 0);
    PartStatsReport report;

    for (std::size_t texel = 0; texel < texel_part.size(); ++texel) {
        const std::int32_t part = texel_part[texel];
        const std::uint32_t count = counts.at(std::uint32_t(texel));
        if (part < 0) {
            if (count > 0) {
                ++report.unowned.distinct_colors;
                report.unowned.total += count;
                report.unowned.peak = std::max(report.unowned.peak, count);
            }
            continue;
        }
        if (std::size_t(part) >= part_names.size())
            raise(ErrorKind::consistency, "part id outside the part table");
        ++seen_census[std::size_t(part)];
        total[std::size_t(part)] += count;
        peak[std::size_t(part)] = std::max(peak[std::size_t(part)], count);
    }
    if (seen_census != census_per_part)
        raise(ErrorKind::consistency,
              "texel census disagrees with the part identification texture");

    report.images_processed = counts.images_processed;
    report.images_trimmed = counts.images_trimmed;
    for (std::uint64_t t : total) report.grand_total += t;
    for (std::size_t i = 0; i < part_names.size(); ++i) {
        PartStats row;
        row.name = part_names[i];
        row.census_texels = census_per_part[i];
        row.total = total[i];
        row.peak = peak[i];
        row.average = row.census_texels > 0
                          ? double(row.total) / double(row.census_texels)
                          : 0.0;
        row.portion = report.grand_total > 0
                          ? double(row.total) / double(report.grand_total)
                          : 0.0;
        report.parts.push_back(std::move(row));
    }
    std::sort(report.parts.begin(), report.parts.end(),
              [](const PartStats& a, const PartStats& b) { return a.name < b.name; });
    return report;
}

// ---------------------------------------------------------------------------
// Stats document
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json stats_to_json(const PartStatsReport& r) {
    nlohmann::ordered_json j;
    j["format_version"] = r.format_version;
    j["scenario"] = r.scenario;
    j["rig"] = {
        {"head", {r.rig.head_xy.x, r.rig.head_xy.y}},
        {"eye_height_m", r.rig.eye_height},
        {"ipd_m", r.rig.ipd},
        {"hfov_deg", r.rig.hfov_deg},
        {"image", {r.rig.image_width, r.rig.image_height}},
    };
    j["images"] = {{"processed", r.images_processed}, {"trimmed", r.images_trimmed}};
    j["grand_total"] = r.grand_total;
    auto parts = nlohmann::ordered_json::array();
    for (const auto& p : r.parts) {
        nlohmann::ordered_json row;
        row["name"] = p.name;
        row["census_texels"] = p.census_texels;
        row["total"] = p.total;
        row["peak"] = p.peak;
        row["average"] = p.average;
        row["portion"] = p.portion;
        parts.push_back(row);
    }
    j["parts"] = parts;
    j["unowned"] = {{"distinct_colors", r.unowned.distinct_colors},
                    {"total", r.unowned.total},
                    {"peak", r.unowned.peak}};
    return j;
}

inline PartStatsReport stats_from_json(const nlohmann::json& j) {
    PartStatsReport r;
    try {
        r.format_version = j.at("format_version").get<int>();
        r.scenario = j.at("scenario").get<std::string>();
        const auto& rig = j.at("rig");
        r.rig.head_xy = {rig.at("head")[0].get<double>(),
                         rig.at("head")[1].get<double>()};
        r.rig.eye_height = rig.at("eye_height_m").get<double>();
        r.rig.ipd = rig.at("ipd_m").get<double>();
        r.rig.hfov_deg = rig.at("hfov_deg").get<double>();
        r.rig.image_width = rig.at("image")[0].get<int>();
        r.rig.image_height = rig.at("image")[1].get<int>();
        r.images_processed = j.at("images").at("processed").get<std::uint64_t>();
        r.images_trimmed = j.at("images").at("trimmed").get<std::uint64_t>();
        r.grand_total = j.at("grand_total").get<std::uint64_t>();
        for (const auto& row : j.at("parts")) {
            PartStats p;
            p.name = row.at("name").get<std::string>();
            p.census_texels = row.at("census_texels").get<std::uint64_t>();
            p.total = row.at("total").get<std::uint64_t>();
            p.peak = row.at("peak").get<std::uint32_t>();
            p.average = row.at("average").get<double>();
            p.portion = row.at("portion").get<double>();
            r.parts.push_back(std::move(p));
        }
        r.unowned.distinct_colors =
            j.at("unowned").at("distinct_colors").get<std::uint64_t>();
        r.unowned.total = j.at("unowned").at("total").get<std::uint64_t>();
        r.unowned.peak = j.at("unowned").at("peak").get<std::uint32_t>();
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::format, std::string("stats document: ") + e.what());
    }
    return r;
}

inline void write_stats(const std::string& path, const PartStatsReport& r) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) raise(ErrorKind::storage, "cannot open for write: " + path);
    f << stats_to_json(r).dump(2) << '\n';
    if (!f) raise(ErrorKind::storage, "write failed: " + path);
}

inline PartStatsReport read_stats(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::storage, "cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::format, path + ": " + e.what());
    }
    return stats_from_json(j);
}

// ---------------------------------------------------------------------------
// Heatmap
// ---------------------------------------------------------------------------

struct HeatmapTexture {
    ImageRgb image;
    std::uint32_t max_count = 0;
};

/// Full-texture exposedness render: every texel gets plasma(count / max),
/// zero-count texels included. Refuses all-zero data — there is no maximum
/// to normalize against.
inline HeatmapTexture emit_heatmap(const ExposureCounts& counts) {
    HeatmapTexture heatmap;
    heatmap.max_count = counts.max_count();
    if (heatmap.max_count == 0)
        raise(ErrorKind::empty_data, "no counts recorded; heatmap undefined");
    heatmap.image = ImageRgb(palette::kWidth, palette::kHeight);
    const double inv_max = 1.0 / double(heatmap.max_count);
    for (int y = 0; y < palette::kHeight; ++y) {
        for (int x = 0; x < palette::kWidth; ++x) {
            const std::uint32_t color =
                std::uint32_t(y) * palette::kWidth + std::uint32_t(x);
            const std::uint32_t n = counts.at(color);
            heatmap.image.set_pixel(x, y, plasma(double(n) * inv_max).value);
        }
    }
    return heatmap;
}

// ---------------------------------------------------------------------------
// Raw counts file (sparse binary, sorted by color)
// ---------------------------------------------------------------------------

inline void save_counts(const std::string& path, const ExposureCounts& counts) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(ErrorKind::storage, "cannot open for write: " + path);
    const char magic[8] = {'U', 'F', 'C', 'S', 'R', 'C', 'T', '1'};
    f.write(magic, 8);
    const auto put_u64 = [&f](std::uint64_t v) {
        std::uint8_t b[8];
        for (int i = 0; i < 8; ++i) b[i] = std::uint8_t(v >> (8 * i));
        f.write(reinterpret_cast<const char*>(b), 8);
    };
    const auto put_u32 = [&f](std::uint32_t v) {
        std::uint8_t b[4];
        for (int i = 0; i < 4; ++i) b[i] = std::uint8_t(v >> (8 * i));
        f.write(reinterpret_cast<const char*>(b), 4);
    };
    put_u64(counts.images_processed);
    put_u64(counts.images_trimmed);
    put_u64(counts.distinct_colors());
    for (std::uint64_t c = 0; c < palette::kColorCount; ++c) {
        const std::uint32_t n = counts.at(std::uint32_t(c));
        if (n != 0) {
            put_u32(std::uint32_t(c));
            put_u32(n);
        }
    }
    if (!f) raise(ErrorKind::storage, "write failed: " + path);
}

inline ExposureCounts load_counts(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::storage, "cannot open: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "UFCSRCT1")
        raise(ErrorKind::format, "not a counts file: " + path);
    const auto get_u64 = [&f]() {
        std::uint8_t b[8];
        f.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
        return v;
    };
    const auto get_u32 = [&f]() {
        std::uint8_t b[4];
        f.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
        return v;
    };
    ExposureCounts counts;
    counts.images_processed = get_u64();
    counts.images_trimmed = get_u64();
    const std::uint64_t pairs = get_u64();
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const std::uint32_t color = get_u32();
        const std::uint32_t n = get_u32();
        if (!f) raise(ErrorKind::format, "truncated counts file: " + path);
        counts.set(color, n);
    }
    if (!f) raise(ErrorKind::format, "truncated counts file: " + path);
    return counts;
}

}  // namespace ufcsr

#endif  // UFCSR_ANALYZE_HPP_
