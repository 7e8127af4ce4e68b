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
// Tile capture: deterministic lossless encoding, identity-preserving file
// names, and the empty-tile trim threshold. A tile whose encoded size is at
// or below the size of a solid background tile provably holds a single
// color and can be skipped by analysis.

#ifndef UFCSR_CAPTURE_HPP_
#define UFCSR_CAPTURE_HPP_

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/png_io.hpp"
#include "ufcsr/scene.hpp"

namespace ufcsr {

/// Byte size of a solid tile under the pinned encoder; the cut line between
/// provably-empty tiles and tiles that can carry data.
struct TrimThreshold {
    std::uint64_t bytes = 0;
    int width = 0, height = 0;
};

struct CaptureRecord {
    std::string file;  // relative to the capture directory
    int frame = 0;
    char eye = 'L';
    int row = 0, col = 0;
    std::uint64_t bytes = 0;
};

struct CaptureManifest {
    int format_version = 1;
    std::string scenario;
    std::uint32_t ignore_color = palette::kDefaultIgnoreColor;
    int image_width = 0, image_height = 0;
    int tile_rows = 5, tile_cols = 5;
    double rate_hz = 0.0, duration_s = 0.0;
    int frames = 0;
    int scale_divisor = 1;
    std::string encoder;
    std::uint64_t threshold_bytes = 0;
    CameraRig rig;
    std::vector<CaptureRecord> records;
};

inline std::vector<std::uint8_t> encode_tile(const ImageRgb& tile) {
    return png::encode(tile);
}

/// Encodes a solid ignore-color tile once and returns its byte length. The
/// encoder framing makes the length independent of the solid color; that is
/// verified here against two witness colors, failing loudly if the pinned
/// settings ever stop guaranteeing it.
inline TrimThreshold compute_threshold(int width, int height,
                                       std::uint32_t ignore_color) {
    TrimThreshold thr;
    thr.width = width;
    thr.height = height;
    thr.bytes = png::encode(ImageRgb(width, height, ignore_color)).size();
    for (std::uint32_t witness : {0x000000u, 0xFFFFFFu}) {
        if (png::encode(ImageRgb(width, height, witness)).size() != thr.bytes)
            raise(ErrorKind::consistency,
                  "solid tiles of different colors encode to different sizes; "
                  "the trim threshold would be unsafe");
    }
    return thr;
}

/// A capture at or below the threshold holds no subject pixels. Shorter
/// files than the solid size can only be damaged; they are skipped too (the
/// caller logs them).
inline bool is_empty(std::uint64_t byte_length, const TrimThreshold& thr) {
    return byte_length <= thr.bytes;
}

inline bool is_empty(const CaptureRecord& record, const TrimThreshold& thr) {
    return is_empty(record.bytes, thr);
}

/// S{scenario}_f{frame:04}_{L|R}_r{row}c{col}.png — lexicographic order of
/// the names equals processing order.
inline std::string tile_file_name(const std::string& scenario, int frame,
                                  char eye, int row, int col) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "_f%04d_%c_r%dc%d.png", frame, eye, row, col);
    return "S" + scenario + buf;
}

// ---------------------------------------------------------------------------
// Manifest (the contract between capture and analysis)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json manifest_to_json(const CaptureManifest& m) {
    nlohmann::ordered_json j;
    j["format_version"] = m.format_version;
    j["scenario"] = m.scenario;
    j["ignore_color"] = m.ignore_color;
    j["image"] = {m.image_width, m.image_height};
    j["tile_grid"] = {m.tile_rows, m.tile_cols};
    j["rate_hz"] = m.rate_hz;
    j["duration_s"] = m.duration_s;
    j["frames"] = m.frames;
    j["scale_divisor"] = m.scale_divisor;
    j["encoder"] = m.encoder;
    j["threshold_bytes"] = m.threshold_bytes;
    j["rig"] = {
        {"head", {m.rig.head_xy.x, m.rig.head_xy.y}},
        {"eye_height_m", m.rig.eye_height},
        {"ipd_m", m.rig.ipd},
        {"hfov_deg", m.rig.hfov_deg},
        {"image", {m.rig.image_width, m.rig.image_height}},
    };
    auto records = nlohmann::ordered_json::array();
    for (const auto& r : m.records) {
        nlohmann::ordered_json rec;
        rec["file"] = r.file;
        rec["frame"] = r.frame;
        rec["eye"] = std::string(1, r.eye);
        rec["row"] = r.row;
        rec["col"] = r.col;
        rec["bytes"] = r.bytes;
        records.push_back(rec);
    }
    j["records"] = records;
    return j;
}

inline CaptureManifest manifest_from_json(const nlohmann::json& j) {
    CaptureManifest m;
    try {
        m.format_version = j.at("format_version").get<int>();
        m.scenario = j.at("scenario").get<std::string>();
        m.ignore_color = j.at("ignore_color").get<std::uint32_t>();
        m.image_width = j.at("image")[0].get<int>();
        m.image_height = j.at("image")[1].get<int>();
        m.tile_rows = j.at("tile_grid")[0].get<int>();
        m.tile_cols = j.at("tile_grid")[1].get<int>();
        m.rate_hz = j.at("rate_hz").get<double>();
        m.duration_s = j.at("duration_s").get<double>();
        m.frames = j.at("frames").get<int>();
        m.scale_divisor = j.at("scale_divisor").get<int>();
        m.encoder = j.at("encoder").get<std::string>();
        m.threshold_bytes = j.at("threshold_bytes").get<std::uint64_t>();
        const auto& rig = j.at("rig");
        m.rig.head_xy = {rig.at("head")[0].get<double>(),
                         rig.at("head")[1].get<double>()};
        m.rig.eye_height = rig.at("eye_height_m").get<double>();
        m.rig.ipd = rig.at("ipd_m").get<double>();
        m.rig.hfov_deg = rig.at("hfov_deg").get<double>();
        m.rig.image_width = rig.at("image")[0].get<int>();
        m.rig.image_height = rig.at("image")[1].get<int>();
        for (const auto& rec : j.at("records")) {
            CaptureRecord r;
            r.file = rec.at("file").get<std::string>();
            r.frame = rec.at("frame").get<int>();
            r.eye = rec.at("eye").get<std::string>().at(0);
            r.row = rec.at("row").get<int>();
            r.col = rec.at("col").get<int>();
            r.bytes = rec.at("bytes").get<std::uint64_t>();
            m.records.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::manifest, std::string("capture manifest: ") + e.what());
    }
    return m;
}

}  // namespace ufcsr

#endif  // UFCSR_CAPTURE_HPP_
