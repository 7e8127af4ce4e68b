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
// Texel ownership: which face of the mesh owns each texel of the 4096^2
// texture. Baked with the same coverage rule the renderer samples with, so
// the set of colors a render can emit is exactly the owned set.

#ifndef UFCSR_OWNERSHIP_HPP_
#define UFCSR_OWNERSHIP_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ufcsr/coverage.hpp"
#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"
#include "ufcsr/mesh.hpp"
#include "ufcsr/palette.hpp"

namespace ufcsr {

inline constexpr std::int32_t kUnowned = -1;

/// Per-texel owner; the part identification texture is this plus the part
/// labels of the owning triangles.
struct OwnershipMap {
    std::vector<std::int32_t> owner_triangle;  // 4096^2 entries, kUnowned if free
    std::vector<std::int32_t> part;            // derived from owner_triangle

    std::int32_t triangle_at(TexelIndex t) const {
        return owner_triangle[std::size_t(t.y) * palette::kWidth + t.x];
    }
    std::int32_t part_at(TexelIndex t) const {
        return part[std::size_t(t.y) * palette::kWidth + t.x];
    }
};

struct TexelOverlap {
    TexelIndex texel;
    std::int32_t first_triangle = 0;
    std::int32_t second_triangle = 0;
};

namespace detail {

struct OwnershipRaster {
    OwnershipMap map;
    std::vector<TexelOverlap> overlaps;
};

inline OwnershipRaster rasterize_ownership(const LabeledMesh& mesh) {
    OwnershipRaster out;
    const std::size_t n = std::size_t(palette::kWidth) * palette::kHeight;
    out.map.owner_triangle.assign(n, kUnowned);
    out.map.part.assign(n, kUnowned);
    for (std::size_t tri = 0; tri < mesh.triangles.size(); ++tri) {
        const MeshTriangle& mt = mesh.triangles[tri];
        const std::array<coverage::SnappedVertex, 3> v = {
            coverage::snap(uv_to_texel_space(mt.uv[0])),
            coverage::snap(uv_to_texel_space(mt.uv[1])),
            coverage::snap(uv_to_texel_space(mt.uv[2]))};
        coverage::walk_triangle(
            v, palette::kWidth, palette::kHeight,
            [&](int x, int y, std::int64_t, std::int64_t, std::int64_t,
                std::int64_t) {
                const std::size_t at = std::size_t(y) * palette::kWidth + x;
                if (out.map.owner_triangle[at] != kUnowned) {
                    out.overlaps.push_back({{x, y},
                                            out.map.owner_triangle[at],
                                            std::int32_t(tri)});
                    return;
                }
                out.map.owner_triangle[at] = std::int32_t(tri);
                out.map.part[at] = std::int32_t(mt.part);
            });
    }
    return out;
}

}  // namespace detail

/// Deterministic texel -> face assignment for the whole texture. Two faces
/// claiming one texel is a layout defect and throws.
inline OwnershipMap texel_ownership(const LabeledMesh& mesh) {
    auto raster = detail::rasterize_ownership(mesh);
    if (!raster.overlaps.empty()) {
        std::string msg = "UV layout overlap at texels:";
        const std::size_t shown = std::min<std::size_t>(raster.overlaps.size(), 8);
        for (std::size_t i = 0; i < shown; ++i)
            msg += " (" + std::to_string(raster.overlaps[i].texel.x) + "," +
                   std::to_string(raster.overlaps[i].texel.y) + ")";
        if (raster.overlaps.size() > shown)
            msg += " ... " + std::to_string(raster.overlaps.size()) + " total";
        raise(ErrorKind::overlap, msg);
    }
    return std::move(raster.map);
}

// ---------------------------------------------------------------------------
// Layout validation
// ---------------------------------------------------------------------------

struct UvValidationReport {
    bool valid = true;
    std::vector<TexelOverlap> overlaps;
    // Empty texels strictly between the two closest distinct UV islands
    // (triangles joined through shared UV corners form one island); absent
    // when fewer than two islands own texels.
    std::optional<int> min_margin;
    std::vector<std::string> warnings;
};

namespace detail {

/// Union-find island labels: triangles sharing an exact UV corner belong to
/// the same unwrapped face.
inline std::vector<std::int32_t> uv_island_labels(const LabeledMesh& mesh) {
    std::vector<std::int32_t> parent(mesh.triangles.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = std::int32_t(i);
    const std::function<std::int32_t(std::int32_t)> find =
        [&](std::int32_t a) -> std::int32_t {
        while (parent[std::size_t(a)] != a) {
            parent[std::size_t(a)] = parent[std::size_t(parent[std::size_t(a)])];
            a = parent[std::size_t(a)];
        }
        return a;
    };
    std::unordered_map<std::uint64_t, std::int32_t> corner_owner;
    corner_owner.reserve(mesh.triangles.size() * 3);
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        for (const Vec2& uv : mesh.triangles[i].uv) {
            std::uint64_t key = 0;
            std::uint64_t bits;
            static_assert(sizeof(double) == 8);
            std::memcpy(&bits, &uv.x, 8);
            key = bits * 1099511628211ull;
            std::memcpy(&bits, &uv.y, 8);
            key ^= bits + 0x9e3779b97f4a7c15ull + (key << 6) + (key >> 2);
            auto [it, inserted] = corner_owner.emplace(key, std::int32_t(i));
            if (!inserted) {
                const std::int32_t ra = find(it->second);
                const std::int32_t rb = find(std::int32_t(i));
                if (ra != rb) parent[std::size_t(rb)] = ra;
            }
        }
    }
    std::vector<std::int32_t> label(mesh.triangles.size());
    for (std::size_t i = 0; i < label.size(); ++i)
        label[i] = find(std::int32_t(i));
    return label;
}

}  // namespace detail

/// Reports (never throws) on overlaps and the tightest inter-island gap.
/// Margins below one texel draw a warning; the layout convention relies on
/// seams leaving space between faces.
inline UvValidationReport validate_uv_layout(const LabeledMesh& mesh) {
    auto raster = detail::rasterize_ownership(mesh);
    UvValidationReport report;
    report.overlaps = std::move(raster.overlaps);
    report.valid = report.overlaps.empty();
    if (!report.valid)
        report.warnings.push_back(
            std::to_string(report.overlaps.size()) +
            " texel(s) claimed by two faces; seams must separate faces");

    const std::vector<std::int32_t> island = detail::uv_island_labels(mesh);

    // Chebyshev distance transform toward the nearest owned texel, keeping
    // the owning island as a label; the margin between two islands is
    // realized along the boundary where the two label regions meet.
    const int w = palette::kWidth, h = palette::kHeight;
    constexpr int kFar = 1 << 20;
    std::vector<std::int32_t> dist(std::size_t(w) * h, kFar);
    std::vector<std::int32_t> label(std::size_t(w) * h, kUnowned);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (raster.map.owner_triangle[i] != kUnowned) {
            dist[i] = 0;
            label[i] = island[std::size_t(raster.map.owner_triangle[i])];
        }
    }
    const auto relax = [&](std::size_t at, std::size_t from) {
        if (dist[from] + 1 < dist[at]) {
            dist[at] = dist[from] + 1;
            label[at] = label[from];
        }
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t at = std::size_t(y) * w + x;
            if (x > 0) relax(at, at - 1);
            if (y > 0) {
                relax(at, at - w);
                if (x > 0) relax(at, at - w - 1);
                if (x + 1 < w) relax(at, at - w + 1);
            }
        }
    }
    for (int y = h - 1; y >= 0; --y) {
        for (int x = w - 1; x >= 0; --x) {
            const std::size_t at = std::size_t(y) * w + x;
            if (x + 1 < w) relax(at, at + 1);
            if (y + 1 < h) {
                relax(at, at + w);
                if (x + 1 < w) relax(at, at + w + 1);
                if (x > 0) relax(at, at + w - 1);
            }
        }
    }
    int best = kFar;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t at = std::size_t(y) * w + x;
            if (label[at] == kUnowned) continue;
            const auto consider = [&](std::size_t other) {
                if (label[other] != kUnowned && label[other] != label[at])
                    best = std::min(best, dist[at] + dist[other]);
            };
            if (x + 1 < w) consider(at + 1);
            if (y + 1 < h) {
                consider(at + w);
                if (x + 1 < w) consider(at + w + 1);
                if (x > 0) consider(at + w - 1);
            }
        }
    }
    if (best < kFar) {
        report.min_margin = best;
        if (best < 1)
            report.warnings.push_back(
                "inter-face margin below one texel; colors may sit flush");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Census and part identification texture
// ---------------------------------------------------------------------------

struct TexelCensus {
    std::vector<std::uint64_t> per_part;  // indexed by part id
    std::uint64_t total_owned = 0;
};

inline TexelCensus census(const OwnershipMap& map, std::size_t part_count) {
    TexelCensus c;
    c.per_part.assign(part_count, 0);
    for (std::int32_t part : map.part) {
        if (part == kUnowned) continue;
        ++c.per_part[std::size_t(part)];
        ++c.total_owned;
    }
    return c;
}

/// Renders the ownership map as an image: each texel carries its part's
/// identification color, unowned texels the background color.
inline ImageRgb bake_pidt_image(const OwnershipMap& map, const PartTable& table) {
    ImageRgb img(palette::kWidth, palette::kHeight, table.background);
    for (int y = 0; y < palette::kHeight; ++y) {
        for (int x = 0; x < palette::kWidth; ++x) {
            const std::int32_t part = map.part_at({x, y});
            if (part != kUnowned)
                img.set_pixel(x, y, table.colors[std::size_t(part)].value);
        }
    }
    return img;
}

/// Set of colors a render of this mesh may emit (besides the ignore color).
inline palette::ColorSet owned_colors(const OwnershipMap& map) {
    palette::ColorSet set;
    for (std::size_t i = 0; i < map.owner_triangle.size(); ++i)
        if (map.owner_triangle[i] != kUnowned) set.insert(std::uint32_t(i));
    return set;
}

// ---------------------------------------------------------------------------
// PIdT artifact: image + sidecar table
// ---------------------------------------------------------------------------

struct PidtSidecar {
    std::uint32_t background = 0;
    std::vector<std::string> names;
    std::vector<std::uint32_t> colors;
    std::vector<std::uint64_t> texels;
    std::uint64_t total_owned = 0;
};

inline nlohmann::ordered_json pidt_sidecar_to_json(const PidtSidecar& s) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["background_color"] = s.background;
    j["total_owned_texels"] = s.total_owned;
    auto parts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        nlohmann::ordered_json p;
        p["id"] = i;
        p["name"] = s.names[i];
        p["color"] = s.colors[i];
        p["texels"] = s.texels[i];
        parts.push_back(p);
    }
    j["parts"] = parts;
    return j;
}

inline PidtSidecar pidt_sidecar_from_json(const nlohmann::json& j) {
    PidtSidecar s;
    try {
        s.background = j.at("background_color").get<std::uint32_t>();
        s.total_owned = j.at("total_owned_texels").get<std::uint64_t>();
        for (const auto& p : j.at("parts")) {
            if (p.at("id").get<std::size_t>() != s.names.size())
                raise(ErrorKind::format, "part table ids must be dense");
            s.names.push_back(p.at("name").get<std::string>());
            s.colors.push_back(p.at("color").get<std::uint32_t>());
            s.texels.push_back(p.at("texels").get<std::uint64_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::format, std::string("part table sidecar: ") + e.what());
    }
    return s;
}

inline PidtSidecar make_pidt_sidecar(const LabeledMesh& mesh,
                                     const PartTable& table,
                                     const TexelCensus& cen) {
    PidtSidecar s;
    s.background = table.background;
    s.total_owned = cen.total_owned;
    s.names = mesh.parts;
    for (const auto& c : table.colors) s.colors.push_back(c.value);
    s.texels = cen.per_part;
    return s;
}

/// Recovers per-texel part ids from a baked PIdT image and its sidecar.
/// Unknown colors or counts that contradict the sidecar are consistency
/// errors — the image and table must describe the same bake.
inline std::vector<std::int32_t> parse_pidt(const ImageRgb& img,
                                            const PidtSidecar& sidecar) {
    if (img.width() != palette::kWidth || img.height() != palette::kHeight)
        raise(ErrorKind::consistency, "part identification texture has wrong size");
    std::vector<std::int32_t> color_to_part(palette::kColorCount, kUnowned);
    for (std::size_t i = 0; i < sidecar.colors.size(); ++i) {
        if (sidecar.colors[i] == sidecar.background ||
            color_to_part[sidecar.colors[i]] != kUnowned)
            raise(ErrorKind::consistency, "part identification colors collide");
        color_to_part[sidecar.colors[i]] = std::int32_t(i);
    }
    std::vector<std::int32_t> part(std::size_t(palette::kWidth) * palette::kHeight,
                                   kUnowned);
    std::vector<std::uint64_t> seen(sidecar.names.size(), 0);
    for (int y = 0; y < palette::kHeight; ++y) {
        for (int x = 0; x < palette::kWidth; ++x) {
            const std::uint32_t c = img.pixel(x, y);
            if (c == sidecar.background) continue;
            const std::int32_t p = color_to_part[c];
            if (p == kUnowned)
                raise(ErrorKind::consistency,
                      "texture color not present in the part table");
            part[std::size_t(y) * palette::kWidth + x] = p;
            ++seen[std::size_t(p)];
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i] != sidecar.texels[i])
            raise(ErrorKind::consistency,
                  "texel census disagrees with the part table sidecar");
    return part;
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) raise(ErrorKind::storage, "cannot open for write: " + path);
    f << j.dump(2) << '\n';
    if (!f) raise(ErrorKind::storage, "write failed: " + path);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::storage, "cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::format, path + ": " + e.what());
    }
    return j;
}

}  // namespace ufcsr

#endif  // UFCSR_OWNERSHIP_HPP_
