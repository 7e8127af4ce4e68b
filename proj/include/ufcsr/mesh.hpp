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

#ifndef UFCSR_MESH_HPP_
#define UFCSR_MESH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ufcsr/error.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/vec.hpp"

namespace ufcsr {

/// Reserved name for faces whose group matches no naming-map pattern.
inline const std::string kOthersPart = "Others";

struct MeshTriangle {
    std::uint32_t v[3] = {0, 0, 0};  // indices into LabeledMesh::vertices
    Vec2 uv[3];                      // per-corner texture coordinates in [0,1]^2
    std::uint32_t part = 0;          // index into LabeledMesh::parts
};

/// Triangle mesh with seam-unwrapped UVs and one part label per triangle.
/// Texture coordinates follow the usual bottom-left origin; the top row of
/// a 4096^2 texture corresponds to v = 1.
struct LabeledMesh {
    std::vector<Vec3> vertices;
    std::vector<MeshTriangle> triangles;
    std::vector<std::string> parts;  // id = position; order of first use
};

/// Maps a UV point into texel space: x right, y down, 4096 units across.
inline Vec2 uv_to_texel_space(Vec2 uv) {
    return {uv.x * double(palette::kWidth),
            double(palette::kHeight) - uv.y * double(palette::kHeight)};
}

/// UV of a texel's center under the same convention.
inline Vec2 texel_center_uv(TexelIndex t) {
    return {(t.x + 0.5) / double(palette::kWidth),
            (double(palette::kHeight) - (t.y + 0.5)) / double(palette::kHeight)};
}

// ---------------------------------------------------------------------------
// Part naming map: ordered glob patterns resolving mesh group names to part
// names. Plain text, one rule per line: `<pattern> -> <part name>`. First
// match wins; unmatched groups become "Others". `#` starts a comment.
// ---------------------------------------------------------------------------

struct PartNamingRule {
    std::string pattern;
    std::string part;
};

struct PartNamingMap {
    std::vector<PartNamingRule> rules;

    std::string resolve(const std::string& group) const {
        for (const auto& rule : rules)
            if (glob_match(rule.pattern, group)) return rule.part;
        return kOthersPart;
    }

    /// `*` matches any run, `?` any single character. Case-sensitive.
    static bool glob_match(const std::string& pattern, const std::string& text) {
        std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
        while (t < text.size()) {
            if (p < pattern.size() &&
                (pattern[p] == '?' || pattern[p] == text[t])) {
                ++p;
                ++t;
            } else if (p < pattern.size() && pattern[p] == '*') {
                star = p++;
                mark = t;
            } else if (star != std::string::npos) {
                p = star + 1;
                t = ++mark;
            } else {
                return false;
            }
        }
        while (p < pattern.size() && pattern[p] == '*') ++p;
        return p == pattern.size();
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

inline PartNamingMap parse_part_naming_map(const std::string& text,
                                           const std::string& origin = "<text>") {
    PartNamingMap map;
    std::size_t line_no = 0, at = 0;
    while (at <= text.size()) {
        const auto end = text.find('\n', at);
        std::string line = text.substr(at, end == std::string::npos ? end : end - at);
        at = end == std::string::npos ? text.size() + 1 : end + 1;
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos)
            raise(ErrorKind::format, origin + ":" + std::to_string(line_no) +
                                         ": expected `pattern -> part`");
        PartNamingRule rule;
        rule.pattern = detail::trim(line.substr(0, arrow));
        rule.part = detail::trim(line.substr(arrow + 2));
        if (rule.pattern.empty() || rule.part.empty())
            raise(ErrorKind::format, origin + ":" + std::to_string(line_no) +
                                         ": empty pattern or part name");
        map.rules.push_back(std::move(rule));
    }
    return map;
}

// ---------------------------------------------------------------------------
// Part table: one identification color per part, distinct from each other
// and from the background, assigned deterministically from the part order.
// ---------------------------------------------------------------------------

struct PartTable {
    std::uint32_t background = 0x000000;
    std::vector<std::string> names;        // by part id
    std::vector<ColorCode> colors;         // by part id

    int find(std::uint32_t color) const {
        for (std::size_t i = 0; i < colors.size(); ++i)
            if (colors[i].value == color) return int(i);
        return -1;
    }
};

namespace detail {

inline std::uint32_t hsv_to_rgb(double h, double s, double v) {
    const double c = v * s;
    const double hp = h * 6.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (int(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    const auto q = [m](double ch) { return std::uint32_t(std::lround((ch + m) * 255.0)); };
    return (q(r) << 16) | (q(g) << 8) | q(b);
}

}  // namespace detail

/// Spreads identification colors around the hue wheel (golden-angle steps);
/// collisions with earlier picks or the background probe forward to the next
/// free packed value.
inline PartTable make_part_table(const std::vector<std::string>& parts,
                                 std::uint32_t background = 0x000000) {
    PartTable table;
    table.background = background;
    table.names = parts;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const double hue = std::fmod(0.61803398875 * double(i) + 0.15, 1.0);
        std::uint32_t color = detail::hsv_to_rgb(hue, 0.72, 0.93);
        auto taken = [&](std::uint32_t c) {
            if (c == background) return true;
            for (const auto& used : table.colors)
                if (used.value == c) return true;
            return false;
        };
        while (taken(color)) color = (color + 1) & 0xFFFFFF;
        table.colors.push_back({color});
    }
    return table;
}

}  // namespace ufcsr

#endif  // UFCSR_MESH_HPP_
