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
// The one coverage rule shared by UV-space texel baking and screen-space
// rasterization: vertices snap to a 1/16 sub-cell grid, a cell is covered
// when its center passes the integer edge functions, and exact ties on an
// edge count only for top and left edges. Integer arithmetic makes shared
// edges partition cells with no gaps or double hits, independent of
// evaluation order.

#ifndef UFCSR_COVERAGE_HPP_
#define UFCSR_COVERAGE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "ufcsr/vec.hpp"

namespace ufcsr {
namespace coverage {

inline constexpr int kSubBits = 4;
inline constexpr std::int64_t kSub = 1 << kSubBits;  // sub-cells per cell

struct SnappedVertex {
    std::int64_t x = 0;
    std::int64_t y = 0;
};

inline SnappedVertex snap(Vec2 p) {
    return {std::llround(p.x * double(kSub)), std::llround(p.y * double(kSub))};
}

namespace detail {

// Ties count on top edges (horizontal, interior below) and left edges
// (pointing up in raster orientation). With y growing downward and the
// positive-area winding used here, that is dy == 0 ? dx > 0 : dy < 0.
inline bool tie_accepts(std::int64_t dx, std::int64_t dy) {
    return dy == 0 ? dx > 0 : dy < 0;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

}  // namespace detail

/// Walks every covered cell of the triangle within [0,width) x [0,height).
/// `emit(x, y, w0, w1, w2, area2)` receives integer barycentric weights in
/// the caller's vertex order; they sum to area2 > 0. Degenerate triangles
/// emit nothing.
template <typename Emit>
void walk_triangle(std::array<SnappedVertex, 3> v, int width, int height,
                   Emit&& emit) {
    bool swapped = false;
    std::int64_t area2 = (v[1].x - v[0].x) * (v[2].y - v[0].y) -
                         (v[1].y - v[0].y) * (v[2].x - v[0].x);
    if (area2 == 0) return;
    if (area2 < 0) {
        std::swap(v[1], v[2]);
        area2 = -area2;
        swapped = true;
    }

    const std::int64_t min_x = std::min({v[0].x, v[1].x, v[2].x});
    const std::int64_t max_x = std::max({v[0].x, v[1].x, v[2].x});
    const std::int64_t min_y = std::min({v[0].y, v[1].y, v[2].y});
    const std::int64_t max_y = std::max({v[0].y, v[1].y, v[2].y});

    // Cell (px, py) is tested at center (kSub*px + kSub/2, kSub*py + kSub/2).
    const std::int64_t half = kSub / 2;
    std::int64_t px0 = detail::ceil_div(min_x - half, kSub);
    std::int64_t px1 = detail::floor_div(max_x - half, kSub);
    std::int64_t py0 = detail::ceil_div(min_y - half, kSub);
    std::int64_t py1 = detail::floor_div(max_y - half, kSub);
    px0 = std::max<std::int64_t>(px0, 0);
    py0 = std::max<std::int64_t>(py0, 0);
    px1 = std::min<std::int64_t>(px1, width - 1);
    py1 = std::min<std::int64_t>(py1, height - 1);
    if (px0 > px1 || py0 > py1) return;

    struct Edge {
        std::int64_t dx, dy;   // b - a
        std::int64_t at_origin;  // E at the first tested center
        bool tie_ok;
    };
    std::array<Edge, 3> edges;
    const std::int64_t sx = kSub * px0 + half;
    const std::int64_t sy = kSub * py0 + half;
    for (int i = 0; i < 3; ++i) {
        const SnappedVertex& a = v[(i + 1) % 3];
        const SnappedVertex& b = v[(i + 2) % 3];
        // edges[i] vanishes on the edge opposite vertex i, so its value is
        // the (unnormalized) weight of vertex i.
        edges[i].dx = b.x - a.x;
        edges[i].dy = b.y - a.y;
        edges[i].at_origin =
            edges[i].dx * (sy - a.y) - edges[i].dy * (sx - a.x);
        edges[i].tie_ok = detail::tie_accepts(edges[i].dx, edges[i].dy);
    }

    for (std::int64_t py = py0; py <= py1; ++py) {
        std::array<std::int64_t, 3> w;
        for (int i = 0; i < 3; ++i)
            w[i] = edges[i].at_origin + edges[i].dx * kSub * (py - py0);
        for (std::int64_t px = px0; px <= px1; ++px) {
            bool inside = true;
            for (int i = 0; i < 3 && inside; ++i)
                inside = w[i] > 0 || (w[i] == 0 && edges[i].tie_ok);
            if (inside) {
                if (swapped)
                    emit(int(px), int(py), w[0], w[2], w[1], area2);
                else
                    emit(int(px), int(py), w[0], w[1], w[2], area2);
            }
            for (int i = 0; i < 3; ++i) w[i] -= edges[i].dy * kSub;
        }
    }
}

}  // namespace coverage
}  // namespace ufcsr

#endif  // UFCSR_COVERAGE_HPP_
