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
// Per-pixel ray-casting reference for render tests. Shares no code with the
// rasterizer: rays through pixel centers, nearest-hit search, affine UV from
// barycentrics. Pixels whose color survives sub-pixel jitter are "stable"
// and must match the rasterizer exactly; everything else sits on a boundary
// where either result is legitimate.

#ifndef UFCSR_TESTS_RAYCAST_REFERENCE_HPP_
#define UFCSR_TESTS_RAYCAST_REFERENCE_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ufcsr/camera.hpp"
#include "ufcsr/mesh.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/raster.hpp"
#include "ufcsr/scene.hpp"

namespace raycast_ref {

using namespace ufcsr;

struct RefTriangle {
    Vec3 p[3];
    Vec2 uv[3];
    bool textured = false;
};

inline std::vector<RefTriangle> gather_triangles(const RenderScene& scene,
                                                 const Pose& pose) {
    std::vector<RefTriangle> tris;
    if (scene.subject != nullptr) {
        for (const MeshTriangle& mt : scene.subject->triangles) {
            RefTriangle rt;
            for (int i = 0; i < 3; ++i) {
                rt.p[i] = pose.transform(scene.subject->vertices[mt.v[i]]);
                rt.uv[i] = mt.uv[i];
            }
            rt.textured = true;
            tris.push_back(rt);
        }
    }
    for (const WorldTriangle& wt : scene.occluders)
        tris.push_back({{wt.p[0], wt.p[1], wt.p[2]}, {}, false});
    return tris;
}

/// Color seen along the ray through image point (sx, sy); ignore color when
/// nothing is hit.
inline std::uint32_t trace(const std::vector<RefTriangle>& tris,
                           const RenderScene& scene, const Camera& cam,
                           double sx, double sy) {
    const Vec3 dir = cam.right * ((sx - cam.cx()) / cam.focal_px) +
                     cam.up * (-(sy - cam.cy()) / cam.focal_px) + cam.forward;
    double best_t = 1e300;
    const RefTriangle* best = nullptr;
    double best_b1 = 0, best_b2 = 0;
    for (const RefTriangle& tri : tris) {
        const Vec3 n = cross(tri.p[1] - tri.p[0], tri.p[2] - tri.p[0]);
        if (dot(n, cam.position - tri.p[0]) <= 0.0) continue;  // back face
        const Vec3 e1 = tri.p[1] - tri.p[0], e2 = tri.p[2] - tri.p[0];
        const Vec3 pv = cross(dir, e2);
        const double det = dot(e1, pv);
        if (std::fabs(det) < 1e-16) continue;
        const double inv = 1.0 / det;
        const Vec3 s = cam.position - tri.p[0];
        const double b1 = dot(s, pv) * inv;
        if (b1 < 0.0 || b1 > 1.0) continue;
        const Vec3 qv = cross(s, e1);
        const double b2 = dot(dir, qv) * inv;
        if (b2 < 0.0 || b1 + b2 > 1.0) continue;
        const double t = dot(e2, qv) * inv;
        if (t > cam.znear && t < best_t) {
            best_t = t;
            best = &tri;
            best_b1 = b1;
            best_b2 = b2;
        }
    }
    if (best == nullptr) return scene.ignore_color;
    if (!best->textured) return scene.ignore_color;
    const double u = best->uv[0].x * (1 - best_b1 - best_b2) +
                     best->uv[1].x * best_b1 + best->uv[2].x * best_b2;
    const double v = best->uv[0].y * (1 - best_b1 - best_b2) +
                     best->uv[1].y * best_b1 + best->uv[2].y * best_b2;
    const Vec2 ts = uv_to_texel_space({u, v});
    int tx = int(std::floor(ts.x));
    int ty = int(std::floor(ts.y));
    tx = std::min(std::max(tx, 0), palette::kWidth - 1);
    ty = std::min(std::max(ty, 0), palette::kHeight - 1);
    const std::uint32_t texel = std::uint32_t(ty) * palette::kWidth + tx;
    return scene.owned->contains(texel) ? texel : scene.ignore_color;
}

/// Reference color at a pixel when all jittered samples agree, else nullopt
/// (boundary pixel).
inline std::optional<std::uint32_t> stable_color(
    const std::vector<RefTriangle>& tris, const RenderScene& scene,
    const Camera& cam, int px, int py, double jitter = 0.35) {
    const double cx = px + 0.5, cy = py + 0.5;
    const std::uint32_t center = trace(tris, scene, cam, cx, cy);
    for (const auto& [dx, dy] :
         {std::pair{-jitter, -jitter}, {jitter, -jitter}, {-jitter, jitter},
          {jitter, jitter}}) {
        if (trace(tris, scene, cam, cx + dx, cy + dy) != center)
            return std::nullopt;
    }
    return center;
}

/// Compares a rendered frame against the reference: every stable pixel must
/// match exactly. Returns the number of stable pixels checked.
inline std::size_t check_frame_against_reference(const Frame& frame,
                                                 const RenderScene& scene,
                                                 const Pose& pose,
                                                 const Camera& cam,
                                                 std::size_t* mismatches) {
    const auto tris = gather_triangles(scene, pose);
    std::size_t stable = 0;
    *mismatches = 0;
    for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
            const auto want = stable_color(tris, scene, cam, x, y);
            if (!want.has_value()) continue;
            ++stable;
            if (frame.pixels.pixel(x, y) != *want) ++(*mismatches);
        }
    }
    return stable;
}

}  // namespace raycast_ref

#endif  // UFCSR_TESTS_RAYCAST_REFERENCE_HPP_
