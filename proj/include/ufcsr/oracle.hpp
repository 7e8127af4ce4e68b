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
// Brute-force visibility reference, independent of the rasterizer: each
// owned texel is mapped back to its surface point, projected into each eye,
// and ray-cast against the whole scene. Quadratic cost; desk-scale scenes
// only, enforced by a guard.

#ifndef UFCSR_ORACLE_HPP_
#define UFCSR_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ufcsr/analyze.hpp"
#include "ufcsr/camera.hpp"
#include "ufcsr/error.hpp"
#include "ufcsr/mesh.hpp"
#include "ufcsr/ownership.hpp"
#include "ufcsr/raster.hpp"
#include "ufcsr/scene.hpp"

namespace ufcsr {
namespace oracle {

inline constexpr std::size_t kMaxOwnedTexels = 50000;
inline constexpr std::size_t kMaxTriangles = 2000;
inline constexpr double kOcclusionSlack = 1e-4;  // of the segment length

/// A texel reconstructed on the subject surface, in model space; pose it
/// per frame.
struct TexelSurfacePoint {
    TexelIndex texel;
    std::int32_t triangle = 0;
    double bary[3] = {0, 0, 0};
    Vec3 model_position;
    Vec3 model_normal;  // unit, from the winding order
};

/// Inverts the UV unwrap for one texel center: solves the affine
/// texel-space -> barycentric system of the owning triangle.
inline TexelSurfacePoint texel_to_surface(const LabeledMesh& mesh,
                                          const OwnershipMap& ownership,
                                          TexelIndex texel) {
    const std::int32_t tri_id = ownership.triangle_at(texel);
    if (tri_id == kUnowned)
        raise(ErrorKind::ownership, "texel is not owned by any face");
    const MeshTriangle& tri = mesh.triangles[std::size_t(tri_id)];

    const Vec2 a = uv_to_texel_space(tri.uv[0]);
    const Vec2 b = uv_to_texel_space(tri.uv[1]);
    const Vec2 c = uv_to_texel_space(tri.uv[2]);
    const Vec2 q{texel.x + 0.5, texel.y + 0.5};
    const Vec2 e1 = b - a, e2 = c - a, d = q - a;
    const double det = cross(e1, e2);
    if (std::fabs(det) < 1e-12)
        raise(ErrorKind::geometry, "degenerate UV mapping for owning face");
    const double l1 = cross(d, e2) / det;
    const double l2 = cross(e1, d) / det;

    TexelSurfacePoint point;
    point.texel = texel;
    point.triangle = tri_id;
    point.bary[0] = 1.0 - l1 - l2;
    point.bary[1] = l1;
    point.bary[2] = l2;
    const Vec3 v0 = mesh.vertices[tri.v[0]];
    const Vec3 v1 = mesh.vertices[tri.v[1]];
    const Vec3 v2 = mesh.vertices[tri.v[2]];
    point.model_position =
        v0 * point.bary[0] + v1 * point.bary[1] + v2 * point.bary[2];
    point.model_normal = normalized(cross(v1 - v0, v2 - v0));
    return point;
}

enum class Verdict { visible, occluded, out_of_frustum, back_facing };

/// World-space triangle soup for one frame time, with subject triangle ids
/// preserved so a surface point can skip its own face.
struct PosedScene {
    std::vector<Vec3> vertices;        // 3 per triangle
    std::vector<std::int32_t> source;  // subject triangle id, or -1 occluder
};

inline PosedScene pose_scene(const LabeledMesh& subject, const Pose& pose,
                             const std::vector<WorldTriangle>& occluders) {
    PosedScene scene;
    scene.vertices.reserve(3 * (subject.triangles.size() + occluders.size()));
    for (std::size_t i = 0; i < subject.triangles.size(); ++i) {
        for (int k = 0; k < 3; ++k)
            scene.vertices.push_back(
                pose.transform(subject.vertices[subject.triangles[i].v[k]]));
        scene.source.push_back(std::int32_t(i));
    }
    for (const WorldTriangle& wt : occluders) {
        for (int k = 0; k < 3; ++k) scene.vertices.push_back(wt.p[k]);
        scene.source.push_back(kUnowned);
    }
    return scene;
}

namespace detail {

/// Segment-triangle hit with boundary hits counted as hits; deterministic
/// regardless of triangle order.
inline bool segment_hits_triangle(Vec3 origin, Vec3 dir, double t_max, Vec3 v0,
                                  Vec3 v1, Vec3 v2) {
    const Vec3 e1 = v1 - v0, e2 = v2 - v0;
    const Vec3 p = cross(dir, e2);
    const double det = dot(e1, p);
    if (std::fabs(det) < 1e-14) return false;
    const double inv = 1.0 / det;
    const Vec3 s = origin - v0;
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 q = cross(s, e1);
    const double v = dot(dir, q) * inv;
    if (v < 0.0 || u + v > 1.0) return false;
    const double t = dot(e2, q) * inv;
    return t > 1e-9 && t < t_max;
}

}  // namespace detail

/// Classifies one posed surface point against one eye. Out-of-frustum wins
/// over back-facing, back-facing over occlusion tests, mirroring the order
/// a rasterizer discards geometry in.
inline Verdict visible(Vec3 world_point, Vec3 world_normal,
                       std::int32_t own_triangle, const Camera& cam,
                       const PosedScene& scene) {
    const Vec3 c = cam.to_camera(world_point);
    if (c.z < cam.znear) return Verdict::out_of_frustum;
    const Vec2 s = cam.project_camera_space(c);
    if (s.x < 0.0 || s.x >= cam.width || s.y < 0.0 || s.y >= cam.height)
        return Verdict::out_of_frustum;

    if (dot(world_normal, world_point - cam.position) >= 0.0)
        return Verdict::back_facing;

    const Vec3 dir = world_point - cam.position;
    const double t_max = 1.0 - kOcclusionSlack;
    for (std::size_t i = 0; i < scene.source.size(); ++i) {
        if (scene.source[i] == own_triangle) continue;
        if (detail::segment_hits_triangle(cam.position, dir, t_max,
                                          scene.vertices[3 * i],
                                          scene.vertices[3 * i + 1],
                                          scene.vertices[3 * i + 2]))
            return Verdict::occluded;
    }
    return Verdict::visible;
}

struct OracleOptions {
    int scale_divisor = 1;
    bool emulate_tile_splits = false;  // count once per tile the texel shows in
};

/// End-to-end reference: for every schedule time, eye, and owned texel,
/// count the texel when its surface point is visible inside the image.
inline ExposureCounts oracle_counts(const Scenario& scenario,
                                    const LabeledMesh& mesh,
                                    const OwnershipMap& ownership,
                                    const std::vector<WorldTriangle>& occluders,
                                    const OracleOptions& options = {}) {
    std::vector<TexelSurfacePoint> points;
    for (int y = 0; y < palette::kHeight; ++y) {
        for (int x = 0; x < palette::kWidth; ++x) {
            if (ownership.triangle_at({x, y}) != kUnowned) {
                points.push_back(texel_to_surface(mesh, ownership, {x, y}));
                if (points.size() > kMaxOwnedTexels)
                    raise(ErrorKind::range,
                          "scene too large for the brute-force reference "
                          "(owned texel guard)");
            }
        }
    }
    if (mesh.triangles.size() + occluders.size() > kMaxTriangles)
        raise(ErrorKind::range,
              "scene too large for the brute-force reference (triangle guard)");

    const CameraRig rig = scaled_rig(scenario.rig, options.scale_divisor);
    const FrameSchedule schedule = frame_schedule(scenario);
    const int tile_w = rig.image_width / rig.tile_cols;
    const int tile_h = rig.image_height / rig.tile_rows;

    ExposureCounts counts;
    for (double t : schedule.times) {
        const Pose pose = evaluate_pose(scenario.trajectory, t);
        const PosedScene posed = pose_scene(mesh, pose, occluders);
        const EyePair eyes = eye_cameras(rig, pose.position);
        for (const Camera* cam : {&eyes.left, &eyes.right}) {
            for (const TexelSurfacePoint& pt : points) {
                const Vec3 world = pose.transform(pt.model_position);
                const Vec3 normal = pose.rotate(pt.model_normal);
                if (visible(world, normal, pt.triangle, *cam, posed) !=
                    Verdict::visible)
                    continue;
                const std::uint32_t color =
                    std::uint32_t(pt.texel.y) * palette::kWidth +
                    std::uint32_t(pt.texel.x);
                if (!options.emulate_tile_splits) {
                    counts.bump(color);
                    continue;
                }
                // Distinct tiles touched by the projected texel footprint
                // (approximated by its corners plus the center).
                const Vec2 center = cam->project_camera_space(cam->to_camera(world));
                bool tile_seen[25] = {};
                int n_tiles = 0;
                const auto mark = [&](Vec2 s) {
                    if (s.x < 0.0 || s.x >= cam->width || s.y < 0.0 ||
                        s.y >= cam->height)
                        return;
                    const int idx = int(s.y) / tile_h * rig.tile_cols +
                                    int(s.x) / tile_w;
                    if (!tile_seen[idx]) {
                        tile_seen[idx] = true;
                        ++n_tiles;
                    }
                };
                mark(center);
                const MeshTriangle& tri = mesh.triangles[std::size_t(pt.triangle)];
                const Vec2 a = uv_to_texel_space(tri.uv[0]);
                const Vec2 b = uv_to_texel_space(tri.uv[1]);
                const Vec2 cuv = uv_to_texel_space(tri.uv[2]);
                const double det = cross(b - a, cuv - a);
                for (const Vec2 corner :
                     {Vec2{double(pt.texel.x), double(pt.texel.y)},
                      Vec2{pt.texel.x + 1.0, double(pt.texel.y)},
                      Vec2{double(pt.texel.x), pt.texel.y + 1.0},
                      Vec2{pt.texel.x + 1.0, pt.texel.y + 1.0}}) {
                    const Vec2 d = corner - a;
                    const double l1 = cross(d, cuv - a) / det;
                    const double l2 = cross(b - a, d) / det;
                    const Vec3 model =
                        mesh.vertices[tri.v[0]] * (1.0 - l1 - l2) +
                        mesh.vertices[tri.v[1]] * l1 +
                        mesh.vertices[tri.v[2]] * l2;
                    const Vec3 cc = cam->to_camera(pose.transform(model));
                    if (cc.z >= cam->znear)
                        mark(cam->project_camera_space(cc));
                }
                for (int k = 0; k < n_tiles; ++k) counts.bump(color);
            }
        }
        counts.images_processed += 2;
    }
    return counts;
}

}  // namespace oracle
}  // namespace ufcsr

#endif  // UFCSR_ORACLE_HPP_
