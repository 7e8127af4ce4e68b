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
// Deterministic unlit software renderer. One sample per pixel, z-buffered,
// perspective-correct texel lookup, no blending of any kind: every output
// pixel is either the ignore color or the exact color of one owned texel.
// Subject fragments resolve their texel through the baked ownership set, so
// a frame can never emit a color outside the owned set.

#ifndef UFCSR_RASTER_HPP_
#define UFCSR_RASTER_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ufcsr/camera.hpp"
#include "ufcsr/coverage.hpp"
#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"
#include "ufcsr/mesh.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/scene.hpp"

namespace ufcsr {

struct WorldTriangle {
    Vec3 p[3];
    Vec2 uv[3];
    bool textured = false;
};

struct FrameMeta {
    std::string scenario;
    int frame_index = 0;
    char eye = 'L';
    double time = 0.0;
};

struct Frame {
    ImageRgb pixels;
    std::vector<float> inv_depth;  // 1/z per pixel; 0 where nothing drew
    FrameMeta meta;
};

// ---------------------------------------------------------------------------
// Clipping
// ---------------------------------------------------------------------------

struct ClipVertex {
    Vec3 cam;  // camera-space position, z forward
    double u = 0.0, v = 0.0;
};

struct ClippedTriangle {
    ClipVertex v[3];
};

namespace detail {

struct ClipPlane {
    // dot((x,y,z), n) + d >= 0 keeps the vertex
    Vec3 n;
    double d;
};

inline void clip_polygon(std::vector<ClipVertex>& poly, const ClipPlane& plane,
                         std::vector<ClipVertex>& scratch) {
    scratch.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ClipVertex& a = poly[i];
        const ClipVertex& b = poly[(i + 1) % n];
        const double da = dot(a.cam, plane.n) + plane.d;
        const double db = dot(b.cam, plane.n) + plane.d;
        if (da >= 0.0) scratch.push_back(a);
        if ((da >= 0.0) != (db >= 0.0)) {
            const double t = da / (da - db);
            ClipVertex m;
            m.cam = a.cam + (b.cam - a.cam) * t;
            m.u = a.u + (b.u - a.u) * t;
            m.v = a.v + (b.v - a.v) * t;
            scratch.push_back(m);
        }
    }
    poly.swap(scratch);
}

}  // namespace detail

/// Culls back faces (counter-clockwise front, seen from outside) and clips
/// against the near plane plus a wide guard band, splitting as needed.
/// Winding is preserved; output triangles fan from the clipped polygon.
inline std::vector<ClippedTriangle> backface_and_clip(const WorldTriangle& tri,
                                                      const Camera& cam) {
    for (const Vec3& p : tri.p)
        if (!finite(p)) raise(ErrorKind::geometry, "non-finite vertex");

    const Vec3 normal = cross(tri.p[1] - tri.p[0], tri.p[2] - tri.p[0]);
    if (dot(normal, cam.position - tri.p[0]) <= 0.0) return {};

    std::vector<ClipVertex> poly(3);
    for (int i = 0; i < 3; ++i) {
        poly[i].cam = cam.to_camera(tri.p[i]);
        poly[i].u = tri.uv[i].x;
        poly[i].v = tri.uv[i].y;
    }

    // Guard planes sit far outside the viewport: they bound snapped
    // coordinates without touching visible coverage.
    const double gx = 8.0 * cam.cx() / cam.focal_px;
    const double gy = 8.0 * cam.cy() / cam.focal_px;
    const detail::ClipPlane planes[5] = {
        {{0, 0, 1}, -cam.znear},
        {{1, 0, gx}, 0.0},
        {{-1, 0, gx}, 0.0},
        {{0, 1, gy}, 0.0},
        {{0, -1, gy}, 0.0},
    };
    std::vector<ClipVertex> scratch;
    for (const auto& plane : planes) {
        detail::clip_polygon(poly, plane, scratch);
        if (poly.size() < 3) return {};
    }

    std::vector<ClippedTriangle> out;
    for (std::size_t i = 2; i < poly.size(); ++i)
        out.push_back({{poly[0], poly[i - 1], poly[i]}});
    return out;
}

// ---------------------------------------------------------------------------
// Scene geometry
// ---------------------------------------------------------------------------

inline void append_box(std::vector<WorldTriangle>& out, const OccluderBox& box) {
    const double c = std::cos(box.yaw), s = std::sin(box.yaw);
    const auto corner = [&](double ux, double uy, double uz) {
        const double x = ux * box.size.x * 0.5, y = uy * box.size.y * 0.5;
        return Vec3{x * c + y * s + box.center.x, -x * s + y * c + box.center.y,
                    uz * box.size.z * 0.5 + box.center.z};
    };
    // Quads wound counter-clockwise seen from outside the box.
    static const int faces[6][4][3] = {
        {{1, -1, -1}, {1, 1, -1}, {1, 1, 1}, {1, -1, 1}},      // +x
        {{-1, 1, -1}, {-1, -1, -1}, {-1, -1, 1}, {-1, 1, 1}},  // -x
        {{1, 1, -1}, {-1, 1, -1}, {-1, 1, 1}, {1, 1, 1}},      // +y
        {{-1, -1, -1}, {1, -1, -1}, {1, -1, 1}, {-1, -1, 1}},  // -y
        {{-1, -1, 1}, {1, -1, 1}, {1, 1, 1}, {-1, 1, 1}},      // +z
        {{-1, 1, -1}, {1, 1, -1}, {1, -1, -1}, {-1, -1, -1}},  // -z
    };
    for (const auto& f : faces) {
        const Vec3 q[4] = {corner(f[0][0], f[0][1], f[0][2]),
                           corner(f[1][0], f[1][1], f[1][2]),
                           corner(f[2][0], f[2][1], f[2][2]),
                           corner(f[3][0], f[3][1], f[3][2])};
        out.push_back({{q[0], q[1], q[2]}, {}, false});
        out.push_back({{q[0], q[2], q[3]}, {}, false});
    }
}

/// Positions-only OBJ read for occluder geometry (no UVs required).
inline std::vector<WorldTriangle> load_occluder_mesh(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::format, "cannot open occluder mesh: " + path);
    std::vector<Vec3> verts;
    std::vector<WorldTriangle> tris;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z))
                raise(ErrorKind::format, path + ": malformed vertex");
            verts.push_back(p);
        } else if (tag == "f") {
            std::vector<std::size_t> idx;
            std::string token;
            while (ls >> token) {
                const long raw = std::stol(token.substr(0, token.find('/')));
                const long r = raw > 0 ? raw - 1 : long(verts.size()) + raw;
                if (r < 0 || std::size_t(r) >= verts.size())
                    raise(ErrorKind::format, path + ": face index out of range");
                idx.push_back(std::size_t(r));
            }
            for (std::size_t i = 2; i < idx.size(); ++i)
                tris.push_back(
                    {{verts[idx[0]], verts[idx[i - 1]], verts[idx[i]]}, {}, false});
        }
    }
    return tris;
}

/// Everything render_frame needs besides the camera and the pose.
struct RenderScene {
    const LabeledMesh* subject = nullptr;
    const palette::ColorSet* owned = nullptr;     // baked ownership
    std::vector<WorldTriangle> occluders;         // static, world space
    std::uint32_t ignore_color = palette::kDefaultIgnoreColor;
};

// ---------------------------------------------------------------------------
// Rasterization
// ---------------------------------------------------------------------------

namespace detail {

struct ProjectedVertex {
    coverage::SnappedVertex s;
    double inv_z;
    double u_over_z, v_over_z;
};

template <bool Textured>
inline void raster_clipped(Frame& frame, const Camera& cam,
                           const ClippedTriangle& tri,
                           const palette::ColorSet* owned,
                           std::uint32_t ignore_color) {
    std::array<ProjectedVertex, 3> pv;
    for (int i = 0; i < 3; ++i) {
        const Vec3& c = tri.v[i].cam;
        const Vec2 screen = cam.project_camera_space(c);
        pv[i].s = coverage::snap(screen);
        pv[i].inv_z = 1.0 / c.z;
        pv[i].u_over_z = tri.v[i].u * pv[i].inv_z;
        pv[i].v_over_z = tri.v[i].v * pv[i].inv_z;
    }
    ImageRgb& img = frame.pixels;
    std::vector<float>& depth = frame.inv_depth;
    const int width = img.width();
    coverage::walk_triangle(
        {pv[0].s, pv[1].s, pv[2].s}, width, img.height(),
        [&](int x, int y, std::int64_t w0, std::int64_t w1, std::int64_t w2,
            std::int64_t area2) {
            const double inv_z = (double(w0) * pv[0].inv_z + double(w1) * pv[1].inv_z +
                                  double(w2) * pv[2].inv_z) /
                                 double(area2);
            const std::size_t at = std::size_t(y) * width + x;
            if (!(inv_z > depth[at])) return;
            depth[at] = float(inv_z);
            std::uint32_t color = ignore_color;
            if constexpr (Textured) {
                const double wz = inv_z * double(area2);
                const double u = (double(w0) * pv[0].u_over_z +
                                  double(w1) * pv[1].u_over_z +
                                  double(w2) * pv[2].u_over_z) /
                                 wz;
                const double v = (double(w0) * pv[0].v_over_z +
                                  double(w1) * pv[1].v_over_z +
                                  double(w2) * pv[2].v_over_z) /
                                 wz;
                const Vec2 ts = uv_to_texel_space({u, v});
                int tx = int(std::floor(ts.x));
                int ty = int(std::floor(ts.y));
                tx = std::min(std::max(tx, 0), palette::kWidth - 1);
                ty = std::min(std::max(ty, 0), palette::kHeight - 1);
                const std::uint32_t texel =
                    std::uint32_t(ty) * palette::kWidth + std::uint32_t(tx);
                if (owned->contains(texel)) color = texel;
            }
            img.set_pixel(x, y, color);
        });
}

inline void raster_world_triangle(Frame& frame, const Camera& cam,
                                  const WorldTriangle& tri,
                                  const palette::ColorSet* owned,
                                  std::uint32_t ignore_color) {
    for (const ClippedTriangle& ct : backface_and_clip(tri, cam)) {
        if (tri.textured)
            raster_clipped<true>(frame, cam, ct, owned, ignore_color);
        else
            raster_clipped<false>(frame, cam, ct, owned, ignore_color);
    }
}

}  // namespace detail

/// Renders one eye's view of the scene at the given subject pose. Subject
/// triangles draw their owned texel colors; occluders and background carry
/// the ignore color. Bit-identical for identical inputs.
inline Frame render_frame(const RenderScene& scene, const Pose& subject_pose,
                          const Camera& cam, FrameMeta meta) {
    Frame frame;
    frame.meta = meta;
    frame.pixels = ImageRgb(cam.width, cam.height, scene.ignore_color);
    frame.inv_depth.assign(std::size_t(cam.width) * cam.height, 0.0f);

    if (scene.subject != nullptr) {
        for (const MeshTriangle& mt : scene.subject->triangles) {
            WorldTriangle wt;
            for (int i = 0; i < 3; ++i) {
                wt.p[i] = subject_pose.transform(scene.subject->vertices[mt.v[i]]);
                wt.uv[i] = mt.uv[i];
            }
            wt.textured = true;
            detail::raster_world_triangle(frame, cam, wt, scene.owned,
                                          scene.ignore_color);
        }
    }
    for (const WorldTriangle& wt : scene.occluders)
        detail::raster_world_triangle(frame, cam, wt, scene.owned,
                                      scene.ignore_color);
    return frame;
}

// ---------------------------------------------------------------------------
// Tiling
// ---------------------------------------------------------------------------

struct Tile {
    ImageRgb pixels;
    int row = 0, col = 0;
};

/// Splits the frame into a rows x cols grid, row-major. Exact partition:
/// stitching the tiles back together reproduces the frame byte for byte.
inline std::vector<Tile> split_tiles(const ImageRgb& frame, int rows = 5,
                                     int cols = 5) {
    if (rows <= 0 || cols <= 0 || frame.width() % cols != 0 ||
        frame.height() % rows != 0)
        raise(ErrorKind::tiling, "frame dimensions do not split into the tile grid");
    const int tw = frame.width() / cols;
    const int th = frame.height() / rows;
    std::vector<Tile> tiles;
    tiles.reserve(std::size_t(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Tile tile;
            tile.row = r;
            tile.col = c;
            tile.pixels = ImageRgb(tw, th);
            for (int y = 0; y < th; ++y) {
                const std::uint8_t* src =
                    frame.bytes().data() +
                    ((std::size_t(r) * th + y) * frame.width() +
                     std::size_t(c) * tw) *
                        3;
                std::uint8_t* dst =
                    tile.pixels.bytes().data() + std::size_t(y) * tw * 3;
                std::copy(src, src + std::size_t(tw) * 3, dst);
            }
            tiles.push_back(std::move(tile));
        }
    }
    return tiles;
}

/// Inverse of split_tiles, for verification.
inline ImageRgb assemble_tiles(const std::vector<Tile>& tiles, int rows = 5,
                               int cols = 5) {
    if (tiles.empty() || tiles.size() != std::size_t(rows) * cols)
        raise(ErrorKind::tiling, "tile set does not fill the grid");
    const int tw = tiles.front().pixels.width();
    const int th = tiles.front().pixels.height();
    ImageRgb frame(tw * cols, th * rows);
    for (const Tile& tile : tiles) {
        for (int y = 0; y < th; ++y) {
            const std::uint8_t* src =
                tile.pixels.bytes().data() + std::size_t(y) * tw * 3;
            std::uint8_t* dst =
                frame.bytes().data() +
                ((std::size_t(tile.row) * th + y) * frame.width() +
                 std::size_t(tile.col) * tw) *
                    3;
            std::copy(src, src + std::size_t(tw) * 3, dst);
        }
    }
    return frame;
}

}  // namespace ufcsr

#endif  // UFCSR_RASTER_HPP_
