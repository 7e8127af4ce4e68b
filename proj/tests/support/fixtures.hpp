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
// Shared mesh/scenario builders for tests. All UV rectangles sit on exact
// texel boundaries (4096 is a power of two, so k/4096 is exact in binary),
// which keeps expected texel counts exact.

#ifndef UFCSR_TESTS_FIXTURES_HPP_
#define UFCSR_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ufcsr/mesh.hpp"
#include "ufcsr/palette.hpp"
#include "ufcsr/scene.hpp"
#include "ufcsr/vec.hpp"

namespace fixtures {

using ufcsr::LabeledMesh;
using ufcsr::MeshTriangle;
using ufcsr::Vec2;
using ufcsr::Vec3;

/// UV rectangle covering exactly the texel rect [x0, x0+w) x [y0, y0+h)
/// (texel rows counted from the top of the texture).
struct UvRect {
    Vec2 uv00, uv10, uv11, uv01;  // texel corners: TL, TR, BR, BL of the rect
};

inline UvRect uv_rect_for_texels(int x0, int y0, int w, int h) {
    const double u0 = double(x0) / ufcsr::palette::kWidth;
    const double u1 = double(x0 + w) / ufcsr::palette::kWidth;
    const double v_top = 1.0 - double(y0) / ufcsr::palette::kHeight;
    const double v_bot = 1.0 - double(y0 + h) / ufcsr::palette::kHeight;
    return {{u0, v_top}, {u1, v_top}, {u1, v_bot}, {u0, v_bot}};
}

/// Appends a rectangular face as two triangles. The face normal points
/// along cross(edge_a, edge_b); corners map onto the UV rectangle so the
/// whole quad carries one affine UV map (both triangles agree).
inline void add_rect_face(LabeledMesh& mesh, Vec3 origin, Vec3 edge_a,
                          Vec3 edge_b, const UvRect& uv, std::uint32_t part) {
    const auto base = std::uint32_t(mesh.vertices.size());
    mesh.vertices.push_back(origin);
    mesh.vertices.push_back(origin + edge_a);
    mesh.vertices.push_back(origin + edge_a + edge_b);
    mesh.vertices.push_back(origin + edge_b);
    MeshTriangle t1, t2;
    t1.v[0] = base;
    t1.v[1] = base + 1;
    t1.v[2] = base + 2;
    t1.uv[0] = uv.uv00;
    t1.uv[1] = uv.uv10;
    t1.uv[2] = uv.uv11;
    t1.part = part;
    t2.v[0] = base;
    t2.v[1] = base + 2;
    t2.v[2] = base + 3;
    t2.uv[0] = uv.uv00;
    t2.uv[1] = uv.uv11;
    t2.uv[2] = uv.uv01;
    t2.part = part;
    mesh.triangles.push_back(t1);
    mesh.triangles.push_back(t2);
}

/// Single quad of the given world size in the x-z plane, facing -y, centered
/// at the model origin at height z_center. Its UV island is the texel rect
/// [x0, x0+k) x [y0, y0+k).
inline LabeledMesh make_quad_subject(double width_m, double height_m, int k,
                                     int x0 = 64, int y0 = 64,
                                     const std::string& part = "Plate") {
    LabeledMesh mesh;
    mesh.parts.push_back(part);
    // cross(edge_a, edge_b) faces -y: visible from a head on the -y side.
    add_rect_face(mesh, {-width_m / 2, 0.0, -height_m / 2},
                  {width_m, 0.0, 0.0}, {0.0, 0.0, height_m},
                  uv_rect_for_texels(x0, y0, k, k), 0);
    return mesh;
}

/// Axis-aligned cube subject, one part per face ("FacePX", "FaceNX", ...).
/// Each face's UV island is a k x k texel square; islands sit in a row with
/// `gap` empty texels between them.
inline LabeledMesh make_cube_subject(double size_m, int k, int gap = 8,
                                     int x0 = 16, int y0 = 16) {
    LabeledMesh mesh;
    const double h = size_m / 2;
    const char* names[6] = {"FacePX", "FaceNX", "FacePY", "FaceNY", "FacePZ",
                            "FaceNZ"};
    for (const char* n : names) mesh.parts.push_back(n);
    struct FaceSpec {
        Vec3 origin, edge_a, edge_b;
    };
    const FaceSpec faces[6] = {
        {{h, -h, -h}, {0, 2 * h, 0}, {0, 0, 2 * h}},    // +x
        {{-h, h, -h}, {0, -2 * h, 0}, {0, 0, 2 * h}},   // -x
        {{h, h, -h}, {-2 * h, 0, 0}, {0, 0, 2 * h}},    // +y
        {{-h, -h, -h}, {2 * h, 0, 0}, {0, 0, 2 * h}},   // -y
        {{-h, -h, h}, {2 * h, 0, 0}, {0, 2 * h, 0}},    // +z
        {{-h, h, -h}, {2 * h, 0, 0}, {0, -2 * h, 0}},   // -z
    };
    for (int f = 0; f < 6; ++f) {
        const int fx0 = x0 + f * (k + gap);
        add_rect_face(mesh, faces[f].origin, faces[f].edge_a, faces[f].edge_b,
                      uv_rect_for_texels(fx0, y0, k, k), std::uint32_t(f));
    }
    return mesh;
}

/// Two UV islands separated by `gap` empty texel columns. The second island
/// is shifted a few rows so the islands never share a UV corner, even flush.
inline LabeledMesh make_gap_mesh(int gap) {
    LabeledMesh mesh;
    mesh.parts = {"A", "B"};
    add_rect_face(mesh, {0, 0, 0}, {1, 0, 0}, {0, 0, 1},
                  uv_rect_for_texels(100, 100, 40, 60), 0);
    add_rect_face(mesh, {0, 2, 0}, {1, 0, 0}, {0, 0, 1},
                  uv_rect_for_texels(140 + gap, 108, 40, 60), 1);
    return mesh;
}

// ---------------------------------------------------------------------------
// Fixture files on disk (for pipeline-level tests)
// ---------------------------------------------------------------------------

/// Serializes a labeled mesh as OBJ, one `g` group per part. UVs print with
/// enough digits to round-trip exactly.
inline void write_obj(const LabeledMesh& mesh, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    f.precision(17);
    for (const Vec3& v : mesh.vertices)
        f << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    long vt = 0;
    std::uint32_t current_part = ~0u;
    for (const MeshTriangle& t : mesh.triangles) {
        if (t.part != current_part) {
            f << "g " << mesh.parts[t.part] << '\n';
            current_part = t.part;
        }
        for (const Vec2& uv : t.uv) f << "vt " << uv.x << ' ' << uv.y << '\n';
        f << "f " << t.v[0] + 1 << '/' << vt + 1 << ' ' << t.v[1] + 1 << '/'
          << vt + 2 << ' ' << t.v[2] + 1 << '/' << vt + 3 << '\n';
        vt += 3;
    }
}

/// Identity naming map: every part name maps to itself.
inline void write_parts_map(const LabeledMesh& mesh, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    for (const std::string& part : mesh.parts) f << part << " -> " << part << '\n';
}

struct ScenarioSpec {
    std::string name = "fixture";
    std::string mesh_file;   // relative to the scenario file
    std::string parts_file;  // relative to the scenario file
    double head_x = 0.0, head_y = 0.0;
    double rate_hz = 60.0;
    double duration_s = 3.0;
    std::vector<ufcsr::TrajectoryKeyframe> keyframes;
    std::vector<ufcsr::OccluderBox> boxes;
};

inline void write_scenario_json(const ScenarioSpec& spec, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    f.precision(17);
    f << "{\n  \"name\": \"" << spec.name << "\",\n";
    f << "  \"subject\": {\"mesh\": \"" << spec.mesh_file << "\", \"parts\": \""
      << spec.parts_file << "\"},\n";
    f << "  \"rig\": {\"head\": [" << spec.head_x << ", " << spec.head_y
      << "]},\n";
    f << "  \"capture\": {\"rate_hz\": " << spec.rate_hz
      << ", \"duration_s\": " << spec.duration_s << "},\n";
    f << "  \"occluders\": [";
    for (std::size_t i = 0; i < spec.boxes.size(); ++i) {
        const auto& b = spec.boxes[i];
        f << (i ? ",\n    " : "\n    ");
        f << "{\"type\": \"box\", \"center\": [" << b.center.x << ", "
          << b.center.y << ", " << b.center.z << "], \"size\": [" << b.size.x
          << ", " << b.size.y << ", " << b.size.z << "], \"yaw_deg\": "
          << b.yaw * 180.0 / ufcsr::kPi << "}";
    }
    f << (spec.boxes.empty() ? "],\n" : "\n  ],\n");
    f << "  \"trajectory\": [";
    for (std::size_t i = 0; i < spec.keyframes.size(); ++i) {
        const auto& k = spec.keyframes[i];
        const char* phase = k.phase == ufcsr::SegmentPhase::turn ? "turn"
                            : k.phase == ufcsr::SegmentPhase::decelerate
                                ? "decelerate"
                                : "cruise";
        f << (i ? ",\n    " : "\n    ");
        f << "{\"t\": " << k.t << ", \"pos\": [" << k.position.x << ", "
          << k.position.y << ", " << k.position.z << "], \"yaw_deg\": "
          << k.yaw * 180.0 / ufcsr::kPi << ", \"phase\": \"" << phase << "\"}";
    }
    f << "\n  ]\n}\n";
}

/// Small end-to-end scenario: a quad drifting gently toward a stop in front
/// of the pedestrian. Renders quickly at large scale divisors.
inline ScenarioSpec make_drift_spec(const std::string& mesh_file,
                                    const std::string& parts_file,
                                    double rate_hz = 30.0,
                                    double duration_s = 0.5) {
    ScenarioSpec spec;
    spec.mesh_file = mesh_file;
    spec.parts_file = parts_file;
    spec.rate_hz = rate_hz;
    spec.duration_s = duration_s;
    spec.keyframes.push_back(
        {0.0, {0.05, 2.0, 1.75}, 0.0, ufcsr::SegmentPhase::decelerate});
    spec.keyframes.push_back(
        {duration_s, {0.0, 1.9, 1.75}, 0.0, ufcsr::SegmentPhase::cruise});
    return spec;
}

}  // namespace fixtures

#endif  // UFCSR_TESTS_FIXTURES_HPP_
