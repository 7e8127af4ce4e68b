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

#include <set>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "ufcsr/mesh.hpp"
#include "ufcsr/obj_loader.hpp"

using namespace ufcsr;

namespace {

LabeledMesh load_from_text(const std::string& text, const PartNamingMap& naming) {
    std::istringstream in(text);
    return load_mesh_from_stream(in, naming, "<test>");
}

const char* kQuadObj = R"(
g Windshield
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
vt 0.1 0.1
vt 0.2 0.1
vt 0.2 0.2
vt 0.1 0.2
f 1/1 2/2 3/3 4/4
)";

}  // namespace

TEST_CASE("glob matching") {
    CHECK(PartNamingMap::glob_match("*", "anything"));
    CHECK(PartNamingMap::glob_match("Wind*", "Windshield"));
    CHECK(PartNamingMap::glob_match("*shield", "Windshield"));
    CHECK(PartNamingMap::glob_match("W?nd*d", "Windshield"));
    CHECK_FALSE(PartNamingMap::glob_match("wind*", "Windshield"));
    CHECK_FALSE(PartNamingMap::glob_match("Wind", "Windshield"));
    CHECK(PartNamingMap::glob_match("", ""));
}

TEST_CASE("naming map parses rules in order, first match wins") {
    const auto map = parse_part_naming_map(
        "# vehicle glass\n"
        "Windshield* -> Windshield\n"
        "*Window* -> Windows   # side glass\n"
        "Door_?     -> Doors\n");
    CHECK(map.resolve("Windshield") == "Windshield");
    CHECK(map.resolve("FrontWindow_L") == "Windows");
    CHECK(map.resolve("Door_A") == "Doors");
    CHECK(map.resolve("Bumper") == kOthersPart);
}

TEST_CASE("naming map rejects malformed lines") {
    CHECK_THROWS_AS(parse_part_naming_map("pattern without arrow\n"), Error);
    CHECK_THROWS_AS(parse_part_naming_map(" -> NoPattern\n"), Error);
}

TEST_CASE("quad in one group loads as two triangles, one part") {
    PartNamingMap naming;
    naming.rules.push_back({"*", "Windshield"});
    const LabeledMesh mesh = load_from_text(kQuadObj, naming);
    REQUIRE(mesh.triangles.size() == 2);
    REQUIRE(mesh.parts.size() == 1);
    CHECK(mesh.parts[0] == "Windshield");
    CHECK(mesh.triangles[0].part == 0);
    CHECK(mesh.triangles[1].part == 0);
    // Fan triangulation: (0,1,2) and (0,2,3).
    CHECK(mesh.triangles[1].v[0] == 0);
    CHECK(mesh.triangles[1].v[1] == 2);
    CHECK(mesh.triangles[1].v[2] == 3);
}

TEST_CASE("cube with six groups maps to twelve triangles, six parts") {
    std::ostringstream obj;
    // 8 cube corners; each face a quad in its own group with its own UVs.
    obj << "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
        << "v 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n";
    const int faces[6][4] = {{1, 2, 3, 4}, {5, 6, 7, 8}, {1, 2, 6, 5},
                             {2, 3, 7, 6}, {3, 4, 8, 7}, {4, 1, 5, 8}};
    int vt = 0;
    for (int f = 0; f < 6; ++f) {
        obj << "g Face" << f << "\n";
        const double u0 = 0.01 + f * 0.15;
        obj << "vt " << u0 << " 0.1\nvt " << u0 + 0.1 << " 0.1\nvt " << u0 + 0.1
            << " 0.2\nvt " << u0 << " 0.2\n";
        obj << "f " << faces[f][0] << "/" << vt + 1 << " " << faces[f][1] << "/"
            << vt + 2 << " " << faces[f][2] << "/" << vt + 3 << " " << faces[f][3]
            << "/" << vt + 4 << "\n";
        vt += 4;
    }
    PartNamingMap naming;
    for (int f = 0; f < 6; ++f)
        naming.rules.push_back({"Face" + std::to_string(f), "Part" + std::to_string(f)});
    const LabeledMesh mesh = load_from_text(obj.str(), naming);
    CHECK(mesh.triangles.size() == 12);
    CHECK(mesh.parts.size() == 6);
}

TEST_CASE("faces without texture coordinates are an unwrap error") {
    PartNamingMap naming;
    try {
        load_from_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n", naming);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unwrap);
    }
}

TEST_CASE("texture coordinates outside the unit square are rejected") {
    PartNamingMap naming;
    CHECK_THROWS_AS(
        load_from_text("v 0 0 0\nvt 1.5 0.5\nf 1/1 1/1 1/1\n", naming), Error);
}

TEST_CASE("unreadable input is a format error") {
    PartNamingMap naming;
    try {
        load_from_text("v 0 0 0\nvt 0 0\nf 1/1 9/1 1/1\n", naming);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::format);
    }
    CHECK_THROWS_AS(load_from_text("", naming), Error);  // no faces
    CHECK_THROWS_AS(load_mesh("/nonexistent/mesh.obj", naming), Error);
}

TEST_CASE("negative OBJ indices resolve relative to the running count") {
    PartNamingMap naming;
    const LabeledMesh mesh = load_from_text(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvt 1 0\nvt 0 1\nf -3/-3 -2/-2 -1/-1\n",
        naming);
    REQUIRE(mesh.triangles.size() == 1);
    CHECK(mesh.triangles[0].v[0] == 0);
    CHECK(mesh.triangles[0].v[2] == 2);
}

TEST_CASE("unmatched groups land in Others") {
    PartNamingMap naming;
    naming.rules.push_back({"Known", "Known"});
    const LabeledMesh mesh = load_from_text(kQuadObj, naming);
    REQUIRE(mesh.parts.size() == 1);
    CHECK(mesh.parts[0] == kOthersPart);
}

TEST_CASE("part table colors are pairwise distinct and avoid the background") {
    std::vector<std::string> parts;
    for (int i = 0; i < 100; ++i) parts.push_back("P" + std::to_string(i));
    const PartTable table = make_part_table(parts);
    std::set<std::uint32_t> seen;
    for (const auto& c : table.colors) {
        CHECK(c.value != table.background);
        CHECK(seen.insert(c.value).second);
    }
}

TEST_CASE("uv and texel space transforms agree") {
    // v = 1 is the top row; v = 0 the bottom.
    const Vec2 top_left = uv_to_texel_space({0.0, 1.0});
    CHECK(top_left.x == 0.0);
    CHECK(top_left.y == 0.0);
    const Vec2 bottom = uv_to_texel_space({0.0, 0.0});
    CHECK(bottom.y == 4096.0);
    const Vec2 center = texel_center_uv({0, 0});
    const Vec2 back = uv_to_texel_space(center);
    CHECK(back.x == Catch::Approx(0.5));
    CHECK(back.y == Catch::Approx(0.5));
}
