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
// Wavefront OBJ loader. Only the subset needed here: positions, texture
// coordinates, faces (fan-triangulated), and g/o group names, which the
// naming map resolves to part labels. Every face corner must carry a
// texture coordinate — an unwrapped layout is a precondition, not an option.

#ifndef UFCSR_OBJ_LOADER_HPP_
#define UFCSR_OBJ_LOADER_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ufcsr/error.hpp"
#include "ufcsr/mesh.hpp"

namespace ufcsr {

namespace detail {

struct ObjCorner {
    long v = 0;
    long vt = 0;
    bool has_vt = false;
};

inline ObjCorner parse_corner(const std::string& token, const std::string& where) {
    ObjCorner corner;
    const auto s1 = token.find('/');
    try {
        corner.v = std::stol(token.substr(0, s1));
        if (s1 != std::string::npos) {
            const auto s2 = token.find('/', s1 + 1);
            const std::string vt_str =
                token.substr(s1 + 1, s2 == std::string::npos ? s2 : s2 - s1 - 1);
            if (!vt_str.empty()) {
                corner.vt = std::stol(vt_str);
                corner.has_vt = true;
            }
        }
    } catch (const std::exception&) {
        raise(ErrorKind::format, where + ": malformed face corner `" + token + "`");
    }
    return corner;
}

inline std::size_t resolve_index(long idx, std::size_t count,
                                 const std::string& where) {
    long resolved = idx > 0 ? idx - 1 : long(count) + idx;
    if (resolved < 0 || std::size_t(resolved) >= count)
        raise(ErrorKind::format, where + ": index out of range");
    return std::size_t(resolved);
}

}  // namespace detail

inline LabeledMesh load_mesh_from_stream(std::istream& in,
                                         const PartNamingMap& naming,
                                         const std::string& origin = "<stream>") {
    LabeledMesh mesh;
    std::vector<Vec2> uvs;
    std::unordered_map<std::string, std::uint32_t> part_ids;
    std::string group = "default";

    auto part_for_group = [&](const std::string& g) -> std::uint32_t {
        const std::string part = naming.resolve(g);
        auto it = part_ids.find(part);
        if (it != part_ids.end()) return it->second;
        const auto id = std::uint32_t(mesh.parts.size());
        mesh.parts.push_back(part);
        part_ids.emplace(part, id);
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z))
                raise(ErrorKind::format, where + ": malformed vertex");
            mesh.vertices.push_back(p);
        } else if (tag == "vt") {
            Vec2 uv;
            if (!(ls >> uv.x >> uv.y))
                raise(ErrorKind::format, where + ": malformed texture coordinate");
            if (uv.x < 0.0 || uv.x > 1.0 || uv.y < 0.0 || uv.y > 1.0)
                raise(ErrorKind::unwrap,
                      where + ": texture coordinate outside the unit square");
            uvs.push_back(uv);
        } else if (tag == "g" || tag == "o") {
            std::string name;
            ls >> name;
            group = name.empty() ? "default" : name;
        } else if (tag == "f") {
            std::vector<detail::ObjCorner> corners;
            std::string token;
            while (ls >> token) corners.push_back(detail::parse_corner(token, where));
            if (corners.size() < 3)
                raise(ErrorKind::format, where + ": face needs at least 3 corners");
            const auto part = part_for_group(group);
            for (std::size_t i = 2; i < corners.size(); ++i) {
                const detail::ObjCorner fan[3] = {corners[0], corners[i - 1],
                                                  corners[i]};
                MeshTriangle tri;
                tri.part = part;
                for (int k = 0; k < 3; ++k) {
                    if (!fan[k].has_vt)
                        raise(ErrorKind::unwrap,
                              where + ": face corner has no texture coordinate; "
                                      "the mesh must be unwrapped");
                    tri.v[k] = std::uint32_t(
                        detail::resolve_index(fan[k].v, mesh.vertices.size(), where));
                    tri.uv[k] =
                        uvs[detail::resolve_index(fan[k].vt, uvs.size(), where)];
                }
                mesh.triangles.push_back(tri);
            }
        }
        // Anything else (vn, s, usemtl, mtllib, ...) is irrelevant here.
    }
    if (mesh.triangles.empty())
        raise(ErrorKind::format, origin + ": mesh has no faces");
    return mesh;
}

inline LabeledMesh load_mesh(const std::string& path, const PartNamingMap& naming) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::format, "cannot open mesh file: " + path);
    return load_mesh_from_stream(f, naming, path);
}

inline PartNamingMap load_part_naming_map(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::format, "cannot open part naming map: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_part_naming_map(ss.str(), path);
}

}  // namespace ufcsr

#endif  // UFCSR_OBJ_LOADER_HPP_
