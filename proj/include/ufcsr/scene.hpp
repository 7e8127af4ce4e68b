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
// Scenario description and evaluation: subject trajectory, static occluder
// geometry, the binocular pedestrian camera rig, and the capture schedule.
//
// World frame: z up, ground at z = 0. Headings are compass angles — 0 along
// +y, growing clockwise when seen from above — so heading h points along
// (sin h, cos h, 0).

#ifndef UFCSR_SCENE_HPP_
#define UFCSR_SCENE_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ufcsr/camera.hpp"
#include "ufcsr/error.hpp"
#include "ufcsr/vec.hpp"

namespace ufcsr {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

enum class SegmentPhase { cruise, turn, decelerate };

struct TrajectoryKeyframe {
    double t = 0.0;
    Vec3 position;
    double yaw = 0.0;                              // radians, compass
    SegmentPhase phase = SegmentPhase::cruise;     // of the segment this starts
};

struct Trajectory {
    std::vector<TrajectoryKeyframe> keyframes;

    double duration() const {
        return keyframes.empty() ? 0.0 : keyframes.back().t;
    }
};

struct Pose {
    Vec3 position;
    double yaw = 0.0;

    /// Model -> world for the subject: rotate about z by the compass yaw,
    /// then translate. Model +y is the subject's forward axis.
    Vec3 transform(Vec3 p) const {
        const double c = std::cos(yaw), s = std::sin(yaw);
        return {p.x * c + p.y * s + position.x,
                -p.x * s + p.y * c + position.y,
                p.z + position.z};
    }

    Vec3 rotate(Vec3 p) const {
        const double c = std::cos(yaw), s = std::sin(yaw);
        return {p.x * c + p.y * s, -p.x * s + p.y * c, p.z};
    }
};

inline void validate_trajectory(const Trajectory& traj) {
    const auto& keys = traj.keyframes;
    if (keys.size() < 2)
        raise(ErrorKind::config, "trajectory needs at least two keyframes");
    if (keys.front().t != 0.0)
        raise(ErrorKind::config, "first trajectory keyframe must be at t = 0");
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (!(keys[i].t > keys[i - 1].t))
            raise(ErrorKind::config, "trajectory keyframe times must increase");
        if (keys[i - 1].phase == SegmentPhase::turn &&
            std::fabs(keys[i].yaw - keys[i - 1].yaw) >= kPi)
            raise(ErrorKind::config, "turn segments must change yaw by less than pi");
    }
}

namespace detail {

inline Vec3 lerp(Vec3 a, Vec3 b, double s) { return a + (b - a) * s; }

/// Constant-speed circular arc from `a` to `b` whose tangent rotates by the
/// yaw change of the segment. The chord direction bisects the start and end
/// tangents; altitude interpolates linearly.
inline Vec3 turn_arc_position(const TrajectoryKeyframe& a,
                              const TrajectoryKeyframe& b, double tau) {
    const double delta = b.yaw - a.yaw;
    if (std::fabs(delta) < 1e-12) return lerp(a.position, b.position, tau);
    const Vec2 chord{b.position.x - a.position.x, b.position.y - a.position.y};
    const double chord_len = norm(chord);
    const double chord_az = std::atan2(chord.x, chord.y);
    const double psi0 = chord_az - delta * 0.5;
    const double speed = chord_len * delta / (2.0 * std::sin(delta * 0.5));
    const double psi = psi0 + tau * delta;
    return {a.position.x + speed * (std::cos(psi0) - std::cos(psi)) / delta,
            a.position.y + speed * (std::sin(psi) - std::sin(psi0)) / delta,
            a.position.z + (b.position.z - a.position.z) * tau};
}

}  // namespace detail

/// Pose at time t: linear on cruise segments, circular-arc on turns, and a
/// quadratic ease-out (velocity reaching zero at the segment end) on
/// decelerate segments.
inline Pose evaluate_pose(const Trajectory& traj, double t) {
    validate_trajectory(traj);
    if (!(t >= 0.0 && t <= traj.duration()))
        raise(ErrorKind::range, "pose query outside trajectory duration");
    const auto& keys = traj.keyframes;
    if (t >= keys.back().t)
        return {keys.back().position, keys.back().yaw};
    std::size_t seg = 0;
    while (seg + 2 < keys.size() && t >= keys[seg + 1].t) ++seg;
    const auto& a = keys[seg];
    const auto& b = keys[seg + 1];
    const double tau = (t - a.t) / (b.t - a.t);
    switch (a.phase) {
        case SegmentPhase::turn:
            return {detail::turn_arc_position(a, b, tau),
                    a.yaw + (b.yaw - a.yaw) * tau};
        case SegmentPhase::decelerate: {
            const double s = 1.0 - (1.0 - tau) * (1.0 - tau);
            return {detail::lerp(a.position, b.position, s),
                    a.yaw + (b.yaw - a.yaw) * s};
        }
        case SegmentPhase::cruise:
        default:
            return {detail::lerp(a.position, b.position, tau),
                    a.yaw + (b.yaw - a.yaw) * tau};
    }
}

// ---------------------------------------------------------------------------
// Camera rig
// ---------------------------------------------------------------------------

struct CameraRig {
    Vec2 head_xy;
    double eye_height = 1.75;        // m
    double ipd = 0.1103594;          // m between eye centers
    double hfov_deg = 107.0;         // per eye, horizontal
    int image_width = 6420;
    int image_height = 8100;
    int tile_rows = 5;
    int tile_cols = 5;

    Vec3 head_position() const { return {head_xy.x, head_xy.y, eye_height}; }
};

struct Orientation {
    Vec3 forward, up, right;
};

/// Full look-at: forward from head to target, up locked to world vertical.
inline Orientation head_orientation(Vec3 head, Vec3 target) {
    const Vec3 d = target - head;
    const double len = norm(d);
    if (len < 1e-12)
        raise(ErrorKind::geometry, "look-at target coincides with the head");
    Orientation o;
    o.forward = d * (1.0 / len);
    const Vec3 world_up{0.0, 0.0, 1.0};
    const Vec3 lateral = world_up - o.forward * dot(world_up, o.forward);
    const double lat_len = norm(lateral);
    if (lat_len < 1e-9)
        raise(ErrorKind::geometry, "look-at target is vertically above the head");
    o.up = lateral * (1.0 / lat_len);
    o.right = cross(o.forward, o.up);
    return o;
}

struct EyePair {
    Camera left, right;
};

/// Two parallel cameras sharing the head orientation, displaced by half the
/// interpupillary distance along the head's right axis.
inline EyePair eye_cameras(const CameraRig& rig, Vec3 subject_position) {
    const Vec3 head = rig.head_position();
    const Orientation o = head_orientation(head, subject_position);
    EyePair pair;
    const Vec3 offset = o.right * (rig.ipd * 0.5);
    pair.left = make_camera(head - offset, o.right, o.up, o.forward,
                            rig.hfov_deg, rig.image_width, rig.image_height);
    pair.right = make_camera(head + offset, o.right, o.up, o.forward,
                             rig.hfov_deg, rig.image_width, rig.image_height);
    return pair;
}

/// Shrinks the rig for desk-scale runs: each tile dimension is divided by
/// `divisor` and rounded to the nearest whole texel (at least 1), keeping
/// the 5x5 grid exact; the field of view is untouched, so the focal length
/// in pixels scales with the image.
inline CameraRig scaled_rig(const CameraRig& rig, int divisor) {
    if (divisor < 1) raise(ErrorKind::config, "scale divisor must be >= 1");
    if (rig.image_width % rig.tile_cols != 0 ||
        rig.image_height % rig.tile_rows != 0)
        raise(ErrorKind::config, "base image size must split into the tile grid");
    if (divisor == 1) return rig;
    CameraRig out = rig;
    const auto scale_tile = [divisor](int base_tile) {
        const long long t = std::llround(double(base_tile) / double(divisor));
        return int(std::max(1LL, t));
    };
    out.image_width = scale_tile(rig.image_width / rig.tile_cols) * rig.tile_cols;
    out.image_height = scale_tile(rig.image_height / rig.tile_rows) * rig.tile_rows;
    return out;
}

// ---------------------------------------------------------------------------
// Scenario and capture schedule
// ---------------------------------------------------------------------------

struct OccluderBox {
    Vec3 center;
    Vec3 size;
    double yaw = 0.0;  // radians, compass
};

struct Scenario {
    std::string name;
    std::string mesh_path;
    std::string parts_path;
    std::vector<OccluderBox> occluder_boxes;
    std::vector<std::string> occluder_mesh_paths;
    CameraRig rig;
    double rate_hz = 60.0;
    double duration_s = 3.0;
    Trajectory trajectory;
};

struct FrameSchedule {
    std::vector<double> times;

    std::size_t frames() const { return times.size(); }
    std::size_t captures() const { return times.size() * 2; }
    std::size_t tile_files(const CameraRig& rig) const {
        return captures() * std::size_t(rig.tile_rows) * rig.tile_cols;
    }
};

/// Capture times k / rate for k = 0 .. floor(duration * rate); the final
/// animation endpoint is included when duration is a whole number of frames.
inline FrameSchedule frame_schedule(double rate_hz, double duration_s) {
    if (!(rate_hz > 0.0)) raise(ErrorKind::config, "capture rate must be positive");
    if (!(duration_s > 0.0)) raise(ErrorKind::config, "duration must be positive");
    const auto last = std::int64_t(std::floor(duration_s * rate_hz + 1e-9));
    FrameSchedule schedule;
    schedule.times.reserve(std::size_t(last) + 1);
    for (std::int64_t k = 0; k <= last; ++k)
        schedule.times.push_back(double(k) / rate_hz);
    return schedule;
}

inline FrameSchedule frame_schedule(const Scenario& sc) {
    return frame_schedule(sc.rate_hz, sc.duration_s);
}

// ---------------------------------------------------------------------------
// Scenario config file (JSON)
// ---------------------------------------------------------------------------

namespace detail {

inline Vec3 vec3_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        raise(ErrorKind::config, std::string(what) + " must be [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline SegmentPhase phase_from_string(const std::string& s) {
    if (s == "cruise") return SegmentPhase::cruise;
    if (s == "turn") return SegmentPhase::turn;
    if (s == "decelerate") return SegmentPhase::decelerate;
    raise(ErrorKind::config, "unknown trajectory phase `" + s + "`");
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j,
                               const std::filesystem::path& base_dir) {
    Scenario sc;
    try {
        sc.name = j.at("name").get<std::string>();
        const auto& subject = j.at("subject");
        sc.mesh_path = (base_dir / subject.at("mesh").get<std::string>()).string();
        sc.parts_path = (base_dir / subject.at("parts").get<std::string>()).string();

        if (j.contains("rig")) {
            const auto& r = j.at("rig");
            if (r.contains("head")) {
                sc.rig.head_xy = {r.at("head")[0].get<double>(),
                                  r.at("head")[1].get<double>()};
            }
            sc.rig.eye_height = r.value("eye_height_m", sc.rig.eye_height);
            sc.rig.ipd = r.value("ipd_m", sc.rig.ipd);
            sc.rig.hfov_deg = r.value("hfov_deg", sc.rig.hfov_deg);
            if (r.contains("image")) {
                sc.rig.image_width = r.at("image")[0].get<int>();
                sc.rig.image_height = r.at("image")[1].get<int>();
            }
        }

        const auto& cap = j.at("capture");
        sc.rate_hz = cap.at("rate_hz").get<double>();
        sc.duration_s = cap.at("duration_s").get<double>();

        for (const auto& o : j.value("occluders", nlohmann::json::array())) {
            const std::string type = o.value("type", "box");
            if (type == "box") {
                OccluderBox box;
                box.center = detail::vec3_from_json(o.at("center"), "occluder center");
                box.size = detail::vec3_from_json(o.at("size"), "occluder size");
                box.yaw = deg_to_rad(o.value("yaw_deg", 0.0));
                sc.occluder_boxes.push_back(box);
            } else if (type == "mesh") {
                sc.occluder_mesh_paths.push_back(
                    (base_dir / o.at("path").get<std::string>()).string());
            } else {
                raise(ErrorKind::config, "unknown occluder type `" + type + "`");
            }
        }

        for (const auto& k : j.at("trajectory")) {
            TrajectoryKeyframe key;
            key.t = k.at("t").get<double>();
            key.position = detail::vec3_from_json(k.at("pos"), "keyframe position");
            key.yaw = deg_to_rad(k.at("yaw_deg").get<double>());
            if (k.contains("phase"))
                key.phase = detail::phase_from_string(k.at("phase").get<std::string>());
            sc.trajectory.keyframes.push_back(key);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::config, std::string("scenario config: ") + e.what());
    }

    validate_trajectory(sc.trajectory);
    if (std::fabs(sc.trajectory.duration() - sc.duration_s) > 1e-9)
        raise(ErrorKind::config,
              "capture duration must equal the trajectory duration");
    if (sc.rig.image_width % sc.rig.tile_cols != 0 ||
        sc.rig.image_height % sc.rig.tile_rows != 0)
        raise(ErrorKind::config, "image size must split into the tile grid");
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::config, "cannot open scenario: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::config, path + ": " + e.what());
    }
    return parse_scenario(j, std::filesystem::path(path).parent_path());
}

}  // namespace ufcsr

#endif  // UFCSR_SCENE_HPP_
