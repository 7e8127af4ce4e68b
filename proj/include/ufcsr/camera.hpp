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

#ifndef UFCSR_CAMERA_HPP_
#define UFCSR_CAMERA_HPP_

#include <cmath>

#include "ufcsr/vec.hpp"

namespace ufcsr {

/// Pinhole camera. The orthonormal basis is right/up/forward; image x grows
/// along `right`, image y grows downward (against `up`). The principal point
/// is the exact image center.
struct Camera {
    Vec3 position;
    Vec3 right, up, forward;
    double focal_px = 1.0;
    int width = 0;
    int height = 0;
    double znear = 0.05;

    double cx() const { return width * 0.5; }
    double cy() const { return height * 0.5; }

    /// World point -> camera space (x right, y up, z forward).
    Vec3 to_camera(Vec3 p) const {
        const Vec3 d = p - position;
        return {dot(d, right), dot(d, up), dot(d, forward)};
    }

    /// Camera-space point (z > 0) -> continuous pixel coordinates.
    Vec2 project_camera_space(Vec3 c) const {
        return {cx() + focal_px * c.x / c.z, cy() - focal_px * c.y / c.z};
    }
};

/// Camera with the given horizontal field of view; the vertical extent
/// follows from the aspect ratio.
inline Camera make_camera(Vec3 position, Vec3 right, Vec3 up, Vec3 forward,
                          double hfov_deg, int width, int height) {
    Camera cam;
    cam.position = position;
    cam.right = right;
    cam.up = up;
    cam.forward = forward;
    cam.width = width;
    cam.height = height;
    cam.focal_px = (width * 0.5) / std::tan(hfov_deg * 0.5 * M_PI / 180.0);
    return cam;
}

}  // namespace ufcsr

#endif  // UFCSR_CAMERA_HPP_
