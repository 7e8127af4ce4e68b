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

#ifndef UFCSR_PLASMA_HPP_
#define UFCSR_PLASMA_HPP_

#include <array>
#include <cmath>
#include <cstdint>

#include "ufcsr/error.hpp"
#include "ufcsr/palette.hpp"

namespace ufcsr {
namespace plasma_lut {

struct Entry {
    std::uint8_t r, g, b;
};

// 256-sample plasma gradient, dark purple at 0 to bright yellow at 1.
inline constexpr std::array<Entry, 256> kEntries = {{
    {0x0D, 0x08, 0x87}, {0x10, 0x07, 0x88}, {0x13, 0x07, 0x89}, {0x16, 0x07, 0x8A}, {0x19, 0x06, 0x8C}, {0x1B, 0x06, 0x8D}, {0x1D, 0x06, 0x8E}, {0x20, 0x06, 0x8F},
    {0x22, 0x06, 0x90}, {0x24, 0x06, 0x91}, {0x26, 0x05, 0x91}, {0x28, 0x05, 0x92}, {0x2A, 0x05, 0x93}, {0x2C, 0x05, 0x94}, {0x2E, 0x05, 0x95}, {0x2F, 0x05, 0x96},
    {0x31, 0x05, 0x97}, {0x33, 0x05, 0x97}, {0x35, 0x04, 0x98}, {0x37, 0x04, 0x99}, {0x38, 0x04, 0x9A}, {0x3A, 0x04, 0x9A}, {0x3C, 0x04, 0x9B}, {0x3E, 0x04, 0x9C},
    {0x3F, 0x04, 0x9C}, {0x41, 0x04, 0x9D}, {0x43, 0x03, 0x9E}, {0x44, 0x03, 0x9E}, {0x46, 0x03, 0x9F}, {0x48, 0x03, 0x9F}, {0x49, 0x03, 0xA0}, {0x4B, 0x03, 0xA1},
    {0x4C, 0x02, 0xA1}, {0x4E, 0x02, 0xA2}, {0x50, 0x02, 0xA2}, {0x51, 0x02, 0xA3}, {0x53, 0x02, 0xA3}, {0x55, 0x02, 0xA4}, {0x56, 0x01, 0xA4}, {0x58, 0x01, 0xA4},
    {0x59, 0x01, 0xA5}, {0x5B, 0x01, 0xA5}, {0x5C, 0x01, 0xA6}, {0x5E, 0x01, 0xA6}, {0x60, 0x01, 0xA6}, {0x61, 0x00, 0xA7}, {0x63, 0x00, 0xA7}, {0x64, 0x00, 0xA7},
    {0x66, 0x00, 0xA7}, {0x67, 0x00, 0xA8}, {0x69, 0x00, 0xA8}, {0x6A, 0x00, 0xA8}, {0x6C, 0x00, 0xA8}, {0x6E, 0x00, 0xA8}, {0x6F, 0x00, 0xA8}, {0x71, 0x00, 0xA8},
    {0x72, 0x01, 0xA8}, {0x74, 0x01, 0xA8}, {0x75, 0x01, 0xA8}, {0x77, 0x01, 0xA8}, {0x78, 0x01, 0xA8}, {0x7A, 0x02, 0xA8}, {0x7B, 0x02, 0xA8}, {0x7D, 0x03, 0xA8},
    {0x7E, 0x03, 0xA8}, {0x80, 0x04, 0xA8}, {0x81, 0x04, 0xA7}, {0x83, 0x05, 0xA7}, {0x84, 0x05, 0xA7}, {0x86, 0x06, 0xA6}, {0x87, 0x07, 0xA6}, {0x88, 0x08, 0xA6},
    {0x8A, 0x09, 0xA5}, {0x8B, 0x0A, 0xA5}, {0x8D, 0x0B, 0xA5}, {0x8E, 0x0C, 0xA4}, {0x8F, 0x0D, 0xA4}, {0x91, 0x0E, 0xA3}, {0x92, 0x0F, 0xA3}, {0x94, 0x10, 0xA2},
    {0x95, 0x11, 0xA1}, {0x96, 0x13, 0xA1}, {0x98, 0x14, 0xA0}, {0x99, 0x15, 0x9F}, {0x9A, 0x16, 0x9F}, {0x9C, 0x17, 0x9E}, {0x9D, 0x18, 0x9D}, {0x9E, 0x19, 0x9D},
    {0xA0, 0x1A, 0x9C}, {0xA1, 0x1B, 0x9B}, {0xA2, 0x1D, 0x9A}, {0xA3, 0x1E, 0x9A}, {0xA5, 0x1F, 0x99}, {0xA6, 0x20, 0x98}, {0xA7, 0x21, 0x97}, {0xA8, 0x22, 0x96},
    {0xAA, 0x23, 0x95}, {0xAB, 0x24, 0x94}, {0xAC, 0x26, 0x94}, {0xAD, 0x27, 0x93}, {0xAE, 0x28, 0x92}, {0xB0, 0x29, 0x91}, {0xB1, 0x2A, 0x90}, {0xB2, 0x2B, 0x8F},
    {0xB3, 0x2C, 0x8E}, {0xB4, 0x2E, 0x8D}, {0xB5, 0x2F, 0x8C}, {0xB6, 0x30, 0x8B}, {0xB7, 0x31, 0x8A}, {0xB8, 0x32, 0x89}, {0xBA, 0x33, 0x88}, {0xBB, 0x34, 0x88},
    {0xBC, 0x35, 0x87}, {0xBD, 0x37, 0x86}, {0xBE, 0x38, 0x85}, {0xBF, 0x39, 0x84}, {0xC0, 0x3A, 0x83}, {0xC1, 0x3B, 0x82}, {0xC2, 0x3C, 0x81}, {0xC3, 0x3D, 0x80},
    {0xC4, 0x3E, 0x7F}, {0xC5, 0x40, 0x7E}, {0xC6, 0x41, 0x7D}, {0xC7, 0x42, 0x7C}, {0xC8, 0x43, 0x7B}, {0xC9, 0x44, 0x7A}, {0xCA, 0x45, 0x7A}, {0xCB, 0x46, 0x79},
    {0xCC, 0x47, 0x78}, {0xCC, 0x49, 0x77}, {0xCD, 0x4A, 0x76}, {0xCE, 0x4B, 0x75}, {0xCF, 0x4C, 0x74}, {0xD0, 0x4D, 0x73}, {0xD1, 0x4E, 0x72}, {0xD2, 0x4F, 0x71},
    {0xD3, 0x51, 0x71}, {0xD4, 0x52, 0x70}, {0xD5, 0x53, 0x6F}, {0xD5, 0x54, 0x6E}, {0xD6, 0x55, 0x6D}, {0xD7, 0x56, 0x6C}, {0xD8, 0x57, 0x6B}, {0xD9, 0x58, 0x6A},
    {0xDA, 0x5A, 0x6A}, {0xDA, 0x5B, 0x69}, {0xDB, 0x5C, 0x68}, {0xDC, 0x5D, 0x67}, {0xDD, 0x5E, 0x66}, {0xDE, 0x5F, 0x65}, {0xDE, 0x61, 0x64}, {0xDF, 0x62, 0x63},
    {0xE0, 0x63, 0x63}, {0xE1, 0x64, 0x62}, {0xE2, 0x65, 0x61}, {0xE2, 0x66, 0x60}, {0xE3, 0x68, 0x5F}, {0xE4, 0x69, 0x5E}, {0xE5, 0x6A, 0x5D}, {0xE5, 0x6B, 0x5D},
    {0xE6, 0x6C, 0x5C}, {0xE7, 0x6E, 0x5B}, {0xE7, 0x6F, 0x5A}, {0xE8, 0x70, 0x59}, {0xE9, 0x71, 0x58}, {0xE9, 0x72, 0x57}, {0xEA, 0x74, 0x57}, {0xEB, 0x75, 0x56},
    {0xEB, 0x76, 0x55}, {0xEC, 0x77, 0x54}, {0xED, 0x79, 0x53}, {0xED, 0x7A, 0x52}, {0xEE, 0x7B, 0x51}, {0xEF, 0x7C, 0x51}, {0xEF, 0x7E, 0x50}, {0xF0, 0x7F, 0x4F},
    {0xF0, 0x80, 0x4E}, {0xF1, 0x81, 0x4D}, {0xF1, 0x83, 0x4C}, {0xF2, 0x84, 0x4B}, {0xF3, 0x85, 0x4B}, {0xF3, 0x87, 0x4A}, {0xF4, 0x88, 0x49}, {0xF4, 0x89, 0x48},
    {0xF5, 0x8B, 0x47}, {0xF5, 0x8C, 0x46}, {0xF6, 0x8D, 0x45}, {0xF6, 0x8F, 0x44}, {0xF7, 0x90, 0x44}, {0xF7, 0x91, 0x43}, {0xF7, 0x93, 0x42}, {0xF8, 0x94, 0x41},
    {0xF8, 0x95, 0x40}, {0xF9, 0x97, 0x3F}, {0xF9, 0x98, 0x3E}, {0xF9, 0x9A, 0x3E}, {0xFA, 0x9B, 0x3D}, {0xFA, 0x9C, 0x3C}, {0xFA, 0x9E, 0x3B}, {0xFB, 0x9F, 0x3A},
    {0xFB, 0xA1, 0x39}, {0xFB, 0xA2, 0x38}, {0xFC, 0xA3, 0x38}, {0xFC, 0xA5, 0x37}, {0xFC, 0xA6, 0x36}, {0xFC, 0xA8, 0x35}, {0xFC, 0xA9, 0x34}, {0xFD, 0xAB, 0x33},
    {0xFD, 0xAC, 0x33}, {0xFD, 0xAE, 0x32}, {0xFD, 0xAF, 0x31}, {0xFD, 0xB1, 0x30}, {0xFD, 0xB2, 0x2F}, {0xFD, 0xB4, 0x2F}, {0xFD, 0xB5, 0x2E}, {0xFE, 0xB7, 0x2D},
    {0xFE, 0xB8, 0x2C}, {0xFE, 0xBA, 0x2C}, {0xFE, 0xBB, 0x2B}, {0xFE, 0xBD, 0x2A}, {0xFE, 0xBE, 0x2A}, {0xFE, 0xC0, 0x29}, {0xFD, 0xC2, 0x29}, {0xFD, 0xC3, 0x28},
    {0xFD, 0xC5, 0x27}, {0xFD, 0xC6, 0x27}, {0xFD, 0xC8, 0x27}, {0xFD, 0xCA, 0x26}, {0xFD, 0xCB, 0x26}, {0xFC, 0xCD, 0x25}, {0xFC, 0xCE, 0x25}, {0xFC, 0xD0, 0x25},
    {0xFC, 0xD2, 0x25}, {0xFB, 0xD3, 0x24}, {0xFB, 0xD5, 0x24}, {0xFB, 0xD7, 0x24}, {0xFA, 0xD8, 0x24}, {0xFA, 0xDA, 0x24}, {0xF9, 0xDC, 0x24}, {0xF9, 0xDD, 0x25},
    {0xF8, 0xDF, 0x25}, {0xF8, 0xE1, 0x25}, {0xF7, 0xE2, 0x25}, {0xF7, 0xE4, 0x25}, {0xF6, 0xE6, 0x26}, {0xF6, 0xE8, 0x26}, {0xF5, 0xE9, 0x26}, {0xF5, 0xEB, 0x27},
    {0xF4, 0xED, 0x27}, {0xF3, 0xEE, 0x27}, {0xF3, 0xF0, 0x27}, {0xF2, 0xF2, 0x27}, {0xF1, 0xF4, 0x26}, {0xF1, 0xF5, 0x25}, {0xF0, 0xF7, 0x24}, {0xF0, 0xF9, 0x21},
}};

}  // namespace plasma_lut

/// Maps a fraction in [0, 1] onto the plasma gradient by linear
/// interpolation between adjacent table entries. Endpoints return the first
/// and last entries exactly.
inline ColorCode plasma(double u) {
    if (!(u >= 0.0 && u <= 1.0))
        raise(ErrorKind::range, "plasma input outside [0, 1]");
    const double scaled = u * 255.0;
    const int i0 = scaled >= 255.0 ? 255 : int(scaled);
    const int i1 = i0 < 255 ? i0 + 1 : 255;
    const double f = scaled - i0;
    const auto& a = plasma_lut::kEntries[std::size_t(i0)];
    const auto& b = plasma_lut::kEntries[std::size_t(i1)];
    const auto mix = [f](std::uint8_t lo, std::uint8_t hi) {
        return std::uint8_t(std::lround(lo + (hi - lo) * f));
    };
    return ColorCode::from_rgb(mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b));
}

}  // namespace ufcsr

#endif  // UFCSR_PLASMA_HPP_
