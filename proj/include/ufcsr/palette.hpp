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
// The full color space palette: a bijection between every 24-bit RGB color
// and a texel of a 4096x4096 texture. The mapping is the identity on
// integers — a texel's row-major linear index IS its packed color — so
// conversion in either direction is branch-free.

#ifndef UFCSR_PALETTE_HPP_
#define UFCSR_PALETTE_HPP_

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"

namespace ufcsr {

/// One 24-bit RGB color, packed as red = bits 23-16, green = 15-8, blue = 7-0.
struct ColorCode {
    std::uint32_t value = 0;

    std::uint8_t r() const { return std::uint8_t(value >> 16); }
    std::uint8_t g() const { return std::uint8_t(value >> 8); }
    std::uint8_t b() const { return std::uint8_t(value); }

    static ColorCode from_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        return {(std::uint32_t(r) << 16) | (std::uint32_t(g) << 8) | b};
    }

    bool operator==(const ColorCode&) const = default;
};

/// Position of one texel; row 0 is the top image row.
struct TexelIndex {
    int x = 0;
    int y = 0;

    bool operator==(const TexelIndex&) const = default;
};

namespace palette {

inline constexpr int kWidth = 4096;
inline constexpr int kHeight = 4096;
inline constexpr std::uint32_t kColorCount = 1u << 24;  // 4096*4096 = 256^3

/// Background/occluder color excluded from counting. Falls on texel
/// (4095, 0), the last texel of the top row.
inline constexpr std::uint32_t kDefaultIgnoreColor = 0x000FFF;

inline bool in_range(TexelIndex t) {
    return t.x >= 0 && t.x < kWidth && t.y >= 0 && t.y < kHeight;
}

/// Texel -> color. The packed color equals the row-major linear index.
inline ColorCode index_to_color(TexelIndex t) {
    if (!in_range(t))
        raise(ErrorKind::range, "texel index out of range");
    return {std::uint32_t(t.y) * kWidth + std::uint32_t(t.x)};
}

/// Color -> texel. Total on the whole 24-bit space; inverse of
/// index_to_color.
inline TexelIndex color_to_index(ColorCode c) {
    const std::uint32_t v = c.value & 0xFFFFFF;
    return {int(v % kWidth), int(v / kWidth)};
}

/// Renders the palette itself: pixel (x, y) carries index_to_color(x, y).
inline ImageRgb generate_fcsp() {
    ImageRgb img(kWidth, kHeight);
    std::uint8_t* p = img.bytes().data();
    for (std::uint32_t v = 0; v < kColorCount; ++v) {
        *p++ = std::uint8_t(v >> 16);
        *p++ = std::uint8_t(v >> 8);
        *p++ = std::uint8_t(v);
    }
    return img;
}

/// One bit per 24-bit color; the working set for coverage bookkeeping.
class ColorSet {
public:
    ColorSet() : bits_(kColorCount / 64, 0) {}

    void insert(std::uint32_t color) {
        bits_[color >> 6] |= std::uint64_t(1) << (color & 63);
    }

    bool contains(std::uint32_t color) const {
        return (bits_[color >> 6] >> (color & 63)) & 1;
    }

    std::uint64_t count() const {
        std::uint64_t n = 0;
        for (std::uint64_t w : bits_) n += std::uint64_t(std::popcount(w));
        return n;
    }

private:
    std::vector<std::uint64_t> bits_;
};

/// Picks the color used for background and occluders. Prefers the
/// conventional 0x000FFF; when the mesh layout covers it, falls back to the
/// smallest unused color so runs stay reproducible.
inline ColorCode select_ignore_color(const ColorSet& covered) {
    if (!covered.contains(kDefaultIgnoreColor)) return {kDefaultIgnoreColor};
    for (std::uint64_t v = 0; v < kColorCount; ++v) {
        if (!covered.contains(std::uint32_t(v))) return {std::uint32_t(v)};
    }
    raise(ErrorKind::range, "every color is covered; no ignore color available");
}

}  // namespace palette
}  // namespace ufcsr

#endif  // UFCSR_PALETTE_HPP_
