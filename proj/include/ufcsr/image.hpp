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

#ifndef UFCSR_IMAGE_HPP_
#define UFCSR_IMAGE_HPP_

#include <cstdint>
#include <cstddef>
#include <vector>

#include "ufcsr/error.hpp"

namespace ufcsr {

/// Plain 8-bit-per-channel RGB raster, row-major, row 0 at top.
class ImageRgb {
public:
    ImageRgb() = default;
    ImageRgb(int width, int height, std::uint32_t fill = 0)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * height * 3) {
        if (width <= 0 || height <= 0)
            raise(ErrorKind::range, "image dimensions must be positive");
        if (fill != 0) this->fill(fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint32_t pixel(int x, int y) const {
        const std::uint8_t* p = data_.data() + offset(x, y);
        return (std::uint32_t(p[0]) << 16) | (std::uint32_t(p[1]) << 8) | p[2];
    }

    void set_pixel(int x, int y, std::uint32_t rgb) {
        std::uint8_t* p = data_.data() + offset(x, y);
        p[0] = std::uint8_t(rgb >> 16);
        p[1] = std::uint8_t(rgb >> 8);
        p[2] = std::uint8_t(rgb);
    }

    void fill(std::uint32_t rgb) {
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i]     = std::uint8_t(rgb >> 16);
            data_[i + 1] = std::uint8_t(rgb >> 8);
            data_[i + 2] = std::uint8_t(rgb);
        }
    }

    const std::vector<std::uint8_t>& bytes() const { return data_; }
    std::vector<std::uint8_t>& bytes() { return data_; }

    bool operator==(const ImageRgb& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               data_ == other.data_;
    }

private:
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

}  // namespace ufcsr

#endif  // UFCSR_IMAGE_HPP_
