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
// Deterministic PNG writer and a reader for the subset it emits.
//
// The writer is pinned: 8-bit RGB, no interlace, no ancillary chunks, filter
// Sub on row 0 and Up on every later row, and a fixed DEFLATE framing. The
// framing puts the first four filtered bytes (the row-0 filter tag plus the
// first pixel) into a stored block and compresses the rest with zlib at a
// fixed level. Every predictor of the first pixel of the first row is zero,
// so those four bytes are the only place a solid tile's color can appear;
// once they sit in a length-prefixed stored block, solid tiles of any color
// compress to byte-identical remainders and therefore equal file sizes —
// the property the capture trim threshold depends on.

#ifndef UFCSR_PNG_IO_HPP_
#define UFCSR_PNG_IO_HPP_

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ufcsr/error.hpp"
#include "ufcsr/image.hpp"

namespace ufcsr {
namespace png {

inline constexpr int kZlibLevel = 6;
inline constexpr std::size_t kStoredPrefixBytes = 4;
inline constexpr std::size_t kIdatChunkBytes = 1u << 20;

/// Identifies the pinned writer configuration in capture manifests.
inline std::string encoder_id() {
    return "png8-rgb/sub0-up/stored4/z" + std::to_string(kZlibLevel);
}

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v));
}

inline void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
                      const std::uint8_t* data, std::size_t len) {
    put_u32_be(out, std::uint32_t(len));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data, data + len);
    std::uint32_t crc = ::crc32(0, out.data() + type_at, uInt(4 + len));
    put_u32_be(out, crc);
}

/// Row 0 Sub, later rows Up. Content-independent filter choice; the tag
/// byte precedes each row.
inline std::vector<std::uint8_t> filter_scanlines(const ImageRgb& img) {
    const std::size_t stride = std::size_t(img.width()) * 3;
    const std::uint8_t* src = img.bytes().data();
    std::vector<std::uint8_t> out(std::size_t(img.height()) * (stride + 1));
    std::uint8_t* dst = out.data();
    for (int y = 0; y < img.height(); ++y) {
        const std::uint8_t* row = src + std::size_t(y) * stride;
        if (y == 0) {
            *dst++ = 1;  // Sub
            for (std::size_t i = 0; i < stride; ++i)
                *dst++ = std::uint8_t(row[i] - (i >= 3 ? row[i - 3] : 0));
        } else {
            const std::uint8_t* up = row - stride;
            *dst++ = 2;  // Up
            for (std::size_t i = 0; i < stride; ++i)
                *dst++ = std::uint8_t(row[i] - up[i]);
        }
    }
    return out;
}

inline std::vector<std::uint8_t> deflate_raw(const std::uint8_t* data,
                                             std::size_t len) {
    z_stream zs;
    std::memset(&zs, 0, sizeof zs);
    if (deflateInit2(&zs, kZlibLevel, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        raise(ErrorKind::storage, "deflate init failed");
    std::vector<std::uint8_t> out;
    std::uint8_t buf[1 << 16];
    zs.next_in = const_cast<Bytef*>(data);
    zs.avail_in = uInt(len);
    int ret;
    do {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        ret = deflate(&zs, Z_FINISH);
        out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    } while (ret == Z_OK);
    deflateEnd(&zs);
    if (ret != Z_STREAM_END)
        raise(ErrorKind::storage, "deflate failed");
    return out;
}

/// zlib-framed stream: fixed header, a stored block holding the first
/// kStoredPrefixBytes bytes, the deflated remainder, and the adler32 of the
/// whole input.
inline std::vector<std::uint8_t> compress_idat(const std::vector<std::uint8_t>& raw) {
    std::vector<std::uint8_t> out;
    out.push_back(0x78);
    out.push_back(0x9C);
    const std::size_t prefix = raw.size() < kStoredPrefixBytes ? raw.size()
                                                               : kStoredPrefixBytes;
    const bool stored_is_final = prefix == raw.size();
    out.push_back(stored_is_final ? 0x01 : 0x00);  // BFINAL | BTYPE=00
    out.push_back(std::uint8_t(prefix));
    out.push_back(std::uint8_t(prefix >> 8));
    out.push_back(std::uint8_t(~prefix));
    out.push_back(std::uint8_t(~(prefix >> 8)));
    out.insert(out.end(), raw.data(), raw.data() + prefix);
    if (!stored_is_final) {
        auto tail = deflate_raw(raw.data() + prefix, raw.size() - prefix);
        out.insert(out.end(), tail.begin(), tail.end());
    }
    std::uint32_t adler = ::adler32(1, raw.data(), uInt(raw.size()));
    put_u32_be(out, adler);
    return out;
}

}  // namespace detail

/// Encodes the image with the pinned settings. Identical images produce
/// identical bytes.
inline std::vector<std::uint8_t> encode(const ImageRgb& img) {
    std::vector<std::uint8_t> out;
    static const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    out.insert(out.end(), sig, sig + 8);

    std::uint8_t ihdr[13];
    ihdr[0] = std::uint8_t(std::uint32_t(img.width()) >> 24);
    ihdr[1] = std::uint8_t(std::uint32_t(img.width()) >> 16);
    ihdr[2] = std::uint8_t(std::uint32_t(img.width()) >> 8);
    ihdr[3] = std::uint8_t(img.width());
    ihdr[4] = std::uint8_t(std::uint32_t(img.height()) >> 24);
    ihdr[5] = std::uint8_t(std::uint32_t(img.height()) >> 16);
    ihdr[6] = std::uint8_t(std::uint32_t(img.height()) >> 8);
    ihdr[7] = std::uint8_t(img.height());
    ihdr[8] = 8;   // bit depth
    ihdr[9] = 2;   // truecolor
    ihdr[10] = 0;  // compression
    ihdr[11] = 0;  // filter method
    ihdr[12] = 0;  // no interlace
    detail::put_chunk(out, "IHDR", ihdr, sizeof ihdr);

    const auto idat = detail::compress_idat(detail::filter_scanlines(img));
    for (std::size_t at = 0; at < idat.size(); at += kIdatChunkBytes) {
        const std::size_t n = std::min(kIdatChunkBytes, idat.size() - at);
        detail::put_chunk(out, "IDAT", idat.data() + at, n);
    }
    detail::put_chunk(out, "IEND", nullptr, 0);
    return out;
}

namespace detail {

inline std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | p[3];
}

inline std::vector<std::uint8_t> inflate_all(const std::vector<std::uint8_t>& in,
                                             std::size_t expect) {
    z_stream zs;
    std::memset(&zs, 0, sizeof zs);
    if (inflateInit(&zs) != Z_OK)
        raise(ErrorKind::format, "inflate init failed");
    std::vector<std::uint8_t> out(expect);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = uInt(in.size());
    zs.next_out = out.data();
    zs.avail_out = uInt(out.size());
    int ret = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (ret != Z_STREAM_END || zs.avail_out != 0)
        raise(ErrorKind::format, "corrupt compressed image data");
    return out;
}

inline int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace detail

/// Decodes 8-bit RGB PNGs (any standard filter; no interlace, no palette).
inline ImageRgb decode(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0)
        raise(ErrorKind::format, "not a PNG file");

    int width = 0, height = 0;
    bool saw_ihdr = false, saw_iend = false;
    std::vector<std::uint8_t> idat;
    std::size_t at = 8;
    while (at + 12 <= bytes.size() && !saw_iend) {
        const std::uint32_t len = detail::get_u32_be(bytes.data() + at);
        if (at + 12 + len > bytes.size())
            raise(ErrorKind::format, "truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(bytes.data() + at + 4);
        const std::uint8_t* data = bytes.data() + at + 8;
        const std::uint32_t want_crc = detail::get_u32_be(data + len);
        if (::crc32(0, bytes.data() + at + 4, uInt(4 + len)) != want_crc)
            raise(ErrorKind::format, "PNG chunk CRC mismatch");
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) raise(ErrorKind::format, "bad IHDR length");
            width = int(detail::get_u32_be(data));
            height = int(detail::get_u32_be(data + 4));
            if (data[8] != 8 || data[9] != 2 || data[10] != 0 || data[11] != 0 ||
                data[12] != 0)
                raise(ErrorKind::format, "unsupported PNG variant (need 8-bit RGB)");
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        at += 12 + len;
    }
    if (!saw_ihdr || !saw_iend || width <= 0 || height <= 0)
        raise(ErrorKind::format, "incomplete PNG stream");

    const std::size_t stride = std::size_t(width) * 3;
    const auto raw = detail::inflate_all(idat, std::size_t(height) * (stride + 1));

    ImageRgb img(width, height);
    std::uint8_t* dst = img.bytes().data();
    const std::uint8_t* src = raw.data();
    for (int y = 0; y < height; ++y) {
        const int filt = *src++;
        std::uint8_t* row = dst + std::size_t(y) * stride;
        const std::uint8_t* up = y > 0 ? row - stride : nullptr;
        for (std::size_t i = 0; i < stride; ++i) {
            const int left = i >= 3 ? row[i - 3] : 0;
            const int above = up ? up[i] : 0;
            const int corner = (up && i >= 3) ? up[i - 3] : 0;
            int v = *src++;
            switch (filt) {
                case 0: break;
                case 1: v += left; break;
                case 2: v += above; break;
                case 3: v += (left + above) / 2; break;
                case 4: v += detail::paeth(left, above, corner); break;
                default: raise(ErrorKind::format, "unknown PNG filter type");
            }
            row[i] = std::uint8_t(v);
        }
    }
    return img;
}

inline void write_file(const std::string& path, const ImageRgb& img) {
    const auto bytes = encode(img);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(ErrorKind::storage, "cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
    if (!f) raise(ErrorKind::storage, "write failed: " + path);
}

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) raise(ErrorKind::storage, "cannot open: " + path);
    const std::size_t size = std::size_t(f.tellg());
    f.seekg(0);
    std::vector<std::uint8_t> bytes(size);
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) raise(ErrorKind::storage, "read failed: " + path);
    return bytes;
}

inline ImageRgb read_file(const std::string& path) {
    return decode(read_bytes(path));
}

}  // namespace png
}  // namespace ufcsr

#endif  // UFCSR_PNG_IO_HPP_
