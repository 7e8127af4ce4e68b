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

#ifndef UFCSR_ERROR_HPP_
#define UFCSR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ufcsr {

/// Category of a pipeline failure. The CLI maps these onto exit codes.
enum class ErrorKind {
    range,         // argument outside its documented domain
    format,        // unreadable or malformed input file
    unwrap,        // mesh lacks usable texture coordinates
    overlap,       // two faces claim the same texel
    geometry,      // non-finite or degenerate geometry
    tiling,        // frame dimensions not divisible by the tile grid
    config,        // scenario / run configuration invalid
    ownership,     // texel not owned by any face
    consistency,   // two artifacts that must agree do not
    empty_data,    // analysis requested on all-zero data
    manifest,      // capture manifest out of sync with tile files
    storage,       // filesystem failure
    strict_color,  // color observed outside {ignore} + owned set
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace ufcsr

#endif  // UFCSR_ERROR_HPP_
