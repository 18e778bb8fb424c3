// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qconv {

enum class ErrorKind {
    InvalidParameter,
    InvalidRepresentation,
    FormatError,
    ResourceLimit,
    IllConditioned,
    InsufficientData,
};

/// Machine-readable tag, e.g. "invalid-parameter".
std::string_view error_tag(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the VOXG reader; carries the byte offset where parsing failed.
class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string &message)
        : Error(ErrorKind::FormatError,
                message + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

inline std::string_view error_tag(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidParameter:
        return "invalid-parameter";
    case ErrorKind::InvalidRepresentation:
        return "invalid-representation";
    case ErrorKind::FormatError:
        return "format-error";
    case ErrorKind::ResourceLimit:
        return "resource-limit";
    case ErrorKind::IllConditioned:
        return "ill-conditioned";
    case ErrorKind::InsufficientData:
        return "insufficient-data";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

inline void require(bool condition, const std::string &message) {
    if (!condition) {
        throw Error(ErrorKind::InvalidParameter, message);
    }
}

} // namespace qconv
