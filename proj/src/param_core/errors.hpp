// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lawa {

enum class ErrorCode : int {
    StructureMismatch = 1,
    NonFinite,
    NonFiniteGrad,
    Io,
    Format,
    EpochOrder,
    InternalState,
    Config,
    Shape,
    EmptyData,
    Schema,
    Parse,
    InsufficientCheckpoints,
    Usage,
};

const char* error_code_name(ErrorCode code) noexcept;

// Base of every error raised by the toolkit. The code is what crosses the C boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define LAWA_DEFINE_ERROR(Name, Code)                                                   \
    class Name : public Error {                                                         \
    public:                                                                             \
        explicit Name(const std::string& message) : Error(ErrorCode::Code, message) {} \
    };

LAWA_DEFINE_ERROR(StructureMismatch, StructureMismatch)
LAWA_DEFINE_ERROR(NonFiniteError, NonFinite)
LAWA_DEFINE_ERROR(NonFiniteGradError, NonFiniteGrad)
LAWA_DEFINE_ERROR(IoError, Io)
LAWA_DEFINE_ERROR(EpochOrderError, EpochOrder)
LAWA_DEFINE_ERROR(InternalStateError, InternalState)
LAWA_DEFINE_ERROR(ConfigError, Config)
LAWA_DEFINE_ERROR(ShapeError, Shape)
LAWA_DEFINE_ERROR(EmptyDataError, EmptyData)
LAWA_DEFINE_ERROR(SchemaError, Schema)
LAWA_DEFINE_ERROR(InsufficientCheckpoints, InsufficientCheckpoints)
LAWA_DEFINE_ERROR(UsageError, Usage)

#undef LAWA_DEFINE_ERROR

class FormatError : public Error {
public:
    FormatError(std::uint64_t offset, const std::string& message)
        : Error(ErrorCode::Format, message + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset),
          detail_(message) {}
    [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    std::uint64_t offset_;
    std::string detail_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& message)
        : Error(ErrorCode::Parse, message + " (row " + std::to_string(row) + ", column " +
                                      std::to_string(column) + ")"),
          row_(row),
          column_(column) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace lawa
