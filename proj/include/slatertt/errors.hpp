// Copyright 2026 The slatertt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace slatertt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A dense object would exceed the configured size cap (2^L entries, C(L,N) subsets).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Input violates a documented precondition (not a partial isometry, bad shape, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computed object violates an invariant it should satisfy by construction.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Full-rank condition on the column blocks V_k / W_k failed; `side` names the block.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& side, double smallest_singular_value)
        : Error("rank-deficient " + side + " block (smallest singular value "
                + std::to_string(smallest_singular_value) + ")"),
          side_(side), smallest_(smallest_singular_value) {}

    const std::string& side() const noexcept { return side_; }
    double smallest_singular_value() const noexcept { return smallest_; }

private:
    std::string side_;
    double smallest_;
};

/// Malformed text input; line/column are 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column "
                + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace slatertt
