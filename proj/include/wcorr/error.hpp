// Copyright 2026 The wcorr Authors
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

#ifndef WCORR_ERROR_HPP
#define WCORR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace wcorr {

/// Failure raised by every wcorr operation.
///
/// `code()` is a short stable tag ("bad-subsystem", "null-postselection", ...)
/// that callers switch on; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
   public:
    Error(std::string code, const std::string &detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(detail) {}

    const std::string &code() const noexcept { return code_; }
    const std::string &detail() const noexcept { return detail_; }

   private:
    std::string code_;
    std::string detail_;
};

/// An input violated a structural invariant (non-Hermitian matrix, bad trace, ...).
class InvariantViolation : public Error {
   public:
    InvariantViolation(std::string invariant, const std::string &detail)
        : Error("invariant-violation", invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string &invariant() const noexcept { return invariant_; }

   private:
    std::string invariant_;
};

}  // namespace wcorr

#endif  // WCORR_ERROR_HPP
