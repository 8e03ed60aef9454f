// include/svts/core/error.h

// Copyright 2026  The SVTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SVTS_CORE_ERROR_H_
#define SVTS_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace svts {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// A value or file violates a documented invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what) : Error(what) {}
};

/// A text or binary record could not be parsed.  Carries the 1-based line
/// number when the source is line oriented (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string &what, size_t line = 0);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

/// Tensor or array dimensions do not agree.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &what) : Error(what) {}
};

/// File system or external-process failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error(what) {}
};

}  // namespace svts

#endif  // SVTS_CORE_ERROR_H_
