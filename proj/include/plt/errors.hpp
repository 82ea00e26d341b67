// Copyright 2026 The PLT Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An id exceeds a declared bound or refers to nothing.
class RangeError : public Error {
 public:
  using Error::Error;
};

class TreeError : public Error {
 public:
  using Error::Error;
};

/// A node update produced a non-finite value.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

/// Model directory is missing, truncated, corrupted or of another version.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace plt
