/*
 * Copyright 2026 The spogasim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace spogasim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand value outside the representable range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector lengths or matrix dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Vector longer than the hardware capacity of the target unit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid configuration (selector/radix mismatch,
/// missing cost entry, bad flag combination, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Key not present in a bundled dataset.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; message carries file and line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spogasim
