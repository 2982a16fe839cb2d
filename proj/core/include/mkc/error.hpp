// Copyright 2026 The mkc Authors.
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

#include <stdexcept>
#include <string>

namespace mkc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input (shapes, ranges, NaN entries).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside a solver (eigensolver breakdown, non-finite objective).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File-system or format failure while reading or writing persisted data.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Requested kernel/labels file does not exist.
class MissingFileError : public IoError {
 public:
  using IoError::IoError;
};

/// File contents do not match the declared manifest dimensions.
class DimensionMismatchError : public InputError {
 public:
  using InputError::InputError;
};

/// Matrix or label file holds NaN/Inf or unparsable numbers.
class NonFiniteValueError : public InputError {
 public:
  using InputError::InputError;
};

/// Header, magic or manifest structure is malformed.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace mkc
