// Copyright 2026 The Authors.
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

#ifndef ALSEL_ERRORS_H_
#define ALSEL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace alsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input. `position` is a 1-based line number or a 0-based byte
// offset, depending on the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Zero-norm vectors and non-positive ratio denominators.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A selected unit has no translation in the simulated oracle's reference.
class OracleGapError : public Error {
 public:
  using Error::Error;
};

}  // namespace alsel

#endif  // ALSEL_ERRORS_H_
