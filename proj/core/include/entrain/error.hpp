// Copyright 2026 The Entrain Authors
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

#ifndef ENTRAIN_ERROR_HPP_
#define ENTRAIN_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entrain {

// Root of every error the library throws on bad input. Contract violations by
// the caller (mismatched lengths, invalid configs) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A rating outside its scale's declared range.
class RangeError : public ValidationError {
 public:
  RangeError(const std::string& scale, const std::string& what)
      : ValidationError(scale + ": " + what), scale_(scale) {}
  const std::string& scale() const { return scale_; }

 private:
  std::string scale_;
};

// Too few samples, turns, or frames to compute the requested quantity.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Correlation requested on a constant sequence.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace entrain

#endif  // ENTRAIN_ERROR_HPP_
