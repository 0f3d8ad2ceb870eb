// Copyright 2026 The Muse Authors
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

#ifndef MUSE_ERRORS_H
#define MUSE_ERRORS_H

#include <stdexcept>
#include <string>

namespace muse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source text could not be parsed. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " +
              message),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Valid Solidity that uses a feature outside the supported grammar subset.
class UnsupportedConstruct : public ParseError {
 public:
  UnsupportedConstruct(int line, int col, const std::string& construct)
      : ParseError(line, col, "unsupported construct: " + construct),
        construct_(construct) {}

  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

class OutOfBoundsError : public Error {
 public:
  using Error::Error;
};

class UnknownOperator : public Error {
 public:
  using Error::Error;
};

class StaleMutation : public Error {
 public:
  using Error::Error;
};

class CompilerUnavailable : public Error {
 public:
  using Error::Error;
};

class OriginalDoesNotCompile : public Error {
 public:
  using Error::Error;
};

class RunnerError : public Error {
 public:
  using Error::Error;
};

class DetectorUnavailable : public Error {
 public:
  using Error::Error;
};

class DetectorCrash : public Error {
 public:
  DetectorCrash(const std::string& message, std::string output)
      : Error(message), output_(std::move(output)) {}

  const std::string& output() const { return output_; }

 private:
  std::string output_;
};

class MissingArtifact : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// The unmutated project's test suite does not pass.
class BaselineFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace muse

#endif  // MUSE_ERRORS_H
