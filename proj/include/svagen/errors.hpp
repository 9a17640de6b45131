// Copyright 2026 The svagen Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace svagen {

/// Base class for all errors raised by this library. Each subclass maps to
/// a distinct CLI exit code (see pipeline/config.hpp).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration, bad paths, out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Graph-level violations (node type conflicts, dangling edge endpoints).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized artifacts. Carries the byte offset when known.
class SerializeError : public Error {
 public:
  SerializeError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_ = 0;
};

/// RTL source problems: lex/parse failures with file:line:col positions.
class RtlParseError : public Error {
 public:
  RtlParseError(const std::string& file, int line, int col, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        file_(file),
        line_(line),
        col_(col) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  std::string file_;
  int line_ = 0;
  int col_ = 0;
};

/// `include resolution failures: missing targets or include cycles.
class IncludeError : public Error {
 public:
  using Error::Error;
};

/// LLM provider failures.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class AuthError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RateLimitError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class MalformedResponseError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

/// A pipeline run that produced no usable result at all.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

}  // namespace svagen
