/* Copyright 2026 The docsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace docsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HeterogeneousArray : public Error {
 public:
  using Error::Error;
};

/// Empty or all-null array (or a bare null) with no fallback type.
class UntypableArray : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message),
        position_(position),
        message_(message) {}
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t position_;
  std::string message_;
};

class UnknownCollection : public Error {
 public:
  explicit UnknownCollection(const std::string& name)
      : Error("unknown collection: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnwindNonArray : public Error {
 public:
  explicit UnwindNonArray(const std::string& path)
      : Error("unwind over non-array value at " + path) {}
};

class NotASubset : public Error {
 public:
  using Error::Error;
};

class MalformedFormula : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; `where` is a JSON-pointer-like path to the fault.
class InputError : public Error {
 public:
  InputError(std::string where, const std::string& message)
      : Error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

}  // namespace docsynth
