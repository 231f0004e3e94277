// spkaug/error.hpp

// Copyright 2026  spkaug authors

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

#ifndef SPKAUG_ERROR_HPP_
#define SPKAUG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace spkaug {

// Base class for every error this library raises. The CLI maps these to
// exit code 2 (data error); flag problems stay with the parser (exit 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File missing, unreadable, or not writable.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// File exists but its contents are not what they claim to be.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// A precondition on operation inputs was violated.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

}  // namespace spkaug

#endif  // SPKAUG_ERROR_HPP_
