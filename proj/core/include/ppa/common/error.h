// Copyright 2026 The ppalab Authors
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

#ifndef PPA_COMMON_ERROR_H_
#define PPA_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace ppa {

// Base of every error thrown by the library. The subclasses mirror the error
// categories the command-line tool maps onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed in data that violates a precondition (shape, emptiness...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A file or byte stream does not follow its container format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// An experiment or component configuration is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A stateful object was driven through an illegal transition.
class StateError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant, e.g. mismatched parameter layouts.
class InternalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppa

#endif  // PPA_COMMON_ERROR_H_
