// Copyright 2026 The padlab Authors. All Rights Reserved.
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

namespace padlab {

/// Invalid arguments, bad geometry, or numeric failure inside a computation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value became NaN/Inf, or a solver could not produce a finite answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace padlab
