// ctcalign/errors.hpp
//
// Copyright 2026  The ctcalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCALIGN_ERRORS_HPP
#define CTCALIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctcalign {

/// Malformed or inconsistent input (files, documents, arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No legal CTC alignment exists for the given posteriorgram and targets.
/// `frame()` is the first frame at which every reachable state died, or -1
/// when the failure is structural (too few frames for the target).
class InfeasibleAlignment : public std::runtime_error {
 public:
  InfeasibleAlignment(const std::string& what, long frame = -1)
      : std::runtime_error(what), frame_(frame) {}
  long frame() const noexcept { return frame_; }

 private:
  long frame_;
};

/// Failure of an external helper process (G2P front end).
class ExternalToolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctcalign

#endif  // CTCALIGN_ERRORS_HPP
