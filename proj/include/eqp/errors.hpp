// Copyright 2026 The eqptomo Authors
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

namespace eqp {

/// Base of every error raised by the reconstruction pipeline. `stage()` names
/// the pipeline stage that failed so the CLI can report it.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class NonFiniteInput : public Error {
 public:
  explicit NonFiniteInput(const std::string& what) : Error("tomography", what) {}
};

class InsufficientCounts : public Error {
 public:
  InsufficientCounts(int k, int l, double normalizer)
      : Error("tomography", "insufficient counts for correlation (" + std::to_string(k) + "," +
                                std::to_string(l) + "): normalizer " + std::to_string(normalizer) +
                                " < 2"),
        k_(k),
        l_(l) {}
  int k() const noexcept { return k_; }
  int l() const noexcept { return l_; }

 private:
  int k_, l_;
};

class NoRealRoot : public Error {
 public:
  explicit NoRealRoot(const std::string& what) : Error("standard-form", what) {}
};

class NoValidBoost : public Error {
 public:
  explicit NoValidBoost(const std::string& what) : Error("standard-form", what) {}
};

class DegenerateState : public Error {
 public:
  explicit DegenerateState(const std::string& what) : Error("standard-form", what) {}
};

class NotConverged : public Error {
 public:
  explicit NotConverged(const std::string& what) : Error("standard-form", what) {}
};

class SingularTransformation : public Error {
 public:
  explicit SingularTransformation(const std::string& what) : Error("eqp", what) {}
};

class UnphysicalState : public Error {
 public:
  explicit UnphysicalState(const std::string& what) : Error("synthgen", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("input", what) {}
};

}  // namespace eqp
