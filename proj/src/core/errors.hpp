// Copyright 2026 The qmetric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRIC_CORE_ERRORS_HPP
#define QMETRIC_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace qmetric {

// Caller violated a precondition (mixed families, bad parameters, ...).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

class UnsupportedError : public std::logic_error {
 public:
  explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

// A ball (or a BFS frontier) would exceed the configured memory guard.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

class OverflowError : public std::overflow_error {
 public:
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

// A proven statement failed on concrete data; `citation` names it.
class InvariantViolation : public std::logic_error {
 public:
  InvariantViolation(std::string citation, const std::string& what)
      : std::logic_error(what), citation_(std::move(citation)) {}
  const std::string& citation() const { return citation_; }

 private:
  std::string citation_;
};

}  // namespace qmetric

#endif  // QMETRIC_CORE_ERRORS_HPP
