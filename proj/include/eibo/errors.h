// Copyright 2026 The eibo Authors. All Rights Reserved.
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
// =============================================================================

#ifndef EIBO_ERRORS_H_
#define EIBO_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace eibo {

/// Raised when a factorization or variance computation breaks down.
/// Carries the diagonal jitter levels that were tried, if any.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          std::vector<double> attempted_jitter = {})
      : std::runtime_error(what), attempted_jitter_(std::move(attempted_jitter)) {}

  const std::vector<double>& attempted_jitter() const { return attempted_jitter_; }

 private:
  std::vector<double> attempted_jitter_;
};

}  // namespace eibo

#endif  // EIBO_ERRORS_H_
