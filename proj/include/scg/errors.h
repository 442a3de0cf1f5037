//
// Copyright 2026 The SCG Authors
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
//
#ifndef SCG_ERRORS_H_
#define SCG_ERRORS_H_

#include <stdexcept>
#include <string>

namespace scg {

// Rejected argument, malformed file, or invalid configuration.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The execution harness failed (runner missing, protocol desync). Never a
// statement about the snippet under test.
class InfraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labeling could not complete (short bank, repeated infra failure).
class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Calibration inputs cannot produce a model.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scoring function preconditions violated (empty log-probs, missing score).
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scg

#endif  // SCG_ERRORS_H_
