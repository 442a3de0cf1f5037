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
#ifndef SCG_BOUNDS_H_
#define SCG_BOUNDS_H_

#include <cstdint>

#include "scg/errors.h"

namespace scg {

// Successes out of trials. Construction validates 0 <= k <= n and n >= 1.
class BinomialObservation {
 public:
  BinomialObservation(std::uint64_t successes, std::uint64_t trials);

  std::uint64_t successes() const { return successes_; }
  std::uint64_t trials() const { return trials_; }

 private:
  std::uint64_t successes_;
  std::uint64_t trials_;
};

// Failure probability of a one-sided bound; must lie in (0, 1).
class ConfidenceBudget {
 public:
  explicit ConfidenceBudget(double delta);

  double delta() const { return delta_; }

 private:
  double delta_;
};

// Bisection stops once the bracket is narrower than this.
inline constexpr double kBoundTolerance = 1e-10;

// Binomial probability mass C(n,k) theta^k (1-theta)^(n-k), evaluated with
// the saddle-point expansion so that it stays accurate for large n.
double BinomPmf(std::uint64_t k, std::uint64_t n, double theta);

// F(k; n, theta) = P{Bin(n, theta) <= k}. Sums whichever tail is shorter
// with the term recurrence, anchored at an accurately evaluated term.
double BinomCdf(std::uint64_t k, std::uint64_t n, double theta);

// P{Bin(n, theta) >= k}.
double BinomSurvivalInclusive(std::uint64_t k, std::uint64_t n, double theta);

// Largest theta with P{Bin(n, theta) >= k} <= delta; 0 when k == 0.
// Guarantees P{lower <= theta_true} >= 1 - delta.
double ClopperPearsonLower(const BinomialObservation& obs,
                           const ConfidenceBudget& budget);

// Smallest theta with P{Bin(n, theta) <= k} <= delta; 1 when k == n.
double ClopperPearsonUpper(const BinomialObservation& obs,
                           const ConfidenceBudget& budget);

}  // namespace scg

#endif  // SCG_BOUNDS_H_
