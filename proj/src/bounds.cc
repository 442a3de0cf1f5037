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
#include "scg/bounds.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace scg {

namespace {

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
constexpr double kLn2Pi = 1.837877066409345483560659472811;

// Relative size below which a tail term no longer changes the sum.
constexpr double kTailEpsilon = 1e-17;

void CheckTheta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw InputError("binomial: theta must lie in [0, 1], got " +
                     std::to_string(theta));
  }
}

void CheckCount(std::uint64_t k, std::uint64_t n) {
  if (k > n) {
    throw InputError("binomial: k=" + std::to_string(k) +
                     " exceeds n=" + std::to_string(n));
  }
}

// log(n!) - log(sqrt(2 pi n) (n/e)^n).
double StirlingError(double n) {
  constexpr double kS0 = 1.0 / 12.0;
  constexpr double kS1 = 1.0 / 360.0;
  constexpr double kS2 = 1.0 / 1260.0;
  constexpr double kS3 = 1.0 / 1680.0;
  constexpr double kS4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    long double ln = static_cast<long double>(n);
    return static_cast<double>(std::lgamma(ln + 1.0L) - (ln + 0.5L) * std::log(ln) +
                               ln - static_cast<long double>(kLnSqrt2Pi));
  }
  const double nn = n * n;
  if (n > 500) return (kS0 - kS1 / nn) / n;
  if (n > 80) return (kS0 - (kS1 - kS2 / nn) / nn) / n;
  if (n > 35) return (kS0 - (kS1 - (kS2 - kS3 / nn) / nn) / nn) / n;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x / np) + np - x, without cancellation near x == np.
double Deviance(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / static_cast<double>(2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// Sum of pmf(i) for i in [0, k], walking downward from k. Only called when k
// sits at or below the mean, where the terms shrink geometrically.
double SumDown(std::uint64_t k, std::uint64_t n, double theta) {
  double term = BinomPmf(k, n, theta);
  double sum = term;
  const double odds = (1.0 - theta) / theta;
  for (std::uint64_t i = k; i >= 1 && term > sum * kTailEpsilon; --i) {
    term *= static_cast<double>(i) / static_cast<double>(n - i + 1) * odds;
    sum += term;
  }
  return std::min(sum, 1.0);
}

// Sum of pmf(i) for i in [k, n], walking upward from k. Only called when k
// sits at or above the mean.
double SumUp(std::uint64_t k, std::uint64_t n, double theta) {
  double term = BinomPmf(k, n, theta);
  double sum = term;
  const double odds = theta / (1.0 - theta);
  for (std::uint64_t i = k; i < n && term > sum * kTailEpsilon; ++i) {
    term *= static_cast<double>(n - i) / static_cast<double>(i + 1) * odds;
    sum += term;
  }
  return std::min(sum, 1.0);
}

// 1 - delta^(1/n), without cancellation for small delta^(1/n) deficits.
double OneMinusRoot(double delta, std::uint64_t n) {
  return -std::expm1(std::log(delta) / static_cast<double>(n));
}

}  // namespace

BinomialObservation::BinomialObservation(std::uint64_t successes,
                                         std::uint64_t trials)
    : successes_(successes), trials_(trials) {
  if (trials == 0) throw InputError("binomial observation needs n >= 1");
  CheckCount(successes, trials);
}

ConfidenceBudget::ConfidenceBudget(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InputError("confidence budget must lie in (0, 1), got " +
                     std::to_string(delta));
  }
}

double BinomPmf(std::uint64_t k, std::uint64_t n, double theta) {
  CheckCount(k, n);
  CheckTheta(theta);
  const double q = 1.0 - theta;
  if (theta == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 0.0) return k == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  if (k == 0) {
    if (n == 0) return 1.0;
    const double lc =
        theta < 0.1 ? -Deviance(nd, nd * q) - nd * theta : nd * std::log(q);
    return std::exp(lc);
  }
  if (k == n) {
    const double lc =
        q < 0.1 ? -Deviance(nd, nd * theta) - nd * q : nd * std::log(theta);
    return std::exp(lc);
  }
  const double kd = static_cast<double>(k);
  const double lc = StirlingError(nd) - StirlingError(kd) -
                    StirlingError(nd - kd) - Deviance(kd, nd * theta) -
                    Deviance(nd - kd, nd * q);
  const double lf = kLn2Pi + std::log(kd) + std::log1p(-kd / nd);
  return std::exp(lc - 0.5 * lf);
}

double BinomCdf(std::uint64_t k, std::uint64_t n, double theta) {
  CheckCount(k, n);
  CheckTheta(theta);
  if (k == n || theta == 0.0) return 1.0;
  if (theta == 1.0) return 0.0;
  const double mean = static_cast<double>(n) * theta;
  if (static_cast<double>(k) <= mean) return SumDown(k, n, theta);
  return std::max(0.0, 1.0 - SumUp(k + 1, n, theta));
}

double BinomSurvivalInclusive(std::uint64_t k, std::uint64_t n, double theta) {
  CheckCount(k, n);
  CheckTheta(theta);
  if (k == 0 || theta == 1.0) return 1.0;
  if (theta == 0.0) return 0.0;
  const double mean = static_cast<double>(n) * theta;
  if (static_cast<double>(k) >= mean) return SumUp(k, n, theta);
  return std::max(0.0, 1.0 - SumDown(k - 1, n, theta));
}

double ClopperPearsonLower(const BinomialObservation& obs,
                           const ConfidenceBudget& budget) {
  const std::uint64_t k = obs.successes();
  const std::uint64_t n = obs.trials();
  const double delta = budget.delta();
  if (k == 0) return 0.0;
  if (k == n) return 1.0 - OneMinusRoot(delta, n);
  // P{X >= k} increases with theta; lo always satisfies the constraint.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBoundTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (BinomSurvivalInclusive(k, n, mid) <= delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double ClopperPearsonUpper(const BinomialObservation& obs,
                           const ConfidenceBudget& budget) {
  const std::uint64_t k = obs.successes();
  const std::uint64_t n = obs.trials();
  const double delta = budget.delta();
  if (k == n) return 1.0;
  if (k == 0) return OneMinusRoot(delta, n);
  // P{X <= k} decreases with theta; hi always satisfies the constraint.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBoundTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (BinomCdf(k, n, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace scg
