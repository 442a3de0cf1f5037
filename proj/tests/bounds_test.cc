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

#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <cmath>
#include <vector>

#include "scg/sim.h"

namespace scg {
namespace {

// Reference implementations: direct summation in long double and a plain
// bisection over it. Written independently of bounds.cc.
long double OraclePmf(int k, int n, long double theta) {
  if (theta == 0.0L) return k == 0 ? 1.0L : 0.0L;
  if (theta == 1.0L) return k == n ? 1.0L : 0.0L;
  const long double log_choose = std::lgamma((long double)n + 1) -
                                 std::lgamma((long double)k + 1) -
                                 std::lgamma((long double)(n - k) + 1);
  return std::exp(log_choose + k * std::log(theta) + (n - k) * std::log1p(-theta));
}

long double OracleCdf(int k, int n, long double theta) {
  long double sum = 0.0L;
  for (int i = 0; i <= k; ++i) sum += OraclePmf(i, n, theta);
  return sum;
}

double OracleLower(int k, int n, double delta) {
  if (k == 0) return 0.0;
  long double lo = 0.0L, hi = 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = (lo + hi) / 2;
    const long double survival = 1.0L - OracleCdf(k - 1, n, mid);
    (survival <= delta ? lo : hi) = mid;
  }
  return static_cast<double>(lo);
}

double OracleUpper(int k, int n, double delta) {
  if (k == n) return 1.0;
  long double lo = 0.0L, hi = 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = (lo + hi) / 2;
    (OracleCdf(k, n, mid) <= delta ? hi : lo) = mid;
  }
  return static_cast<double>(hi);
}

double Lower(std::uint64_t k, std::uint64_t n, double delta) {
  return ClopperPearsonLower(BinomialObservation(k, n), ConfidenceBudget(delta));
}

double Upper(std::uint64_t k, std::uint64_t n, double delta) {
  return ClopperPearsonUpper(BinomialObservation(k, n), ConfidenceBudget(delta));
}

TEST(BinomCdf, DocumentedValues) {
  EXPECT_EQ(BinomCdf(0, 5, 0.0), 1.0);
  EXPECT_EQ(BinomCdf(5, 5, 0.7), 1.0);
  EXPECT_NEAR(BinomCdf(2, 5, 0.5), 16.0 / 32.0, 1e-15);
}

TEST(BinomCdf, MatchesDirectSummation) {
  for (int n : {1, 2, 7, 30, 150, 600}) {
    for (double theta : {0.001, 0.1, 0.35, 0.5, 0.65, 0.9, 0.999}) {
      for (int k = 0; k <= n; k += std::max(1, n / 17)) {
        EXPECT_NEAR(BinomCdf(k, n, theta), (double)OracleCdf(k, n, theta), 1e-13)
            << "k=" << k << " n=" << n << " theta=" << theta;
      }
    }
  }
}

TEST(BinomCdf, LargeNAgainstBoost) {
  const std::uint64_t n = 1000000;
  for (double theta : {1e-6, 0.01, 0.3, 0.5, 0.97}) {
    boost::math::binomial_distribution<double> dist(static_cast<double>(n), theta);
    const double mean = n * theta;
    for (double offset : {-2000.0, -50.0, 0.0, 37.0, 1500.0}) {
      const double kk = std::floor(mean + offset);
      if (kk < 0 || kk > n) continue;
      const auto k = static_cast<std::uint64_t>(kk);
      EXPECT_NEAR(BinomCdf(k, n, theta), boost::math::cdf(dist, kk), 1e-12)
          << "k=" << k << " theta=" << theta;
    }
  }
}

TEST(BinomCdf, NonIncreasingInTheta) {
  for (int n : {5, 40, 150}) {
    for (int k = 0; k < n; ++k) {
      double prev = 1.0;
      for (int i = 0; i <= 200; ++i) {
        const double f = BinomCdf(k, n, i / 200.0);
        EXPECT_LE(f, prev + 1e-15);
        prev = f;
      }
    }
  }
}

TEST(BinomCdf, RejectsDomainViolations) {
  EXPECT_THROW(BinomCdf(6, 5, 0.5), InputError);
  EXPECT_THROW(BinomCdf(1, 5, -0.1), InputError);
  EXPECT_THROW(BinomCdf(1, 5, 1.5), InputError);
  EXPECT_THROW(BinomCdf(1, 5, std::nan("")), InputError);
  EXPECT_THROW(BinomialObservation(1, 0), InputError);
  EXPECT_THROW(BinomialObservation(4, 3), InputError);
  EXPECT_THROW(ConfidenceBudget(0.0), InputError);
  EXPECT_THROW(ConfidenceBudget(1.0), InputError);
}

TEST(ClopperPearsonLower, DocumentedValues) {
  EXPECT_EQ(Lower(0, 10, 0.05), 0.0);
  EXPECT_NEAR(Lower(7, 7, 0.05), std::pow(0.05, 1.0 / 7.0), 1e-12);
  EXPECT_NEAR(Lower(7, 7, 0.05), 0.6518, 5e-5);
  EXPECT_NEAR(Lower(7, 7, 0.05), OracleLower(7, 7, 0.05), 1e-10);
  EXPECT_NEAR(Lower(90, 100, 0.05), OracleLower(90, 100, 0.05), 1e-9);
}

TEST(ClopperPearsonUpper, DocumentedValues) {
  EXPECT_EQ(Upper(10, 10, 0.05), 1.0);
  EXPECT_NEAR(Upper(0, 10, 0.05), 1.0 - std::pow(0.05, 0.1), 1e-12);
  EXPECT_NEAR(Upper(0, 10, 0.05), 0.2589, 5e-5);
  EXPECT_NEAR(Upper(3, 20, 0.1), OracleUpper(3, 20, 0.1), 1e-9);
}

TEST(ClopperPearson, AgreesWithReferenceAndBoostOnGrid) {
  using boost::math::binomial_distribution;
  for (int n : {1, 3, 7, 20, 64, 150}) {
    for (double delta : {0.01, 0.05, 0.1, 0.3}) {
      for (int k = 0; k <= n; ++k) {
        const double lo = Lower(k, n, delta);
        const double hi = Upper(k, n, delta);
        EXPECT_NEAR(lo, OracleLower(k, n, delta), 2e-10) << k << "/" << n << " " << delta;
        EXPECT_NEAR(hi, OracleUpper(k, n, delta), 2e-10) << k << "/" << n << " " << delta;
        EXPECT_NEAR(lo, binomial_distribution<>::find_lower_bound_on_p(n, k, delta), 1e-9);
        EXPECT_NEAR(hi, binomial_distribution<>::find_upper_bound_on_p(n, k, delta), 1e-9);
      }
    }
  }
}

TEST(ClopperPearson, MirrorSymmetry) {
  for (int n : {1, 2, 9, 50, 151}) {
    for (double delta : {0.001, 0.05, 0.2, 0.5}) {
      for (int k = 0; k <= n; ++k) {
        EXPECT_NEAR(Upper(k, n, delta), 1.0 - Lower(n - k, n, delta), 1e-9);
      }
    }
  }
}

TEST(ClopperPearson, MonotoneNestedAndBracketing) {
  for (int n : {4, 25, 150}) {
    double prev = -1.0;
    for (int k = 0; k <= n; ++k) {
      const double lo = Lower(k, n, 0.05);
      EXPECT_GE(lo, prev);
      prev = lo;
      if (k > 0 && k < n) {
        EXPECT_LE(lo, static_cast<double>(k) / n);
        EXPECT_GE(Upper(k, n, 0.05), static_cast<double>(k) / n);
      }
      // Smaller delta, wider interval.
      EXPECT_LE(Lower(k, n, 0.01), Lower(k, n, 0.05) + 1e-12);
      EXPECT_LE(Lower(k, n, 0.05), Lower(k, n, 0.2) + 1e-12);
      EXPECT_GE(Upper(k, n, 0.01), Upper(k, n, 0.05) - 1e-12);
    }
  }
}

TEST(ClopperPearson, ConservativeAtAllSuccesses) {
  // P{X >= n} = theta^n, so the bound at k == n is delta^(1/n), strictly
  // below 1 for every n.
  for (int n : {1, 7, 150, 600}) {
    EXPECT_LT(Lower(n, n, 0.05), 1.0);
    EXPECT_NEAR(Lower(n, n, 0.05), std::pow(0.05, 1.0 / n), 1e-12);
  }
}

TEST(Coverage, SmallGridHolds) {
  for (double theta : {0.1, 0.65}) {
    for (std::size_t n : {7, 50}) {
      const CoverageResult r = CheckCoverage(theta, n, 0.05, 4000, Seed{11});
      EXPECT_TRUE(r.passes) << theta << " " << n << " coverage=" << r.coverage;
    }
  }
}

TEST(Coverage, SerialAndParallelAgree) {
  const CoverageResult a = CheckCoverage(0.35, 50, 0.1, 3000, Seed{5}, ExecutionPolicy::kSerial);
  const CoverageResult b = CheckCoverage(0.35, 50, 0.1, 3000, Seed{5}, ExecutionPolicy::kParallel);
  EXPECT_EQ(a.coverage, b.coverage);
}

}  // namespace
}  // namespace scg
