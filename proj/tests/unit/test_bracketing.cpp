// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "winlayer/bracketing.hpp"
#include "winlayer/error.hpp"

using namespace winlayer;

namespace {

constexpr double kPi = std::numbers::pi;

WindowSpectrum manual(BoundaryCondition bc, std::vector<double> values) {
  WindowSpectrum s;
  s.bc = bc;
  s.values = std::move(values);
  s.estimated_error.assign(s.values.size(), 0.0);
  s.order.assign(s.values.size(), -1);
  return s;
}

}  // namespace

TEST_CASE("threshold shift for symmetric and asymmetric layers") {
  CHECK(threshold_shift(LayerPair(kPi)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(threshold_shift(LayerPair(kPi / 2)) == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(threshold_shift(LayerPair(1e-9)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(count_threshold(LayerPair(kPi)) == doctest::Approx(0.75).epsilon(1e-15));
  for (double d : {0.1, 1.0, 2.5, kPi}) {
    const LayerPair lp(d);
    CHECK(threshold_shift(lp) + count_threshold(lp) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("LayerPair validates d and reports gamma") {
  CHECK(LayerPair(kPi).gamma() == 2);
  CHECK(LayerPair(kPi / 2).gamma() == 1);
  CHECK_THROWS_AS(LayerPair(0.0), InvalidInput);
  CHECK_THROWS_AS(LayerPair(-1.0), InvalidInput);
  CHECK_THROWS_AS(LayerPair(3.2), InvalidInput);
}

TEST_CASE("disk of radius 5, symmetric layers") {
  const LayerPair lp(kPi);
  const auto n = disk_window_spectrum(5.0, BoundaryCondition::kNeumann, 12);
  const auto d = disk_window_spectrum(5.0, BoundaryCondition::kDirichlet, 12);
  const auto b = brackets(lp, n, d, 12);
  REQUIRE(b.size() >= 3);
  const double j01 = oracle::bessel_zero_in(0, false, 2.0, 3.0);
  const double jp11 = oracle::bessel_zero_in(1, true, 1.5, 2.5);
  CHECK(b[0].index == 1);
  CHECK(b[0].lower == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b[0].upper == doctest::Approx(0.25 + j01 * j01 / 25.0).epsilon(1e-12));
  CHECK(b[1].lower == doctest::Approx(0.25 + jp11 * jp11 / 25.0).epsilon(1e-12));
  for (const auto& x : b) {
    CHECK(x.lower <= x.upper);
    CHECK(x.lower < 1.0);
  }
}

TEST_CASE("asymmetric layers shift every bracket up") {
  const auto n = disk_window_spectrum(5.0, BoundaryCondition::kNeumann, 8);
  const auto d = disk_window_spectrum(5.0, BoundaryCondition::kDirichlet, 8);
  const auto sym = brackets(LayerPair(kPi), n, d, 8);
  const auto asym = brackets(LayerPair(kPi / 2), n, d, 8);
  REQUIRE(asym.size() >= 1);
  CHECK(asym.size() <= sym.size());
  for (std::size_t i = 0; i < asym.size(); ++i) {
    CHECK(asym[i].lower - sym[i].lower == doctest::Approx(4.0 / 9.0 - 0.25).epsilon(1e-12));
  }
}

TEST_CASE("inconsistent spectra are rejected") {
  const auto n = manual(BoundaryCondition::kNeumann, {0.0, 0.5});
  const auto d = manual(BoundaryCondition::kDirichlet, {0.3, 0.4});
  CHECK_THROWS_AS(brackets(LayerPair(kPi), n, d, 2), InvalidInput);
  CHECK_THROWS_AS(brackets(LayerPair(kPi), d, n, 1), InvalidInput);
  CHECK_THROWS_AS(brackets(LayerPair(kPi), n, d, 3), InsufficientData);
}

TEST_CASE("error bars widen the brackets") {
  auto n = manual(BoundaryCondition::kNeumann, {0.05, 0.2});
  auto d = manual(BoundaryCondition::kDirichlet, {0.1, 0.3});
  n.estimated_error = {0.01, 0.01};
  d.estimated_error = {0.02, 0.02};
  const auto b = brackets(LayerPair(kPi), n, d, 2);
  CHECK(b[0].lower == doctest::Approx(0.25 + 0.04));
  CHECK(b[0].upper == doctest::Approx(0.25 + 0.12));
}

TEST_CASE("count bounds switch on at R = 2 j01 / sqrt(3)") {
  const LayerPair lp(kPi);
  const double j01 = oracle::bessel_zero_in(0, false, 2.0, 3.0);
  const double rc = 2.0 * j01 / std::sqrt(3.0);
  REQUIRE(rc > 2.7);
  REQUIRE(rc < 2.8);
  auto bounds = [&](double R) {
    return count_bounds(lp, disk_window_spectrum(R, BoundaryCondition::kNeumann, 60),
                        disk_window_spectrum(R, BoundaryCondition::kDirichlet, 60));
  };
  const CountBounds below = bounds(2.7);
  const CountBounds above = bounds(2.8);
  CHECK(below.min_count == 0);
  CHECK(above.min_count == 1);
  CHECK(below.threshold_used == doctest::Approx(0.75));
  for (double R : {0.5, 1.0, 2.7, 2.8, 5.0, 8.0}) {
    const CountBounds cb = bounds(R);
    CHECK(cb.min_count <= cb.max_count);
    CHECK(cb.max_count >= 1);  // the Neumann constant mode is always below T
  }
}

TEST_CASE("count bounds need spectra past the threshold") {
  const auto n = manual(BoundaryCondition::kNeumann, {0.0, 0.1});
  const auto d = manual(BoundaryCondition::kDirichlet, {0.2, 0.3});
  CHECK_THROWS_AS(count_bounds(LayerPair(kPi), n, d), InsufficientData);
}

TEST_CASE("count bounds are nondecreasing in d") {
  const auto n = disk_window_spectrum(4.0, BoundaryCondition::kNeumann, 30);
  const auto d = disk_window_spectrum(4.0, BoundaryCondition::kDirichlet, 30);
  int last_min = 0;
  int last_max = 0;
  for (double dd = 0.2; dd <= kPi; dd += 0.2) {
    const CountBounds cb = count_bounds(LayerPair(dd), n, d);
    CHECK(cb.min_count >= last_min);
    CHECK(cb.max_count >= last_max);
    last_min = cb.min_count;
    last_max = cb.max_count;
  }
}

TEST_CASE("values within their error bar of T are undecided") {
  auto n = manual(BoundaryCondition::kNeumann, {0.0, 0.74, 2.0});
  auto d = manual(BoundaryCondition::kDirichlet, {0.2, 0.76, 3.0});
  n.estimated_error = {0.0, 0.02, 0.0};
  d.estimated_error = {0.0, 0.02, 0.0};
  const CountBounds cb = count_bounds(LayerPair(kPi), n, d);
  CHECK(cb.min_count == 1);
  CHECK(cb.max_count == 2);
  CHECK(cb.undecided == 2);
}
