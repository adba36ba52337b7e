// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "winlayer/sparse_eigs.hpp"

using namespace winlayer;

namespace {

SparseMatrix diagonal(const std::vector<double>& d) {
  SparseMatrix a(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) a.insert(static_cast<int>(i), static_cast<int>(i)) = d[i];
  a.makeCompressed();
  return a;
}

SparseMatrix rectangle_laplacian(double a, double b, int nx, int ny) {
  const double hx = a / nx;
  const double hy = b / ny;
  const int n = (nx - 1) * (ny - 1);
  auto id = [&](int i, int j) { return (i - 1) * (ny - 1) + (j - 1); };
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 1; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) {
      t.emplace_back(id(i, j), id(i, j), 2.0 / (hx * hx) + 2.0 / (hy * hy));
      if (i > 1) t.emplace_back(id(i, j), id(i - 1, j), -1.0 / (hx * hx));
      if (i + 1 < nx) t.emplace_back(id(i, j), id(i + 1, j), -1.0 / (hx * hx));
      if (j > 1) t.emplace_back(id(i, j), id(i, j - 1), -1.0 / (hy * hy));
      if (j + 1 < ny) t.emplace_back(id(i, j), id(i, j + 1), -1.0 / (hy * hy));
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

TEST_CASE("diagonal operator below 1") {
  const SparseMatrix a = diagonal({0.3, 0.9, 1.5});
  const auto pairs = lowest_eigs(a, 1.0, 10);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(pairs[1].value == doctest::Approx(0.9).epsilon(1e-12));
  for (const auto& p : pairs) CHECK(p.residual <= 1e-9);
  CHECK(inertia(a, 1.0).negative == 2);
}

TEST_CASE("inertia counts eigenvalues below the shift") {
  const SparseMatrix a = diagonal({-2.0, 0.1, 0.2, 3.0, 4.0});
  const Inertia in = inertia(a, 1.0);
  CHECK(in.negative == 3);
  CHECK(in.positive == 2);
  CHECK(in.zero == 0);
}

TEST_CASE("rectangle Laplacian against the discrete sine formula") {
  const double a = 1.0;
  const double b = 2.0;
  const int nx = 20;
  const int ny = 40;
  const SparseMatrix lap = rectangle_laplacian(a, b, nx, ny);
  const auto ref = oracle::discrete_rectangle_eigs(a, b, nx, ny, 9);
  const auto pairs = smallest_eigs(lap, 8);
  REQUIRE(pairs.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(pairs[i].value == doctest::Approx(ref[i]).epsilon(1e-10));
  // The five-point error of the (1,1) mode is -(hx^2 kx^4 + hy^2 ky^4) / 12.
  const double pi = std::numbers::pi;
  const double continuum = pi * pi * (1.0 / (a * a) + 1.0 / (b * b));
  const double hx = a / nx;
  const double hy = b / ny;
  const double predicted = (hx * hx * std::pow(pi / a, 4) + hy * hy * std::pow(pi / b, 4)) / 12.0;
  CHECK(continuum - pairs[0].value == doctest::Approx(predicted).epsilon(0.02));
  CHECK(inertia(lap, 0.5 * (ref[7] + ref[8])).negative == 8);
}

TEST_CASE("degenerate clusters are returned with full multiplicity") {
  // The unit square has lambda_{1,2} = lambda_{2,1}.
  const SparseMatrix lap = rectangle_laplacian(1.0, 1.0, 16, 16);
  const auto ref = oracle::discrete_rectangle_eigs(1.0, 1.0, 16, 16, 6);
  REQUIRE(ref[4] > ref[3] * (1 + 1e-6));
  const double below = 0.5 * (ref[3] + ref[4]);
  const auto pairs = lowest_eigs(lap, below, 6);
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[1].value == doctest::Approx(pairs[2].value).epsilon(1e-10));
  CHECK(pairs[1].vector.dot(pairs[2].vector) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(inertia(lap, below).negative == 4);
}

TEST_CASE("generalized problem with a diagonal mass") {
  // A v = lambda M v with A = diag(2, 6, 12), M = diag(2, 3, 4): lambda = 1, 2, 3.
  const SparseMatrix a = diagonal({2.0, 6.0, 12.0});
  const SparseMatrix m = diagonal({2.0, 3.0, 4.0});
  const auto pairs = lowest_eigs(a, 2.5, 3, {}, &m);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pairs[1].value == doctest::Approx(2.0).epsilon(1e-12));
  // M-normalized vectors
  CHECK(pairs[0].vector.dot(m * pairs[0].vector) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("k_max caps the result at the lowest k_max pairs") {
  const SparseMatrix a = diagonal({0.4, 0.1, 0.3, 0.2});
  const auto pairs = lowest_eigs(a, 1.0, 2);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(pairs[1].value == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("fixed seed gives bitwise identical results") {
  const SparseMatrix lap = rectangle_laplacian(1.0, 1.5, 18, 27);
  const auto a = smallest_eigs(lap, 5);
  const auto b = smallest_eigs(lap, 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].value == b[i].value);
    CHECK((a[i].vector - b[i].vector).norm() == 0.0);
  }
}
