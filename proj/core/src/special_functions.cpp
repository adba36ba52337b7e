// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include "winlayer/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "winlayer/error.hpp"

namespace winlayer::special {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;

// Below this argument (or while (x/2)^2 < m+1) the series terms decay from
// the first one, so it is free of cancellation.
constexpr double kSeriesLimit = 2.0;
// Above this the Hankel expansion of J_0, J_1 is accurate to ~1e-17.
constexpr double kAsymptoticLimit = 25.0;

double series(int m, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < kEps * 1e-2 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
double miller(int m, double x) {
  const double top = std::max<double>(m, x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
  start += start % 2;
  double next = 0.0;
  double cur = 1e-30;
  double result = 0.0;
  double sum = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      sum *= 1e-250;
    }
    if (k - 1 == m) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * cur;
  }
  sum += cur;
  if (m == 0) result = cur;
  return result / sum;
}

// Hankel asymptotic expansion for integer order nu in {0, 1}.
double hankel(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // a_k / x^k with alternating sign pattern split into P (even k) and Q.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (std::abs(term) < 1e-18) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double asymptotic_recurrence(int m, double x) {
  double prev = hankel(0, x);
  if (m == 0) return prev;
  double cur = hankel(1, x);
  for (int k = 1; k < m; ++k) {
    const double next = (2.0 * k / x) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct Bracket {
  double lo;
  double hi;
};

// Safeguarded Newton on a certified sign-change bracket.
template <class F, class DF>
double refine_root(F f, DF df, Bracket b, double guess) {
  double flo = f(b.lo);
  const double fhi = f(b.hi);
  if (!(flo * fhi < 0.0)) {
    throw NumericalFailure("bessel zero: bracket [" + std::to_string(b.lo) + ", " +
                           std::to_string(b.hi) + "] has no sign change");
  }
  double x = (guess > b.lo && guess < b.hi) ? guess : 0.5 * (b.lo + b.hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      b.lo = x;
      flo = fx;
    } else {
      b.hi = x;
    }
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : b.lo - 1.0;
    if (!(next > b.lo && next < b.hi)) next = 0.5 * (b.lo + b.hi);
    if (std::abs(next - x) <= 2.0 * kEps * std::abs(x)) return next;
    if (b.hi - b.lo <= 4.0 * kEps * std::abs(x)) return 0.5 * (b.lo + b.hi);
    x = next;
  }
  throw NumericalFailure("bessel zero: refinement did not converge");
}

double mcmahon_j(int m, int k) {
  const double mu = 4.0 * m * m;
  const double beta = (k + 0.5 * m - 0.25) * kPi;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

double mcmahon_jp(int m, int k) {
  const double mu = 4.0 * m * m;
  const double beta = (k + 0.5 * m - 0.75) * kPi;
  const double e = 8.0 * beta;
  return beta - (mu + 3.0) / e -
         4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * e * e * e);
}

double bessel_j_second(int m, double x) {
  return -bessel_j_prime(m, x) / x - (1.0 - static_cast<double>(m) * m / (x * x)) * bessel_j(m, x);
}

std::vector<double> j_zeros(int m, int count);

std::vector<double> j0_zeros(int count) {
  std::vector<double> out;
  out.reserve(count);
  auto f = [](double x) { return bessel_j(0, x); };
  auto df = [](double x) { return -bessel_j(1, x); };
  for (int k = 1; k <= count; ++k) {
    out.push_back(refine_root(f, df, {(k - 0.5) * kPi, k * kPi}, mcmahon_j(0, k)));
  }
  return out;
}

std::vector<double> j_zeros_uncached(int m, int count) {
  if (m == 0) return j0_zeros(count);
  // Zeros of J_m interlace with those of J_{m-1}.
  const std::vector<double> below = j_zeros(m - 1, count + 1);
  std::vector<double> out;
  out.reserve(count);
  auto f = [m](double x) { return bessel_j(m, x); };
  auto df = [m](double x) { return bessel_j_prime(m, x); };
  for (int k = 1; k <= count; ++k) {
    out.push_back(refine_root(f, df, {below[k - 1], below[k]}, mcmahon_j(m, k)));
  }
  return out;
}

std::mutex cache_mutex;
std::map<std::pair<int, int>, std::vector<double>> zero_cache;

// Returns the cached table when it already covers `count` entries.
std::vector<double> j_zeros(int m, int count) {
  {
    std::lock_guard lock(cache_mutex);
    auto it = zero_cache.find({m, 0});
    if (it != zero_cache.end() && static_cast<int>(it->second.size()) >= count) {
      return {it->second.begin(), it->second.begin() + count};
    }
  }
  std::vector<double> table = j_zeros_uncached(m, count);
  std::lock_guard lock(cache_mutex);
  auto& slot = zero_cache[{m, 0}];
  if (slot.size() < table.size()) slot = table;
  return table;
}

std::vector<double> jp_zeros(int m, int count) {
  if (m == 0) return j_zeros(1, count);
  const std::vector<double> jz = j_zeros(m, count);
  std::vector<double> out;
  out.reserve(count);
  auto f = [m](double x) { return bessel_j_prime(m, x); };
  auto df = [m](double x) { return bessel_j_second(m, x); };
  for (int k = 1; k <= count; ++k) {
    // J_m' keeps its sign on (0, m] for m >= 1 and changes it exactly once
    // between consecutive zeros of J_m.
    const Bracket b = (k == 1) ? Bracket{static_cast<double>(m), jz[0]} : Bracket{jz[k - 2], jz[k - 1]};
    out.push_back(refine_root(f, df, b, mcmahon_jp(m, k)));
  }
  return out;
}

void check_order(int m, int k) {
  if (m < 0) throw InvalidInput("bessel: negative order " + std::to_string(m));
  if (k < 1) throw InvalidInput("bessel zero: index must be >= 1, got " + std::to_string(k));
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0) throw InvalidInput("bessel_j: negative order " + std::to_string(m));
  if (!(x >= 0.0)) throw InvalidInput("bessel_j: argument must be >= 0");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit || 0.25 * x * x < m + 1.0) return series(m, x);
  if (x > kAsymptoticLimit && m <= x) return asymptotic_recurrence(m, x);
  return miller(m, x);
}

double bessel_j_prime(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

double bessel_j_zero(int m, int k) {
  check_order(m, k);
  return j_zeros(m, k).back();
}

double bessel_j_prime_zero(int m, int k) {
  check_order(m, k);
  return jp_zeros(m, k).back();
}

BesselZeroTable bessel_zero_table(int m, ZeroKind kind, int count) {
  check_order(m, count);
  BesselZeroTable table;
  table.order = m;
  table.kind = kind;
  table.zeros = kind == ZeroKind::kJ ? j_zeros(m, count) : jp_zeros(m, count);
  for (double z : table.zeros) {
    const double r = kind == ZeroKind::kJ ? bessel_j(m, z) : bessel_j_prime(m, z);
    table.certified_tolerance = std::max(table.certified_tolerance, std::abs(r));
  }
  if (table.certified_tolerance > 1e-12) {
    throw NumericalFailure("bessel zero table: residual " + std::to_string(table.certified_tolerance) +
                           " exceeds 1e-12");
  }
  return table;
}

}  // namespace winlayer::special
