#include "zbw/clifford.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zbw/errors.hpp"

namespace zbw {
namespace {

constexpr std::array<std::uint8_t, kBladeCount> make_mask_to_index() {
  std::array<std::uint8_t, kBladeCount> out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[kBladeMask[i]] = static_cast<std::uint8_t>(i);
  return out;
}

constexpr auto kMaskToIndex = make_mask_to_index();

// Sign from moving every factor of b left past the factors of a that come
// after it, then contracting repeated gammas with the metric.
constexpr int mask_product_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned t = a >> 1; t != 0; t >>= 1) swaps += std::popcount(t & b);
  int sign = (swaps % 2 == 0) ? 1 : -1;
  const unsigned common = a & b;
  for (int mu = 1; mu < 4; ++mu) {
    if (common & (1u << mu)) sign = -sign;
  }
  return sign;
}

using Table = std::array<std::array<ProductEntry, kBladeCount>, kBladeCount>;

constexpr Table make_table() {
  Table t{};
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const unsigned a = kBladeMask[i];
      const unsigned b = kBladeMask[j];
      t[i][j] = ProductEntry{kMaskToIndex[a ^ b],
                             static_cast<std::int8_t>(mask_product_sign(a, b))};
    }
  }
#ifdef ZBW_FLIP_PRODUCT_SIGN
  // Deliberate fault for the negative-control build: g1 g2 gets the wrong sign.
  t[2][3].sign = static_cast<std::int8_t>(-t[2][3].sign);
#endif
  return t;
}

constexpr Table kTable = make_table();

template <typename Keep>
Multivector filtered_product(const Multivector& a, const Multivector& b, Keep keep) {
  Multivector r;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      const ProductEntry e = kTable[i][j];
      if (!keep(kBladeGrade[i], kBladeGrade[j], kBladeGrade[e.index])) continue;
      r[e.index] += e.sign * ai * bj;
    }
  }
  return r;
}

}  // namespace

ProductEntry blade_product(std::size_t i, std::size_t j) { return kTable[i][j]; }

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  Multivector r;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const auto& row = kTable[i];
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      r[row[j].index] += row[j].sign * ai * b[j];
    }
  }
  return r;
}

Multivector grade_projection(const Multivector& a, int k) {
  Multivector r;
  if (k < 0 || k > 4) return r;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    if (kBladeGrade[i] == k) r[i] = a[i];
  }
  return r;
}

Multivector even_part(const Multivector& a) {
  Multivector r;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    if (kBladeGrade[i] % 2 == 0) r[i] = a[i];
  }
  return r;
}

Multivector odd_part(const Multivector& a) { return a - even_part(a); }

double scalar_part(const Multivector& a) { return a[0]; }

Multivector reversion(const Multivector& a) {
  Multivector r = a;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const int k = kBladeGrade[i];
    if ((k * (k - 1) / 2) % 2 != 0) r[i] = -r[i];
  }
  return r;
}

Multivector inner(const Multivector& a, const Multivector& b) {
  return filtered_product(a, b, [](int r, int s, int g) { return g == std::abs(r - s); });
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  return filtered_product(a, b, [](int r, int s, int g) { return g == r + s; });
}

double dot(const Multivector& a, const Multivector& b) {
  double s = 0.0;
  for (int mu = 0; mu < 4; ++mu) s += kMetric[mu] * a[1 + mu] * b[1 + mu];
  return s;
}

double norm(const Multivector& a) {
  double s = 0.0;
  for (double x : a.coefficients()) s += x * x;
  return std::sqrt(s);
}

double max_abs(const Multivector& a) {
  double m = 0.0;
  for (double x : a.coefficients()) m = std::max(m, std::abs(x));
  return m;
}

bool is_finite(const Multivector& a) {
  for (double x : a.coefficients()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double grade_leakage(const Multivector& a, int k) {
  const double total = norm(a);
  if (total == 0.0) return 0.0;
  return norm(a - grade_projection(a, k)) / total;
}

Multivector exp_series(const Multivector& B, ExpOptions opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("exp_bivector: tol must be positive");
  Multivector sum = Multivector::scalar(1.0);
  Multivector term = sum;
  for (int n = 1; n <= opt.max_terms; ++n) {
    term = term * B / static_cast<double>(n);
    sum += term;
    if (norm(term) < opt.tol) return sum;
  }
  throw DivergenceError("exp_bivector: series did not converge in " +
                        std::to_string(opt.max_terms) + " terms");
}

Multivector exp_bivector(const Multivector& B, ExpOptions opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("exp_bivector: tol must be positive");
  if (grade_leakage(B, 2) > 1e-12) throw GradeError("exp_bivector: argument is not a bivector");

  const Multivector B2 = B * B;
  const double s = B2[0];
  const double off = norm(B2 - Multivector::scalar(s));
  if (off > 1e-14 * std::max(1.0, std::abs(s))) return exp_series(B, opt);

  Multivector r;
  if (s < 0.0) {
    const double theta = std::sqrt(-s);
    r = Multivector::scalar(std::cos(theta)) + B * (std::sin(theta) / theta);
  } else if (s > 0.0) {
    const double w = std::sqrt(s);
    r = Multivector::scalar(std::cosh(w)) + B * (std::sinh(w) / w);
  } else {
    // Null bivector: series stops after the linear term.
    r = Multivector::scalar(1.0) + B;
  }
  return r;
}

}  // namespace zbw
