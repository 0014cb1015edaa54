#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace zbw {

// Blades of Cl(1,3) in canonical order. The same order is the wire format
// for a serialized multivector (16 numbers).
enum class Blade : std::uint8_t {
  scalar,
  g0, g1, g2, g3,
  g01, g02, g03, g12, g13, g23,
  g012, g013, g023, g123,
  g0123
};

inline constexpr std::size_t kBladeCount = 16;

// Bit mu of the mask is set when gamma_mu is a factor of the blade.
inline constexpr std::array<std::uint8_t, kBladeCount> kBladeMask = {
    0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001,
    0b0110, 0b1010, 0b1100, 0b0111, 0b1011, 0b1101, 0b1110, 0b1111};

inline constexpr std::array<int, kBladeCount> kBladeGrade = {
    0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4};

// Signature (+,-,-,-): eta_{mu mu}.
inline constexpr std::array<double, 4> kMetric = {1.0, -1.0, -1.0, -1.0};

constexpr std::size_t index_of(Blade b) { return static_cast<std::size_t>(b); }

class Multivector {
 public:
  using Coefficients = std::array<double, kBladeCount>;

  constexpr Multivector() = default;
  constexpr explicit Multivector(const Coefficients& c) : c_(c) {}

  static constexpr Multivector scalar(double s) {
    Multivector m;
    m.c_[0] = s;
    return m;
  }
  static constexpr Multivector blade(Blade b, double value = 1.0) {
    Multivector m;
    m.c_[index_of(b)] = value;
    return m;
  }
  // v^mu gamma_mu (upper-index components).
  static constexpr Multivector vector(double v0, double v1, double v2, double v3) {
    Multivector m;
    m.c_[1] = v0;
    m.c_[2] = v1;
    m.c_[3] = v2;
    m.c_[4] = v3;
    return m;
  }
  static constexpr Multivector vector(const std::array<double, 4>& v) {
    return vector(v[0], v[1], v[2], v[3]);
  }
  // Coefficients on g01, g02, g03, g12, g13, g23.
  static constexpr Multivector bivector(const std::array<double, 6>& b) {
    Multivector m;
    for (std::size_t i = 0; i < 6; ++i) m.c_[5 + i] = b[i];
    return m;
  }

  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double& operator[](std::size_t i) { return c_[i]; }
  constexpr double operator[](Blade b) const { return c_[index_of(b)]; }
  constexpr double& operator[](Blade b) { return c_[index_of(b)]; }

  constexpr const Coefficients& coefficients() const { return c_; }

  constexpr std::array<double, 4> vector_part() const {
    return {c_[1], c_[2], c_[3], c_[4]};
  }
  constexpr std::array<double, 6> bivector_part() const {
    return {c_[5], c_[6], c_[7], c_[8], c_[9], c_[10]};
  }

  constexpr Multivector& operator+=(const Multivector& o) {
    for (std::size_t i = 0; i < kBladeCount; ++i) c_[i] += o.c_[i];
    return *this;
  }
  constexpr Multivector& operator-=(const Multivector& o) {
    for (std::size_t i = 0; i < kBladeCount; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  constexpr Multivector& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  constexpr Multivector& operator/=(double s) {
    for (auto& x : c_) x /= s;
    return *this;
  }

  friend constexpr Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend constexpr Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend constexpr Multivector operator-(Multivector a) { return a *= -1.0; }
  friend constexpr Multivector operator*(Multivector a, double s) { return a *= s; }
  friend constexpr Multivector operator*(double s, Multivector a) { return a *= s; }
  friend constexpr Multivector operator/(Multivector a, double s) { return a /= s; }
  friend constexpr bool operator==(const Multivector&, const Multivector&) = default;

 private:
  Coefficients c_{};
};

// Basis vector gamma_mu, mu in 0..3.
constexpr Multivector gamma(int mu) {
  return Multivector::blade(static_cast<Blade>(1 + mu));
}

// gamma_5 = g0 g1 g2 g3.
inline constexpr Multivector kPseudoscalar = Multivector::blade(Blade::g0123);

// Geometric product. Sign table is built once from the anticommutation rules.
Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

// Sign of blade_i * blade_j and the canonical index of the result blade.
struct ProductEntry {
  std::uint8_t index;
  std::int8_t sign;
};
ProductEntry blade_product(std::size_t i, std::size_t j);

// Grade k part; zero for k outside 0..4.
Multivector grade_projection(const Multivector& a, int k);
Multivector even_part(const Multivector& a);
Multivector odd_part(const Multivector& a);
double scalar_part(const Multivector& a);

Multivector reversion(const Multivector& a);

// Grade-wise <A_r B_s>_{|r-s|} and <A_r B_s>_{r+s}, extended by bilinearity.
Multivector inner(const Multivector& a, const Multivector& b);
Multivector wedge(const Multivector& a, const Multivector& b);

// Minkowski dot of the vector parts, a^mu b_mu.
double dot(const Multivector& a, const Multivector& b);

// Euclidean norm of the 16 coefficients; this is the residual norm too.
double norm(const Multivector& a);
double max_abs(const Multivector& a);
bool is_finite(const Multivector& a);

// Largest |coefficient| outside grade k, relative to the whole norm.
double grade_leakage(const Multivector& a, int k);

struct ExpOptions {
  double tol = 1e-14;
  int max_terms = 64;
};

// exp(B) for a bivector. Uses cos/cosh closed forms when B*B is a scalar and
// the power series otherwise; throws GradeError for non-bivector input and
// DivergenceError when the series has not converged after max_terms.
Multivector exp_bivector(const Multivector& B, ExpOptions opt = {});

// Plain power series, no closed-form shortcut. Exposed for the rotor tests.
Multivector exp_series(const Multivector& B, ExpOptions opt = {});

// Inverse through the Dirac matrix representation. Throws SingularityError if
// the matrix is singular or its condition number exceeds max_condition.
Multivector inverse(const Multivector& a, double max_condition = 1e12);

}  // namespace zbw
