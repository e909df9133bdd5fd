#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "refinery/rational.h"

namespace refinery {

enum class Ordering { Less, Equal, Greater };

// Univariate polynomial in the tremble parameter eps, with exact rational
// coefficients. Canonical form: trailing zero coefficients trimmed; the zero
// polynomial is the empty coefficient sequence (degree() == -1, standing in
// for degree -infinity).
class EpsPoly {
 public:
  EpsPoly() = default;
  EpsPoly(const Rat& constant);
  EpsPoly(long constant) : EpsPoly(Rat(constant)) {}
  static EpsPoly from_coeffs(std::vector<Rat> coeffs);
  // eps^power
  static EpsPoly eps(std::size_t power = 1);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // Coefficient of eps^i (0 beyond the stored degree).
  const Rat& coeff(std::size_t i) const;
  std::span<const Rat> coeffs() const { return c_; }

  Rat eval(const Rat& x) const;
  Rat at_zero() const { return coeff(0); }

  EpsPoly operator-() const;
  EpsPoly& operator+=(const EpsPoly& o);
  EpsPoly& operator-=(const EpsPoly& o);
  friend EpsPoly operator+(EpsPoly a, const EpsPoly& b) { return a += b; }
  friend EpsPoly operator-(EpsPoly a, const EpsPoly& b) { return a -= b; }
  friend EpsPoly operator*(const EpsPoly& a, const EpsPoly& b);
  friend EpsPoly operator*(const Rat& s, const EpsPoly& p);

  friend bool operator==(const EpsPoly& a, const EpsPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const EpsPoly& a, const EpsPoly& b) { return !(a == b); }

  // Largest bit size over all coefficients (0 for the zero polynomial).
  std::size_t max_coeff_bits() const;

  // "c0 + c1*e + c2*e^2" with rationals as num/den; "0" for the zero poly.
  std::string str() const;

 private:
  void trim();
  std::vector<Rat> c_;
};

// Sign of p for all sufficiently small eps > 0: the first nonzero
// coefficient, scanning from eps^0 upward.
int lex_sign(const EpsPoly& p);

// Orders p against q in the eps -> 0+ limit by comparing coefficients
// lexicographically from eps^0 upward.
Ordering cmp_lex(const EpsPoly& p, const EpsPoly& q);
inline bool lex_less(const EpsPoly& p, const EpsPoly& q) {
  return cmp_lex(p, q) == Ordering::Less;
}
inline bool lex_greater(const EpsPoly& p, const EpsPoly& q) {
  return cmp_lex(p, q) == Ordering::Greater;
}

// A rational eps0 > 0 such that sign(p(eps) - q(eps)) matches cmp_lex(p, q)
// for every eps in (0, eps0]. Derived from coefficient bit lengths.
Rat lex_sound_eps(const EpsPoly& p, const EpsPoly& q);

// Order-embedding of polynomials with representation size <= L into the
// natural numbers: psi(sum a_i eps^i) = sum round(4^L (a_i + 2^L)) 16^{L(L-i)}.
// Throws BoundExceeded if the degree exceeds L or some coefficient needs more
// than L bits for its numerator or denominator.
mpz_class psi_map(const EpsPoly& p, unsigned L);

struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicatePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unique polynomial of degree <= degree_bound through the samples, via the
// Lagrange formula on the first degree_bound+1 nodes. Additional samples are
// checked for consistency.
EpsPoly interpolate_poly(std::span<const std::pair<Rat, Rat>> samples,
                         int degree_bound);

// Ratio of polynomials in eps. Invariants: den is nonzero and its
// lowest-order nonzero coefficient is 1.
struct EpsRational {
  EpsPoly num;
  EpsPoly den;

  Rat eval(const Rat& x) const;
  // Equal as functions: cross-multiplied polynomial identity.
  bool same_function(const EpsRational& o) const;
  std::string str() const;
};

// Reconstructs a rational function p/q with deg p + deg q <= degree_bound
// from samples by solving the homogeneous system p(x_j) - q(x_j) y_j = 0,
// trying total degrees in ascending order. A candidate is accepted when its
// denominator is nonzero at every sample and it reproduces all of them;
// supplying 2*degree_bound+1 samples makes the answer unconditionally
// unique as a function.
EpsRational interpolate_rational(std::span<const std::pair<Rat, Rat>> samples,
                                 int degree_bound);

}  // namespace refinery
