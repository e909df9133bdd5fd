#include "refinery/eps_poly.h"

#include <algorithm>
#include <stdexcept>

#include "refinery/linalg.h"

namespace refinery {

namespace {
const Rat kZero(0);
}

EpsPoly::EpsPoly(const Rat& constant) {
  if (!constant.is_zero()) c_.push_back(constant);
}

EpsPoly EpsPoly::from_coeffs(std::vector<Rat> coeffs) {
  EpsPoly p;
  p.c_ = std::move(coeffs);
  p.trim();
  return p;
}

EpsPoly EpsPoly::eps(std::size_t power) {
  EpsPoly p;
  p.c_.assign(power + 1, Rat(0));
  p.c_[power] = Rat(1);
  return p;
}

const Rat& EpsPoly::coeff(std::size_t i) const {
  return i < c_.size() ? c_[i] : kZero;
}

Rat EpsPoly::eval(const Rat& x) const {
  Rat acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

void EpsPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

EpsPoly EpsPoly::operator-() const {
  EpsPoly r = *this;
  for (Rat& c : r.c_) c = -c;
  return r;
}

EpsPoly& EpsPoly::operator+=(const EpsPoly& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

EpsPoly& EpsPoly::operator-=(const EpsPoly& o) {
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

EpsPoly operator*(const EpsPoly& a, const EpsPoly& b) {
  if (a.is_zero() || b.is_zero()) return EpsPoly();
  EpsPoly r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  r.trim();
  return r;
}

EpsPoly operator*(const Rat& s, const EpsPoly& p) {
  if (s.is_zero()) return EpsPoly();
  EpsPoly r = p;
  for (Rat& c : r.c_) c *= s;
  return r;
}

std::size_t EpsPoly::max_coeff_bits() const {
  std::size_t b = 0;
  for (const Rat& c : c_) b = std::max(b, c.bit_size());
  return b;
}

std::string EpsPoly::str() const {
  if (c_.empty()) return "0";
  std::string s = c_[0].str();
  for (std::size_t i = 1; i < c_.size(); ++i) {
    s += " + " + c_[i].str() + "*e";
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

int lex_sign(const EpsPoly& p) {
  for (const Rat& c : p.coeffs())
    if (!c.is_zero()) return c.sign();
  return 0;
}

Ordering cmp_lex(const EpsPoly& p, const EpsPoly& q) {
  std::size_t n = std::max(p.coeffs().size(), q.coeffs().size());
  for (std::size_t i = 0; i < n; ++i) {
    const Rat& a = p.coeff(i);
    const Rat& b = q.coeff(i);
    if (a < b) return Ordering::Less;
    if (b < a) return Ordering::Greater;
  }
  return Ordering::Equal;
}

Rat lex_sound_eps(const EpsPoly& p, const EpsPoly& q) {
  // d = p - q. If the first nonzero coefficient sits at index i0 with
  // |d_{i0}| >= 2^-B (B from denominator bit sizes) and every later
  // coefficient has |d_k| <= 2^A, then for eps <= 1/2 the tail is at most
  // 2^{A+1} eps, so any eps < 2^{-(A+B+2)} keeps the head dominant.
  EpsPoly d = p - q;
  if (d.is_zero()) return Rat(1, 2);
  long a_bits = 1, b_bits = 1;
  for (const Rat& c : d.coeffs()) {
    a_bits = std::max<long>(a_bits, mpz_sizeinbase(c.num().get_mpz_t(), 2));
    b_bits = std::max<long>(b_bits, mpz_sizeinbase(c.den().get_mpz_t(), 2));
  }
  return Rat::pow2(-(a_bits + 2 * b_bits + 2));
}

mpz_class psi_map(const EpsPoly& p, unsigned L) {
  if (p.degree() > static_cast<int>(L))
    throw BoundExceeded("psi_map: degree exceeds L");
  mpz_class limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), 2, L);
  mpz_class four_L, sixteen_L;
  mpz_ui_pow_ui(four_L.get_mpz_t(), 4, L);
  mpz_ui_pow_ui(sixteen_L.get_mpz_t(), 16, L);
  mpz_class result = 0;
  for (unsigned i = 0; i <= L; ++i) {
    const Rat& a = p.coeff(i);
    if (::abs(a.num()) >= limit || a.den() >= limit)
      throw BoundExceeded("psi_map: coefficient exceeds L bits");
    // round(4^L (a + 2^L)), value is nonnegative; round half up.
    mpq_class x = mpq_class(four_L) * (a.mpq() + mpq_class(limit));
    mpz_class digit = (x.get_num() * 2 + x.get_den()) / (x.get_den() * 2);
    mpz_class place;
    mpz_pow_ui(place.get_mpz_t(), sixteen_L.get_mpz_t(), L - i);
    result += digit * place;
  }
  return result;
}

EpsPoly interpolate_poly(std::span<const std::pair<Rat, Rat>> samples,
                         int degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("interpolate_poly: bound");
  const std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
  if (samples.size() < need)
    throw std::invalid_argument("interpolate_poly: too few samples");
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      if (samples[i].first == samples[j].first)
        throw DuplicatePoint("interpolate_poly: duplicate node");

  // g(eps) = sum_j y_j prod_{i != j} (eps - x_i) / (x_j - x_i)
  EpsPoly g;
  for (std::size_t j = 0; j < need; ++j) {
    EpsPoly basis(Rat(1));
    Rat denom(1);
    for (std::size_t i = 0; i < need; ++i) {
      if (i == j) continue;
      basis = basis * EpsPoly::from_coeffs({-samples[i].first, Rat(1)});
      denom *= samples[j].first - samples[i].first;
    }
    g += (samples[j].second / denom) * basis;
  }
  for (std::size_t j = need; j < samples.size(); ++j)
    if (g.eval(samples[j].first) != samples[j].second)
      throw DegenerateSystem("interpolate_poly: inconsistent extra sample");
  return g;
}

Rat EpsRational::eval(const Rat& x) const {
  Rat d = den.eval(x);
  if (d.is_zero()) throw std::domain_error("EpsRational: pole at eval point");
  return num.eval(x) / d;
}

bool EpsRational::same_function(const EpsRational& o) const {
  return num * o.den == o.num * den;
}

std::string EpsRational::str() const {
  return "(" + num.str() + ") / (" + den.str() + ")";
}

EpsRational interpolate_rational(std::span<const std::pair<Rat, Rat>> samples,
                                 int degree_bound) {
  if (degree_bound < 0)
    throw std::invalid_argument("interpolate_rational: bound");
  const std::size_t n = samples.size();
  if (n < static_cast<std::size_t>(degree_bound) + 1)
    throw std::invalid_argument("interpolate_rational: too few samples");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (samples[i].first == samples[j].first)
        throw DuplicatePoint("interpolate_rational: duplicate node");

  // Minimal total degree first, so a high-degree polynomial fit cannot
  // shadow the true lower-degree rational function; within one total degree
  // prefer smaller denominators.
  for (int total = 0; total <= degree_bound; ++total) {
    for (int dq = 0; dq <= total; ++dq) {
      const int dp = total - dq;
      // Unknowns: p_0..p_dp, q_0..q_dq.  Row j: p(x_j) - y_j q(x_j) = 0.
      Mat a(n, Vec(static_cast<std::size_t>(dp + dq + 2), Rat(0)));
      for (std::size_t j = 0; j < n; ++j) {
        Rat xp(1);
        for (int k = 0; k <= dp; ++k) {
          a[j][k] = xp;
          xp *= samples[j].first;
        }
        xp = Rat(1);
        for (int k = 0; k <= dq; ++k) {
          a[j][dp + 1 + k] = -samples[j].second * xp;
          xp *= samples[j].first;
        }
      }
      for (const Vec& v : null_space(a)) {
        std::vector<Rat> pc(v.begin(), v.begin() + dp + 1);
        std::vector<Rat> qc(v.begin() + dp + 1, v.end());
        EpsPoly p = EpsPoly::from_coeffs(std::move(pc));
        EpsPoly q = EpsPoly::from_coeffs(std::move(qc));
        if (q.is_zero()) continue;
        bool ok = true;
        for (const auto& [x, y] : samples) {
          Rat qv = q.eval(x);
          if (qv.is_zero() || p.eval(x) != y * qv) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        // Normalize: lowest-order nonzero denominator coefficient becomes 1.
        Rat pivot(0);
        for (const Rat& c : q.coeffs())
          if (!c.is_zero()) {
            pivot = c;
            break;
          }
        Rat inv = Rat(1) / pivot;
        return EpsRational{inv * p, inv * q};
      }
    }
  }
  throw DegenerateSystem("interpolate_rational: no admissible solution");
}

}  // namespace refinery
