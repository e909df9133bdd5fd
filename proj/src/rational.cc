#include "refinery/rational.h"

#include <ostream>
#include <stdexcept>

namespace refinery {

Rat::Rat(long num, long den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_.canonicalize();
}

Rat::Rat(const mpz_class& num, const mpz_class& den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_.canonicalize();
}

Rat::Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

Rat Rat::parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(mpq_class(mpz_class(s)));
    }
    mpz_class num(s.substr(0, slash));
    mpz_class den(s.substr(slash + 1));
    return Rat(num, den);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("Rat: cannot parse '" + s + "'");
  }
}

Rat Rat::pow2(long k) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k >= 0 ? Rat(p) : Rat(mpz_class(1), p);
}

Rat Rat::abs() const { return Rat(mpq_class(::abs(v_))); }

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  v_ /= o.v_;
  return *this;
}

std::size_t Rat::bit_size() const {
  return mpz_sizeinbase(v_.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(v_.get_den().get_mpz_t(), 2);
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace refinery
