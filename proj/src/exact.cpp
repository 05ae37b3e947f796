#include "collatz/exact.hpp"

#include <stdexcept>

namespace collatz {

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace collatz

namespace collatz::exact {

BigInt pow2(std::uint64_t e) { return BigInt(1) << e; }

BigInt pow3(std::uint64_t e) {
  BigInt r = 1;
  BigInt base = 3;
  while (e != 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return r;
}

BigInt floor_rational(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);  // den > 0
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

BigInt ceil_rational(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num > 0 && q * den != num) ++q;
  return q;
}

Rational z_value(const BigInt& n, std::uint64_t x, std::uint64_t y) {
  if (n < 1) throw std::invalid_argument("z_value: n must be positive");
  return Rational(pow3(x) * (2 * n + 1) - 1, pow2(y + 1));
}

BigInt f_xy(const BigInt& n, std::uint64_t x, std::uint64_t y) {
  return ceil_rational(z_value(n, x, y));
}

Rational epsilon(const BigInt& n, std::uint64_t x, std::uint64_t y) {
  return 1 - z_value(n, x, y);
}

Rational epsilon_n(const BigInt& n, std::uint64_t x, std::uint64_t y) {
  return epsilon(n, x, y) / Rational(pow3(x));
}

Rational canonical_decomposition(const BigInt& n, std::uint64_t x,
                                 std::uint64_t y) {
  Rational three_neg_x(1, pow3(x));
  return Rational(pow2(y)) * (three_neg_x - epsilon_n(n, x, y));
}

BigInt recover_n(const Rational& n_prime) {
  if (n_prime < 0) throw std::invalid_argument("recover_n: n' must be >= 0");
  return floor_rational(n_prime);
}

Rational fractional_part(const Rational& r) {
  if (r < 0) throw std::invalid_argument("fractional_part: r must be >= 0");
  return r - Rational(floor_rational(r));
}

Rational half_one_minus_pow3_neg(std::uint64_t x) {
  BigInt p = pow3(x);
  return Rational(p - 1, 2 * p);
}

ExactWitness make_witness(const BigInt& n, std::uint64_t x, std::uint64_t y) {
  ExactWitness w;
  w.n = n;
  w.x_count = x;
  w.y_count = y;
  w.z = z_value(n, x, y);
  w.epsilon = 1 - w.z;
  w.epsilon_n = w.epsilon / Rational(pow3(x));
  w.n_prime = Rational(pow2(y)) * (Rational(1, pow3(x)) - w.epsilon_n);
  w.frac_n_prime = fractional_part(w.n_prime);
  return w;
}

}  // namespace collatz::exact
