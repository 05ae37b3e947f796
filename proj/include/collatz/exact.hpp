#pragma once

#include <cstdint>

#include "collatz/types.hpp"

namespace collatz::exact {

BigInt pow2(std::uint64_t e);
BigInt pow3(std::uint64_t e);

// Floor/ceiling on exact rationals via integer division with direction
// adjustment. No floating point anywhere in this module.
BigInt floor_rational(const Rational& r);
BigInt ceil_rational(const Rational& r);

// Z_n = (3^X(2n+1) - 1) / 2^(Y+1), reduced.
Rational z_value(const BigInt& n, std::uint64_t x, std::uint64_t y);

// f_{X,Y}(n) = ceil(Z_n). Equals 1 whenever (X, Y) is the true parity
// decomposition of a convergent n.
BigInt f_xy(const BigInt& n, std::uint64_t x, std::uint64_t y);

// eps = 1 - Z_n.
Rational epsilon(const BigInt& n, std::uint64_t x, std::uint64_t y);

// eps_n = 3^-X * eps.
Rational epsilon_n(const BigInt& n, std::uint64_t x, std::uint64_t y);

// n' = 2^Y * (3^-X - eps_n). Algebraically n' = n + (1 - 3^-X)/2.
Rational canonical_decomposition(const BigInt& n, std::uint64_t x,
                                 std::uint64_t y);

// n = floor(n').
BigInt recover_n(const Rational& n_prime);

// {r} = r - floor(r), in [0, 1).
Rational fractional_part(const Rational& r);

// (1 - 3^-X)/2, the predicted fractional part of n'.
Rational half_one_minus_pow3_neg(std::uint64_t x);

// All the derived quantities for one (n, X, Y) triple.
struct ExactWitness {
  BigInt n;
  std::uint64_t x_count = 0;
  std::uint64_t y_count = 0;
  Rational z;
  Rational epsilon;
  Rational epsilon_n;
  Rational n_prime;
  Rational frac_n_prime;
};

ExactWitness make_witness(const BigInt& n, std::uint64_t x, std::uint64_t y);

}  // namespace collatz::exact
