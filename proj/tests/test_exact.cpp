#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collatz/exact.hpp"
#include "collatz/trajectory.hpp"
#include "oracle.hpp"

using collatz::BigInt;
using collatz::Rational;
using namespace collatz::exact;

TEST_CASE("floor and ceiling on reduced rationals") {
  CHECK(floor_rational(Rational(112, 9)) == 12);
  CHECK(ceil_rational(Rational(112, 9)) == 13);
  CHECK(floor_rational(Rational(16)) == 16);
  CHECK(ceil_rational(Rational(16)) == 16);
  CHECK(floor_rational(Rational(0)) == 0);
  CHECK(ceil_rational(Rational(1, 1000000)) == 1);
  CHECK(floor_rational(Rational(-7, 2)) == -4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
}

TEST_CASE("z_value examples") {
  CHECK(z_value(6, 2, 6) == Rational(29, 32));
  CHECK(z_value(16, 0, 4) == 1);
  // brute-force trajectories give (X,Y) = (2,7) for both 12 and 13
  CHECK(z_value(12, 2, 7) == Rational(7, 8));
  CHECK(z_value(13, 2, 7) == Rational(121, 128));
}

TEST_CASE("f_xy examples") {
  CHECK(f_xy(6, 2, 6) == 1);
  CHECK(f_xy(16, 0, 4) == 1);
  CHECK(z_value(19, 6, 14) == Rational(28430, 32768));
  CHECK(f_xy(19, 6, 14) == 1);
}

TEST_CASE("epsilon examples") {
  CHECK(epsilon(6, 2, 6) == Rational(3, 32));
  for (std::uint64_t i = 1; i <= 20; ++i)
    CHECK(epsilon(BigInt(1) << i, 0, i) == 0);
  CHECK(epsilon(12, 2, 7) == Rational(1, 8));
  CHECK(epsilon(13, 2, 7) == Rational(7, 128));
}

TEST_CASE("epsilon_n examples") {
  CHECK(epsilon_n(12, 2, 7) == Rational(1, 72));
  CHECK(epsilon_n(16, 0, 4) == 0);
  CHECK(epsilon_n(6, 2, 6) == Rational(1, 96));
}

TEST_CASE("canonical decomposition examples") {
  CHECK(canonical_decomposition(12, 2, 7) == Rational(112, 9));
  CHECK(canonical_decomposition(16, 0, 4) == 16);
  CHECK(canonical_decomposition(6, 2, 6) == Rational(58, 9));
}

TEST_CASE("recover_n examples") {
  CHECK(recover_n(Rational(112, 9)) == 12);
  CHECK(recover_n(Rational(16)) == 16);
  CHECK(recover_n(Rational(58, 9)) == 6);
}

TEST_CASE("fractional_part examples") {
  CHECK(fractional_part(Rational(112, 9)) == Rational(4, 9));
  CHECK(fractional_part(Rational(16)) == 0);
  CHECK(fractional_part(Rational(58, 9)) == Rational(4, 9));
  CHECK(half_one_minus_pow3_neg(2) == Rational(4, 9));
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(z_value(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(recover_n(Rational(-1)), std::invalid_argument);
  CHECK_THROWS_AS(fractional_part(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("identities on true decompositions up to 2000") {
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    oracle::Outcome o = oracle::run(n);
    const BigInt bn(n);
    ExactWitness w = make_witness(bn, o.x, o.y);

    REQUIRE(w.z + w.epsilon == 1);
    REQUIRE(w.epsilon_n * Rational(pow3(o.x)) == w.epsilon);
    // Eq-8 rearrangement: n' - (1 - 3^-X)/2 = n
    REQUIRE(w.n_prime - half_one_minus_pow3_neg(o.x) == bn);
    REQUIRE(w.frac_n_prime >= 0);
    REQUIRE(w.frac_n_prime < 1);
    REQUIRE(w.frac_n_prime == half_one_minus_pow3_neg(o.x));
    REQUIRE(w.z > 0);
    REQUIRE(w.z <= 1);
    REQUIRE(ceil_rational(w.z) == 1);
    REQUIRE(recover_n(w.n_prime) == bn);
    REQUIRE(w.epsilon_n >= 0);
    REQUIRE(w.epsilon_n < Rational(1, pow3(o.x + 1)));
  }
}

TEST_CASE("mismatched decompositions are still evaluable") {
  // The formulas accept any triple; only true couples promise f = 1.
  CHECK(f_xy(6, 3, 2) == 44);  // ceil((3^3 * 13 - 1) / 8) = ceil(175/4)
  CHECK(z_value(6, 3, 2) == Rational(175, 4));
}

TEST_CASE("rational rendering is p/q, never decimal") {
  CHECK(collatz::to_string(Rational(29, 32)) == "29/32");
  CHECK(collatz::to_string(Rational(16)) == "16");
  CHECK(collatz::to_string(Rational(4, 9)) == "4/9");
  CHECK(collatz::to_string(Rational(116, 128)) == "29/32");
  CHECK(collatz::to_string(BigInt(837799)) == "837799");
}
