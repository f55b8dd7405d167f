#include "mwsharp/dyadic.hpp"
#include "mwsharp/rational.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mwsharp;

namespace {

Rat random_rat(std::mt19937_64& rng) {
  long long n = static_cast<long long>(rng() % 2001) - 1000;
  long long d = static_cast<long long>(rng() % 999) + 1;
  return Rat(n, d);
}

Dyadic random_dyadic(std::mt19937_64& rng) {
  long long m = static_cast<long long>(rng() % 4001) - 2000;
  unsigned e = static_cast<unsigned>(rng() % 12);
  return Dyadic(m, e);
}

}  // namespace

TEST_CASE("rat comparison is exact") {
  CHECK(Rat(1, 3) == Rat(2, 6));
  CHECK(Rat(22) > Rat(21));
  CHECK(Rat(8, 7) < Rat(4, 3));  // 24 < 28 by cross-multiplication
}

TEST_CASE("rat canonical form") {
  Rat r(-6, -4);
  CHECK(r.num() == 3);
  CHECK(r.den() == 2);
  CHECK(Rat(0, 17) == Rat(0));
  CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rat(5) / Rat(0), std::domain_error);
}

TEST_CASE("rat parsing and printing") {
  CHECK(Rat::parse("22").str() == "22");
  CHECK(Rat::parse("-3/9").str() == "-1/3");
  CHECK(Rat::parse("13/2^1") == Rat(13, 2));
  CHECK_THROWS_AS(Rat::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
}

TEST_CASE("dyadic to rat") {
  CHECK(Dyadic(13, 1).to_rat() == Rat(13, 2));
  CHECK(Dyadic(0, 0).to_rat() == Rat(0));
  CHECK(Dyadic(5, 0).to_rat() == Rat(5));
}

TEST_CASE("dyadic canonical form and round trip") {
  Dyadic d(12, 2);  // 12/4 = 3
  CHECK(d.mantissa() == 3);
  CHECK(d.exponent() == 0);
  CHECK(d.str() == "3/2^0");
  CHECK(Dyadic::parse("3/2^0") == d);
  CHECK(Dyadic::parse("13/2") == Dyadic(13, 1));
  CHECK(Dyadic::parse("7") == Dyadic(7, 0));
  CHECK(!Dyadic::from_rat(Rat(1, 3)).has_value());
  CHECK(*Dyadic::from_rat(Rat(9, 8)) == Dyadic(9, 3));
  CHECK_THROWS_AS(Dyadic::parse("1/3"), std::invalid_argument);
}

TEST_CASE("rat to double: nearest even") {
  CHECK(Rat(1, 3).to_double() == 1.0 / 3.0);
  CHECK(Rat(22).to_double() == 22.0);
  // 2^200 is exactly representable.
  Rat big(BigInt(1) << 200);
  CHECK(big.to_double() == std::ldexp(1.0, 200));
  CHECK(big.to_double() == doctest::Approx(1.6069380442589903e60).epsilon(1e-15));
  // Overflow is flagged as infinity.
  Rat huge(BigInt(1) << 2000);
  CHECK(std::isinf(huge.to_double()));
  CHECK((-huge).to_double() == -std::numeric_limits<double>::infinity());
  // Nearest, not truncation: 1/10 rounds to the standard double.
  CHECK(Rat(1, 10).to_double() == 0.1);
  CHECK(Rat(-1, 3).to_double() == -1.0 / 3.0);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 500; ++i) {
    Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + (-a) == Rat(0));
    if (!a.is_zero()) CHECK(a * a.reciprocal() == Rat(1));
  }
}

TEST_CASE("dyadic addition commutes with rational embedding") {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 500; ++i) {
    Dyadic x = random_dyadic(rng), y = random_dyadic(rng);
    CHECK((x + y).to_rat() == x.to_rat() + y.to_rat());
    CHECK((x * y).to_rat() == x.to_rat() * y.to_rat());
    CHECK((x - y).to_rat() == x.to_rat() - y.to_rat());
  }
}

TEST_CASE("ordering is antisymmetric and transitive") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 500; ++i) {
    Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
    CHECK((a < b) == (b > a));
    if (a <= b && b <= c) CHECK(a <= c);
    CHECK((a <=> b == 0) == (a == b));
  }
}

TEST_CASE("dyadic division by powers of two") {
  Dyadic d(5, 0);
  CHECK(d.div_pow2(3) == Dyadic(5, 3));
  CHECK(d.half() + d.half() == d);
}
