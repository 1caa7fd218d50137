#include <catch2/catch_amalgamated.hpp>

#include "fanih/scalar.hpp"

using namespace fanih;

TEST_CASE("rational arithmetic stays normalized") {
  Rational h(BigInt(2), BigInt(4));
  CHECK(h.num == 1);
  CHECK(h.den == 2);
  Rational m(BigInt(1), BigInt(-2));
  CHECK(m.num == -1);
  CHECK(m.den == 2);
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) - Rational(1, 2)).is_zero());
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("scalar parsing round-trips exactly") {
  for (const char* text : {"3", "-7/2", "0", "1+1*sqrt(5)", "-1/2-3/4*sqrt(2)",
                           "0+1*sqrt(3)", "2/3+0*sqrt(5)"}) {
    FieldScalar s = parse_scalar(text);
    FieldScalar again = parse_scalar(s.to_string());
    CHECK(s == again);
  }
  // canonical form drops a zero radical part entirely
  CHECK(parse_scalar("2/3+0*sqrt(5)").to_string() == "2/3");
  CHECK(parse_scalar("1+1*sqrt(5)").to_string() == "1+1*sqrt(5)");
  CHECK(parse_scalar("1-1*sqrt(5)").to_string() == "1-1*sqrt(5)");
}

TEST_CASE("scalar parsing rejects malformed input") {
  CHECK_THROWS(parse_scalar("abc"));
  CHECK_THROWS(parse_scalar("1/0"));
  CHECK_THROWS(parse_scalar("1+2*sqrt(4)"));   // not squarefree
  CHECK_THROWS(parse_scalar("1+2*sqrt(-2)"));  // not a digit string
  CHECK_THROWS(parse_scalar("1+2*sqrt(2"));
  CHECK_THROWS(parse_scalar("1+2sqrt(2)"));
  CHECK_THROWS(parse_scalar(""));
}

TEST_CASE("exact sign in quadratic fields") {
  auto q = [](long long a, long long b, long long d) {
    return FieldScalar::quadratic(Rational(a), Rational(b), d);
  };
  CHECK(q(-1, 1, 2).sign() == 1);   // sqrt(2) > 1
  CHECK(q(3, -2, 2).sign() == 1);   // 3 > 2 sqrt(2)
  CHECK(q(2, -3, 2).sign() == -1);  // 2 < 3 sqrt(2)
  CHECK(q(-3, 2, 2).sign() == -1);
  CHECK(q(0, -1, 7).sign() == -1);
  CHECK((q(1, 1, 2) * q(1, -1, 2)) == FieldScalar(-1));
  CHECK(q(0, 1, 2) < FieldScalar(Rational(3, 2)));
  CHECK(FieldScalar(Rational(7, 5)) < q(0, 1, 2));
}

TEST_CASE("quadratic inverse and mixed radicands") {
  FieldScalar x = FieldScalar::quadratic(Rational(3), Rational(2), 5);
  CHECK((x * x.inverse()) == FieldScalar(1));
  FieldScalar y = FieldScalar::quadratic(Rational(0), Rational(1), 3);
  CHECK_THROWS(x + y);
  CHECK_THROWS(x * y);
  // rational values mix with any single radicand
  CHECK((FieldScalar(2) * x) == FieldScalar::quadratic(Rational(6), Rational(4), 5));
  CHECK_THROWS(FieldScalar(0).inverse());
}
