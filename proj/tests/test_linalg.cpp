#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fanih/linalg.hpp"

using namespace fanih;

namespace {

// Independent rank oracle: plain division-based elimination scanning columns
// right to left and picking the bottom-most nonzero pivot. Shares nothing
// with the fraction-free left-to-right sweep in the library.
int rank_oracle(ExactMatrix m) {
  int rank = 0;
  int top = m.rows - 1;
  for (int col = m.cols - 1; col >= 0 && top >= 0; --col) {
    int piv = -1;
    for (int i = top; i >= 0; --i) {
      if (!m.at(i, col).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(top, j));
    FieldScalar p = m.at(top, col);
    for (int i = 0; i < top; ++i) {
      if (m.at(i, col).is_zero()) continue;
      FieldScalar f = m.at(i, col) / p;
      for (int j = 0; j < m.cols; ++j) m.at(i, j) -= f * m.at(top, j);
    }
    --top;
    ++rank;
  }
  return rank;
}

ExactMatrix random_matrix(std::mt19937_64& rng, bool quadratic) {
  std::uniform_int_distribution<int> dim(1, 6), num(-4, 4), den(1, 3);
  ExactMatrix m(dim(rng), dim(rng));
  for (auto& x : m.a) {
    Rational a(Rational(num(rng)) / Rational(den(rng)));
    if (quadratic) {
      Rational b(Rational(num(rng)) / Rational(den(rng)));
      x = b.is_zero() ? FieldScalar(a) : FieldScalar::quadratic(a, b, 2);
    } else {
      x = FieldScalar(a);
    }
  }
  return m;
}

bool in_kernel(const ExactMatrix& m, const std::vector<FieldScalar>& v) {
  for (const FieldScalar& y : m.apply(v))
    if (!y.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("rank and kernel on a known matrix") {
  ExactMatrix m = ExactMatrix::from_rows({{FieldScalar(1), FieldScalar(2)},
                                          {FieldScalar(2), FieldScalar(4)}});
  RankKernel rk = rank_and_kernel(m);
  CHECK(rk.rank == 1);
  REQUIRE(rk.kernel.size() == 1);
  CHECK(rk.kernel[0][0] == FieldScalar(-2));
  CHECK(rk.kernel[0][1] == FieldScalar(1));
}

TEST_CASE("rank agrees with an independent elimination order") {
  std::mt19937_64 rng(12345);
  for (int round = 0; round < 100; ++round) {
    ExactMatrix m = random_matrix(rng, round % 2 == 1);
    RankKernel rk = rank_and_kernel(m);
    CHECK(rk.rank == rank_oracle(m));
    CHECK(static_cast<int>(rk.kernel.size()) == m.cols - rk.rank);
    for (const auto& v : rk.kernel) CHECK(in_kernel(m, v));
  }
}

TEST_CASE("solve_linear finds solutions and detects inconsistency") {
  ExactMatrix m = ExactMatrix::from_rows({{FieldScalar(1), FieldScalar(1)},
                                          {FieldScalar(1), FieldScalar(-1)}});
  auto x = solve_linear(m, {FieldScalar(3), FieldScalar(1)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == FieldScalar(2));
  CHECK((*x)[1] == FieldScalar(1));

  ExactMatrix sing = ExactMatrix::from_rows({{FieldScalar(1), FieldScalar(2)},
                                             {FieldScalar(2), FieldScalar(4)}});
  CHECK_FALSE(solve_linear(sing, {FieldScalar(1), FieldScalar(3)}).has_value());
  auto y = solve_linear(sing, {FieldScalar(1), FieldScalar(2)});
  REQUIRE(y.has_value());
  CHECK(m.rows == 2);

  std::mt19937_64 rng(777);
  for (int round = 0; round < 50; ++round) {
    ExactMatrix a = random_matrix(rng, round % 2 == 0);
    std::uniform_int_distribution<int> num(-3, 3);
    std::vector<FieldScalar> rhs(a.rows);
    for (auto& v : rhs) v = FieldScalar(num(rng));
    auto sol = solve_linear(a, rhs);
    if (sol) {
      std::vector<FieldScalar> img = a.apply(*sol);
      for (int i = 0; i < a.rows; ++i) CHECK(img[i] == rhs[i]);
    } else {
      // inconsistent: rank of augmented matrix exceeds rank of a
      ExactMatrix aug(a.rows, a.cols + 1);
      for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = rhs[i];
      }
      CHECK(rank_of(aug) == rank_of(a) + 1);
    }
  }
}

TEST_CASE("determinant sign") {
  CHECK(det_sign(ExactMatrix::identity(3)) == 1);
  ExactMatrix swp = ExactMatrix::from_rows({{FieldScalar(0), FieldScalar(1)},
                                            {FieldScalar(1), FieldScalar(0)}});
  CHECK(det_sign(swp) == -1);
  ExactMatrix sing = ExactMatrix::from_rows({{FieldScalar(1), FieldScalar(2)},
                                             {FieldScalar(2), FieldScalar(4)}});
  CHECK(det_sign(sing) == 0);
  ExactMatrix neg = ExactMatrix::from_rows(
      {{FieldScalar(1), FieldScalar(4), FieldScalar(0)},
       {FieldScalar(2), FieldScalar(1), FieldScalar(3)},
       {FieldScalar(0), FieldScalar(1), FieldScalar(5)}});
  // det = 1*(5-3) - 4*(10-0) + 0 = -38
  CHECK(det_sign(neg) == -1);
}

TEST_CASE("phase-one feasibility") {
  // z1 + z2 = 1 with z >= 0: feasible
  ExactMatrix a1 = ExactMatrix::from_rows({{FieldScalar(1), FieldScalar(1)}});
  auto f1 = lp_feasible(a1, {FieldScalar(1)});
  REQUIRE(f1.has_value());
  CHECK(((*f1)[0] + (*f1)[1]) == FieldScalar(1));
  CHECK((*f1)[0].sign() >= 0);
  CHECK((*f1)[1].sign() >= 0);

  // -z1 - z2 = 1 with z >= 0: infeasible
  ExactMatrix a2 = ExactMatrix::from_rows({{FieldScalar(-1), FieldScalar(-1)}});
  CHECK_FALSE(lp_feasible(a2, {FieldScalar(1)}).has_value());

  // origin in the hull of (1,0) and (0,1): infeasible
  ExactMatrix a3 = ExactMatrix::from_rows(
      {{FieldScalar(1), FieldScalar(0)},
       {FieldScalar(0), FieldScalar(1)},
       {FieldScalar(1), FieldScalar(1)}});
  CHECK_FALSE(lp_feasible(a3, {FieldScalar(0), FieldScalar(0), FieldScalar(1)}).has_value());

  // origin in the hull of (1,0) and (-1,0): feasible
  ExactMatrix a4 = ExactMatrix::from_rows(
      {{FieldScalar(1), FieldScalar(-1)},
       {FieldScalar(0), FieldScalar(0)},
       {FieldScalar(1), FieldScalar(1)}});
  auto f4 = lp_feasible(a4, {FieldScalar(0), FieldScalar(0), FieldScalar(1)});
  REQUIRE(f4.has_value());
  CHECK((*f4)[0] == FieldScalar(Rational(1, 2)));

  // irrational data: lambda * sqrt(2) = 2 has the solution sqrt(2)
  ExactMatrix a5(1, 1);
  a5.at(0, 0) = FieldScalar::quadratic(Rational(0), Rational(1), 2);
  auto f5 = lp_feasible(a5, {FieldScalar(2)});
  REQUIRE(f5.has_value());
  CHECK((*f5)[0] == FieldScalar::quadratic(Rational(0), Rational(1), 2));
}
