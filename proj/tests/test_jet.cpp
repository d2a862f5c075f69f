#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "conelab/jet.hpp"
#include "doctest.h"

using conelab::Jet;
using conelab::JetTable;

namespace {

double deriv(const Jet& f, std::initializer_list<int> alpha) {
  std::vector<int> a(alpha);
  return f.derivative(a);
}

}  // namespace

TEST_SUITE("jet") {

TEST_CASE("table enumerates graded monomials without duplicates") {
  const JetTable& t = JetTable::get(3, 4);
  // binomial(3 + 4, 4) monomials of degree <= 4 in 3 variables
  CHECK(t.size() == 35);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.index_of(t.monomials[i]) == static_cast<int>(i));
    int d = 0;
    for (int e : t.monomials[i]) d += e;
    CHECK(d == t.degree[i]);
    CHECK(d <= 4);
  }
  std::array<int, 3> over = {5, 0, 0};
  CHECK(t.index_of(over) == -1);
}

TEST_CASE("coefficients of exp(x)*sin(y) are the analytic partials") {
  // d^(a+b)/dx^a dy^b [e^x sin y] = e^x * sin(y + b*pi/2)
  const double x0 = 0.3, y0 = 0.7;
  Jet x = Jet::variable(x0, 0, 2, 4);
  Jet y = Jet::variable(y0, 1, 2, 4);
  Jet f = exp(x) * sin(y);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      double expected = std::exp(x0) * std::sin(y0 + b * M_PI / 2);
      CHECK(deriv(f, {a, b}) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("reciprocal of 1 + x has derivatives (-1)^k k!") {
  Jet x = Jet::variable(0.0, 0, 1, 6);
  Jet f = 1.0 / (1.0 + x);
  double factorial = 1;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) factorial *= k;
    double expected = (k % 2 == 0 ? factorial : -factorial);
    CHECK(deriv(f, {k}) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("function inverses compose to the identity jet") {
  Jet x = Jet::variable(0.4, 0, 1, 8);
  Jet a = exp(log(x)) - x;
  Jet b = sqrt(x * x) - x;
  Jet c = sin(x) * sin(x) + cos(x) * cos(x) - 1.0;
  CHECK(a.max_abs() < 1e-13);
  CHECK(b.max_abs() < 1e-11);
  CHECK(c.max_abs() < 1e-13);
}

TEST_CASE("pow matches repeated multiplication and the general exponent rule") {
  Jet x = Jet::variable(1.7, 0, 1, 5);
  Jet p3 = pow(x, 3.0) - x * x * x;
  CHECK(p3.max_abs() < 1e-12);
  // d/dx x^2.5 = 2.5 x^1.5 at 1.7
  Jet ph = pow(x, 2.5);
  CHECK(deriv(ph, {1}) ==
        doctest::Approx(2.5 * std::pow(1.7, 1.5)).epsilon(1e-12));
}

TEST_CASE("partial lowers the order and shifts coefficients") {
  Jet x = Jet::variable(0.2, 0, 2, 5);
  Jet y = Jet::variable(-0.4, 1, 2, 5);
  Jet f = x * x * y + sin(x * y);
  Jet fx = f.partial(0);
  CHECK(fx.order() == 4);
  // compare the mixed partial computed both ways
  CHECK(deriv(fx, {1, 1}) == doctest::Approx(deriv(f, {2, 1})).epsilon(1e-12));
  CHECK(fx.value() == doctest::Approx(deriv(f, {1, 0})).epsilon(1e-12));
}

TEST_CASE("antiderivative undoes partial up to the dropped top degree") {
  Jet x = Jet::variable(0.3, 0, 1, 6);
  Jet f = exp(x);
  Jet g = f.partial(0).antiderivative(0);
  // g agrees with f - f(base) up to order 5
  Jet diff = (f - f.value()).truncated(5) - g.truncated(5);
  CHECK(diff.max_abs() < 1e-14);
  // antiderivative starts with a vanishing constant term
  CHECK(f.antiderivative(0).value() == 0.0);
}

TEST_CASE("embedded re-indexes variables and preserves derivatives") {
  Jet x = Jet::variable(0.5, 0, 1, 3);
  Jet f = x * x * x;
  Jet g = f.embedded(3, 1);  // x becomes variable 1 of 3
  CHECK(g.nvars() == 3);
  CHECK(deriv(g, {0, 2, 0}) == doctest::Approx(deriv(f, {2})).epsilon(1e-12));
  CHECK(deriv(g, {1, 0, 0}) == 0.0);
}

TEST_CASE("product rule holds for random polynomials") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Jet x = Jet::variable(coeff(rng), 0, 2, 4);
    Jet y = Jet::variable(coeff(rng), 1, 2, 4);
    Jet f = coeff(rng) * x * x + coeff(rng) * x * y + coeff(rng);
    Jet g = coeff(rng) * y * y + coeff(rng) * x + coeff(rng);
    Jet lhs = (f * g).partial(0);
    Jet rhs = f.partial(0) * g.truncated(3) + f.truncated(3) * g.partial(0);
    CHECK((lhs - rhs).max_abs() < 1e-12);
  }
}

TEST_CASE("compose_outer evaluates an outer Taylor series") {
  // outer coefficients of t -> t^2 about f0: (f0^2, 2 f0, 1)
  Jet x = Jet::variable(0.6, 0, 1, 4);
  Jet f = sin(x);
  double f0 = f.value();
  std::vector<double> outer = {f0 * f0, 2 * f0, 1.0};
  Jet composed = f.compose_outer(outer);
  CHECK((composed - f * f).max_abs() < 1e-14);
}

TEST_CASE("division against an independently computed quotient series") {
  // sin(x)/cos(x) has tan derivatives: 1, 0, 2, 0, 16, ... times k! scaling
  Jet x = Jet::variable(0.0, 0, 1, 5);
  Jet t = sin(x) / cos(x);
  CHECK(deriv(t, {0}) == doctest::Approx(0.0));
  CHECK(deriv(t, {1}) == doctest::Approx(1.0));
  CHECK(deriv(t, {2}) == doctest::Approx(0.0));
  CHECK(deriv(t, {3}) == doctest::Approx(2.0));
  CHECK(deriv(t, {4}) == doctest::Approx(0.0));
  CHECK(deriv(t, {5}) == doctest::Approx(16.0));
}

TEST_CASE("inverse requires a nonzero base value") {
  Jet x = Jet::variable(0.0, 0, 1, 3);
  CHECK_THROWS_AS((void)inverse(x), std::exception);
}

}  // TEST_SUITE
