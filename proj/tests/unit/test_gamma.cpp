#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levyexp/errors.hpp"
#include "levyexp/gamma.hpp"
#include "test_support.hpp"

using namespace levyexp;

TEST_CASE("log gamma at half-integers and integers") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(2.0)) < 1e-15);
  CHECK(testing::rel_err(log_gamma(0.5), cplx(0.5 * std::log(std::numbers::pi))) < 1e-13);
  CHECK(testing::rel_err(log_gamma(11.0), cplx(std::log(3628800.0))) < 1e-14);
}

TEST_CASE("log gamma matches mpmath off the real axis") {
  CHECK(testing::rel_err(log_gamma({3.0, 4.0}),
                         cplx(-1.75662678460378411053, 4.74266443803465792819)) < 1e-13);
  CHECK(testing::rel_err(log_gamma({50.0, 80.0}),
                         cplx(95.0153580392578409933, 333.855265232326723122)) < 1e-13);
  // Reflection branch, continuous continuation of the principal branch
  CHECK(testing::rel_err(log_gamma({-2.5, 0.5}),
                         cplx(-0.935085621298277478683, -8.87096288524745919865)) < 1e-13);
}

TEST_CASE("log gamma is conjugate symmetric") {
  for (double re : {-3.3, 0.2, 1.7, 9.0})
    for (double im : {0.1, 2.0, 30.0}) {
      const cplx z(re, im);
      CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) < 1e-13 * std::abs(log_gamma(z)));
    }
}

TEST_CASE("log gamma rejects nonpositive integers") {
  CHECK_THROWS_AS(log_gamma(0.0), PoleError);
  CHECK_THROWS_AS(log_gamma(-3.0), PoleError);
}

TEST_CASE("reciprocal gamma") {
  CHECK(reciprocal_gamma(0.0) == cplx(0.0));
  CHECK(reciprocal_gamma(-4.0) == cplx(0.0));
  CHECK(reciprocal_gamma(cplx(-2.0 + 1e-13)) == cplx(0.0));
  CHECK(std::abs(reciprocal_gamma(1.0) - cplx(1.0)) < 1e-15);
  CHECK(testing::rel_err(reciprocal_gamma(-2.5), cplx(-1.05785546915204303803)) < 1e-13);
  CHECK(testing::rel_err(reciprocal_gamma(5.0), cplx(1.0 / 24.0)) < 1e-14);
}

TEST_CASE("nonpositive integer detection") {
  CHECK(is_nonpositive_integer(0.0));
  CHECK(is_nonpositive_integer(-7.0));
  CHECK_FALSE(is_nonpositive_integer(1.0));
  CHECK_FALSE(is_nonpositive_integer(-0.5));
  CHECK_FALSE(is_nonpositive_integer({-2.0, 1e-3}));
}
