#include "doctest.h"
#include "milne/complex.hpp"
#include "milne/ddouble.hpp"

#include <cmath>

using namespace milne;

TEST_SUITE("ddouble") {

TEST_CASE("ddouble.resolves_below_double_epsilon") {
  // (1 + 2^-60) - 1 is lost in double but exact in dd
  ddouble one(1.0);
  ddouble tiny(std::ldexp(1.0, -60));
  ddouble s = one + tiny;
  ddouble back = s - one;
  CHECK(to_double(back) == doctest::Approx(std::ldexp(1.0, -60)).epsilon(1e-25));
  CHECK(to_double(s) == 1.0); // invisible in the hi word alone
}

TEST_CASE("ddouble.product_cancellation") {
  // a*b - c*d where both products are ~1e16 and the difference is 1:
  // double loses it, dd keeps it exactly.
  double a = 1e8 + 1.0, b = 1e8 - 1.0; // a*b = 1e16 - 1
  double c = 1e8, d = 1e8;             // c*d = 1e16
  ddouble diff = ddouble(a) * ddouble(b) - ddouble(c) * ddouble(d);
  CHECK(to_double(diff) == -1.0);
}

TEST_CASE("ddouble.division_and_sqrt") {
  ddouble x(2.0);
  ddouble r = sqrt(x);
  ddouble err = r * r - x;
  CHECK(std::abs(to_double(err)) < 1e-30);

  ddouble q = ddouble(1.0) / ddouble(3.0);
  ddouble back = q * ddouble(3.0) - ddouble(1.0);
  CHECK(std::abs(to_double(back)) < 1e-30);
}

TEST_CASE("ddouble.comparisons_and_abs") {
  CHECK(ddouble(1.0, 1e-20) > ddouble(1.0));
  CHECK(ddouble(-2.0) < ddouble(1.0));
  CHECK(to_double(abs(ddouble(-3.5))) == 3.5);
  CHECK(isfinite(ddouble(1.0)));
  CHECK(!isfinite(ddouble(std::numeric_limits<double>::infinity())));
}

TEST_CASE("ddouble.complex_ops") {
  cplx<ddouble> z{ddouble(3.0), ddouble(4.0)};
  CHECK(to_double(modulus(z)) == doctest::Approx(5.0).epsilon(1e-15));
  cplx<ddouble> w = z * z; // (3+4i)^2 = -7 + 24i
  CHECK(to_double(w.re) == doctest::Approx(-7.0));
  CHECK(to_double(w.im) == doctest::Approx(24.0));
  cplx<ddouble> q = w / ddouble(2.0);
  CHECK(to_double(q.re) == doctest::Approx(-3.5));
  // division by complex
  cplx<ddouble> r = w / z;
  CHECK(to_double(r.re) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(to_double(r.im) == doctest::Approx(4.0).epsilon(1e-14));
}

} // TEST_SUITE
