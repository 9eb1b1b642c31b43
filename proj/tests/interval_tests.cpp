#include <doctest.h>

#include "wnafcert/interval.hpp"

using namespace wnafcert;

TEST_CASE("basic enclosures") {
    Interval pi = Interval::pi(128);
    CHECK(pi.compare_rational(Rational(314159, 100000)) == 1);
    CHECK(pi.compare_rational(Rational(31416, 10000)) == -1);

    Interval r2 = Interval::sqrt_rational(2, 128);
    Interval sq = r2 * r2;
    CHECK_FALSE(sq.compare_rational(2).has_value());  // encloses exactly 2
    CHECK(sq.width_double() < 1e-30);

    Interval l = Interval::log_rational(Rational(1), 64);
    CHECK(l.contains_zero());
}

TEST_CASE("arithmetic keeps the true value enclosed") {
    mpfr_prec_t prec = 96;
    Interval a = Interval::from_rational(Rational(1, 3), prec);
    Interval b = Interval::from_rational(Rational(-7, 5), prec);
    Interval s = a + b;  // -16/15
    CHECK_FALSE(s.compare_rational(Rational(-16, 15)).has_value());
    Interval m = a * b;  // -7/15
    CHECK_FALSE(m.compare_rational(Rational(-7, 15)).has_value());
    Interval d = a / b;  // -5/21
    CHECK_FALSE(d.compare_rational(Rational(-5, 21)).has_value());
    Interval n = -a;
    CHECK_FALSE(n.compare_rational(Rational(-1, 3)).has_value());
    CHECK(m.abs().compare_rational(Rational(7, 16)) == 1);
}

TEST_CASE("atan2 quarter angle") {
    Interval one = Interval::exact_long(1, 128);
    Interval a = Interval::atan2(one, one);
    Interval four_a = a.mul_integer(4);
    // 4*atan2(1,1) = pi
    Interval pi = Interval::pi(128);
    CHECK_FALSE(Interval::compare(four_a, pi).has_value());
}

TEST_CASE("floor and round decisions") {
    Interval x = Interval::from_rational(Rational(7, 2), 64);  // 3.5
    CHECK(x.floor_if_decided() == Integer(3));
    CHECK_FALSE(x.round_if_decided().has_value());  // exactly between integers

    Interval y = Interval::from_rational(Rational(10, 3), 64);
    CHECK(y.floor_if_decided() == Integer(3));
    CHECK(y.round_if_decided() == Integer(3));
}

TEST_CASE("distance to nearest integer") {
    Interval x = Interval::from_rational(Rational(3, 10), 96);
    Interval d = x.dist_to_nearest_int();
    CHECK_FALSE(d.compare_rational(Rational(3, 10)).has_value());

    Interval y = Interval::from_rational(Rational(17, 10), 96);
    d = y.dist_to_nearest_int();
    CHECK_FALSE(d.compare_rational(Rational(3, 10)).has_value());

    // an integer inside the interval forces the lower bound to zero
    d = Interval::hull(Rational(9, 10), Rational(11, 10), 96).dist_to_nearest_int();
    CHECK(mpfr_zero_p(d.lo()));
    CHECK(d.compare_rational(Rational(11, 100)) == -1);

    // a half-integer inside pushes the upper bound to 1/2
    d = Interval::hull(Rational(2, 5), Rational(3, 5), 96).dist_to_nearest_int();
    CHECK(mpfr_cmp_d(d.hi(), 0.5) == 0);
    CHECK(d.compare_rational(Rational(39, 100)) == 1);

    // no breakpoint inside: linear range between the endpoint distances
    d = Interval::hull(Rational(11, 100), Rational(12, 100), 96).dist_to_nearest_int();
    CHECK(d.compare_rational(Rational(10, 100)) == 1);
    CHECK(d.compare_rational(Rational(13, 100)) == -1);
}

TEST_CASE("RealEnclosure refinement halves the width") {
    RealEnclosure golden(
        [](mpfr_prec_t prec) {
            Interval r5 = Interval::sqrt_rational(5, prec);
            return (r5.add_rational(1)).mul_rational(Rational(1, 2));
        },
        32);
    double w0 = golden.interval().width_double();
    CHECK(w0 > 0);
    for (int i = 0; i < 5; ++i) {
        double before = golden.interval().width_double();
        golden.refine();
        double after = golden.interval().width_double();
        CHECK(after <= before / 2);
    }
}
