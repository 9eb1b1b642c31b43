#include <doctest.h>

#include <vector>

#include "wnafcert/rectangle.hpp"

using namespace wnafcert;

namespace {

constexpr mpfr_prec_t kPrec = 256;

struct CInterval {
    Interval re, im;

    CInterval operator+(const CInterval& o) const { return {re + o.re, im + o.im}; }
    CInterval operator-(const CInterval& o) const { return {re - o.re, im - o.im}; }
    CInterval operator*(const CInterval& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CInterval times_i() const { return {-im, re}; }
};

CInterval make_complex(const Rational& re, const Rational& im_sqrt_arg) {
    // re + i*sqrt(im_sqrt_arg)
    return {Interval::from_rational(re, kPrec), Interval::sqrt_rational(im_sqrt_arg, kPrec)};
}

// Geometric membership from the vertex formulas: projections of z - c0 onto
// the two edge vectors. Returns nullopt when z is too close to the boundary
// for the working precision to decide.
std::optional<bool> geometric_in_rectangle(const Integer& a, const Integer& b,
                                           Params params, long w) {
    long q = params.q;
    int p = params.p;
    CInterval tau = make_complex(Rational(p, 2), Rational(4 * q - 1, 4));
    CInterval tau_w{Interval::exact_long(1, kPrec), Interval::exact_long(0, kPrec)};
    for (long k = 0; k < w; ++k) tau_w = tau_w * tau;

    Interval inv_sqrt_q = Interval::sqrt_rational(Rational(1, q), kPrec);
    Interval sqrt_q = Interval::sqrt_rational(Rational(q), kPrec);
    CInterval scale{inv_sqrt_q, Interval::exact_long(0, kPrec)};

    // v0 = p/2 + i (q - 1/2)/sqrt(4q-1), v1 = i q / sqrt(4q-1)
    Interval inv_root = Interval::sqrt_rational(Rational(1, 4 * q - 1), kPrec);
    CInterval v0{Interval::from_rational(Rational(p, 2), kPrec),
                 inv_root.mul_rational(Rational(2 * q - 1, 2))};
    CInterval v1{Interval::exact_long(0, kPrec), inv_root.mul_rational(Rational(q))};

    // d = p i tau / sqrt(q), d_w = d (tau/sqrt(q))^w
    CInterval d = (tau * scale).times_i();
    if (p < 0) d = CInterval{-d.re, -d.im};
    CInterval tau_over_sqrtq_w = tau_w;
    Interval qw_pow = Interval::exact_long(1, kPrec);
    for (long k = 0; k < w; ++k) qw_pow = qw_pow * inv_sqrt_q;
    tau_over_sqrtq_w = CInterval{tau_w.re * qw_pow, tau_w.im * qw_pow};
    CInterval d_w = d * tau_over_sqrtq_w;

    Interval s = Interval::sqrt_rational(Rational(4 * q - 1, 4 * (q + 2)), kPrec);

    CInterval dw_sqrtq{d_w.re * sqrt_q, d_w.im * sqrt_q};
    CInterval c0 = (tau_w * v0) + dw_sqrtq;
    CInterval c1 = (tau_w * v1) - dw_sqrtq;
    CInterval pids{d_w.re * s, d_w.im * s};
    pids = pids.times_i();
    if (p < 0) pids = CInterval{-pids.re, -pids.im};
    CInterval c3 = c0 - pids;

    // z = a tau + b tau^2
    CInterval z = (tau * CInterval{Interval::exact_integer(a, kPrec),
                                   Interval::exact_long(0, kPrec)}) +
                  (tau * tau * CInterval{Interval::exact_integer(b, kPrec),
                                         Interval::exact_long(0, kPrec)});

    CInterval e1 = c1 - c0;
    CInterval e2 = c3 - c0;
    CInterval zz = z - c0;

    auto proj_test = [](const CInterval& v, const CInterval& e) -> std::optional<bool> {
        Interval dot = v.re * e.re + v.im * e.im;
        Interval len2 = e.re * e.re + e.im * e.im;
        auto lo = dot.compare_rational(Rational(0));
        auto hi = Interval::compare(dot, len2);
        if (!lo.has_value() || !hi.has_value()) return std::nullopt;
        return *lo > 0 && *hi < 0;
    };

    auto t1 = proj_test(zz, e1);
    auto t2 = proj_test(zz, e2);
    if (!t1.has_value() || !t2.has_value()) return std::nullopt;
    return *t1 && *t2;
}

}  // namespace

TEST_CASE("rect_bounds examples") {
    RectangleBounds rb = rect_bounds(Params(16, 1), 2);
    CHECK(rb.B1 == Rational(1024));
    CHECK(rb.u_w == Rational(-8));
    CHECK(rb.v_w == Rational(-15, 2));

    CHECK_THROWS_AS(rect_bounds(Params(2, 1), 4), RectangleDegenerate);
    CHECK_NOTHROW(rect_bounds(Params(3, 1), 4));
    CHECK(rectangle_well_defined(Params(2, 1), 5));
    CHECK_FALSE(rectangle_well_defined(Params(2, 1), 4));
    CHECK(rectangle_well_defined(Params(3, 1), 4));
    CHECK_FALSE(rectangle_well_defined(Params(3, 1), 3));
    CHECK(rectangle_well_defined(Params(16, -1), 2));
    CHECK_FALSE(rectangle_well_defined(Params(15, -1), 2));
}

TEST_CASE("the origin is never inside R_w") {
    for (long q : {5L, 16L})
        for (int p : {1, -1}) {
            RectangleBounds rb = rect_bounds(Params(q, p), 4);
            CHECK_FALSE(in_rectangle(0, 0, rb));
        }
}

TEST_CASE("q=16 w=2: rectangle contains no lattice point") {
    RectangleBounds rb = rect_bounds(Params(16, 1), 2);
    for (long a = -1000; a <= 1000; ++a)
        for (long b = -40; b <= 40; ++b)
            CHECK_FALSE(in_rectangle(a, b, rb));
    CHECK_FALSE(find_point_in_rectangle(Params(16, 1), 2).has_value());
}

TEST_CASE("q=5 w=4: found point is in the rectangle and tau-exact once") {
    auto pt = find_point_in_rectangle(Params(5, 1), 4);
    REQUIRE(pt.has_value());
    CHECK(tau_valuation(*pt) == 1);
    auto [a, b] = tau_tau2_coords(*pt);
    RectangleBounds rb = rect_bounds(Params(5, 1), 4);
    CHECK(in_rectangle(a, b, rb));
    CHECK_FALSE(mpz_divisible_ui_p(a.get_mpz_t(), 5));
}

TEST_CASE("exact membership agrees with the geometric oracle") {
    for (long q : {2L, 3L, 5L, 16L})
        for (int p : {1, -1})
            for (long w = 2; w <= 8; ++w) {
                Params params(q, p);
                if (!rectangle_well_defined(params, w)) continue;
                Integer limit;
                mpz_ui_pow_ui(limit.get_mpz_t(), static_cast<unsigned long>(q),
                              static_cast<unsigned long>((w + 3) / 2));
                if (limit > 600) continue;  // keep the exhaustive box small
                long L = limit.get_si() + 2;
                RectangleBounds rb = rect_bounds(params, w);
                for (long a = -L; a <= L; ++a)
                    for (long b = -L; b <= L; ++b) {
                        auto oracle = geometric_in_rectangle(a, b, params, w);
                        if (!oracle.has_value()) continue;  // boundary-close
                        CHECK(in_rectangle(a, b, rb) == *oracle);
                    }
            }
}

TEST_CASE("find_point agrees with exhaustive scan on small instances") {
    for (long q : {2L, 3L, 4L, 5L})
        for (int p : {1, -1})
            for (long w = 2; w <= 9; ++w) {
                Params params(q, p);
                if (!rectangle_well_defined(params, w)) continue;
                Integer limit;
                mpz_ui_pow_ui(limit.get_mpz_t(), static_cast<unsigned long>(q),
                              static_cast<unsigned long>((w + 3) / 2));
                if (limit > 2000) continue;
                long L = limit.get_si() + 2;
                RectangleBounds rb = rect_bounds(params, w);
                bool exhaustive_found = false;
                for (long a = -L; a <= L && !exhaustive_found; ++a) {
                    if (a % q == 0) continue;
                    for (long b = -L; b <= L; ++b)
                        if (in_rectangle(a, b, rb)) {
                            exhaustive_found = true;
                            break;
                        }
                }
                auto pt = find_point_in_rectangle(params, w);
                CHECK(pt.has_value() == exhaustive_found);
                if (pt) {
                    auto [a, b] = tau_tau2_coords(*pt);
                    CHECK(in_rectangle(a, b, rb));
                    CHECK(tau_valuation(*pt) == 1);
                }
            }
}

TEST_CASE("find_point succeeds across the guaranteed case list (subset)") {
    std::vector<std::pair<long, long>> cases{{2, 7},  {2, 12}, {2, 25}, {3, 5},
                                             {3, 9},  {4, 7},  {4, 16}, {5, 4},
                                             {11, 4}, {17, 5}, {30, 4}, {30, 13}};
    for (auto [q, w] : cases)
        for (int p : {1, -1}) {
            auto pt = find_point_in_rectangle(Params(q, p), w);
            REQUIRE_MESSAGE(pt.has_value(), "q=", q, " p=", p, " w=", w);
            CHECK(tau_valuation(*pt) == 1);
            auto [a, b] = tau_tau2_coords(*pt);
            CHECK(in_rectangle(a, b, rect_bounds(Params(q, p), w)));
        }
}

TEST_CASE("large-w search still produces verified points") {
    for (long q : {2L, 3L, 10L})
        for (int p : {1, -1})
            for (long w : {60L, 101L, 140L}) {
                auto pt = find_point_in_rectangle(Params(q, p), w);
                REQUIRE_MESSAGE(pt.has_value(), "q=", q, " p=", p, " w=", w);
                auto [a, b] = tau_tau2_coords(*pt);
                CHECK(in_rectangle(a, b, rect_bounds(Params(q, p), w)));
                CHECK(tau_valuation(*pt) == 1);
            }
}

TEST_CASE("axial form at the rounded midpoint never equals B1") {
    for (long q : {2L, 3L, 5L, 11L})
        for (int p : {1, -1})
            for (long w = 2; w <= 12; ++w) {
                Params params(q, p);
                if (!rectangle_well_defined(params, w)) continue;
                RectangleBounds rb = rect_bounds(params, w);
                // midpoint of the lower edge is tau^(w+1)/2 = (A_w/2) tau + (B_w/2) tau^2
                ZTau tw = tau_pow(params, w);
                for (int ra = 0; ra < 2; ++ra)
                    for (int rb2 = 0; rb2 < 2; ++rb2) {
                        Integer a, b;
                        mpz_fdiv_q_2exp(a.get_mpz_t(), tw.a().get_mpz_t(), 1);
                        mpz_fdiv_q_2exp(b.get_mpz_t(), tw.b().get_mpz_t(), 1);
                        a += ra;
                        b += rb2;
                        Integer m1 = rb.m11 * a + rb.m12 * b;
                        CHECK(m1 != rb.four_B1);
                    }
            }
}
