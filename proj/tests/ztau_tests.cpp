#include <doctest.h>

#include <random>

#include "wnafcert/ztau.hpp"

using namespace wnafcert;

namespace {

ZTau random_ztau(Params params, std::mt19937_64& rng, long bound) {
    std::uniform_int_distribution<long> dist(-bound, bound);
    return ZTau(dist(rng), dist(rng), params);
}

}  // namespace

TEST_CASE("norm examples") {
    CHECK(norm(ZTau::zero(Params(2, 1))) == 0);
    for (long q : {2L, 3L, 7L, 100L})
        for (int p : {1, -1}) CHECK(norm(ZTau::tau(Params(q, p))) == q);
    // a^2 + p a b + q b^2 = 4356 - 462 + 196
    CHECK(norm(ZTau(-66, 7, Params(4, 1))) == 4090);
}

TEST_CASE("conj examples") {
    Params p21(2, 1);
    CHECK(conj(ZTau::tau(p21)) == ZTau(1, -1, p21));
    CHECK(conj(ZTau(5, 0, Params(7, -1))) == ZTau(5, 0, Params(7, -1)));
    CHECK(conj(ZTau(2, 5, Params(3, -1))) == ZTau(-3, -5, Params(3, -1)));
}

TEST_CASE("divisibility by tau") {
    Params p21(2, 1);
    CHECK_FALSE(divisible_by_tau(ZTau(3, 0, p21)));
    CHECK(divisible_by_tau(ZTau::tau(p21)));
    CHECK(divisible_by_tau(ZTau::tau(Params(17, -1))));
    CHECK(divisible_by_tau(ZTau(2, -2, p21)));
}

TEST_CASE("div_tau examples") {
    Params p21(2, 1);
    CHECK(div_tau(ZTau(2, 0, p21)) == ZTau(1, -1, p21));
    CHECK(div_tau(ZTau::tau(p21)) == ZTau::one(p21));
    CHECK(div_tau(ZTau::tau(Params(9, -1))) == ZTau::one(Params(9, -1)));
    CHECK(div_tau(ZTau(2, -2, p21)) == ZTau(-1, -1, p21));
    CHECK_THROWS_AS(div_tau(ZTau(3, 1, p21)), NotDivisible);
}

TEST_CASE("tau_valuation") {
    Params p21(2, 1);
    CHECK(tau_valuation(ZTau(3, 0, p21)) == 0);
    CHECK(tau_valuation(ZTau(-10, 5, p21)) == 2);  // tau^2 * 5
    CHECK_FALSE(tau_valuation(ZTau::zero(p21)).has_value());
    CHECK_FALSE(tau_valuation(ZTau::zero(Params(12, -1))).has_value());
}

TEST_CASE("tau_pow examples") {
    Params p21(2, 1);
    CHECK(tau_pow(p21, 1) == ZTau::tau(p21));
    CHECK(tau_pow(Params(400, -1), 1) == ZTau::tau(Params(400, -1)));
    CHECK(tau_pow(p21, 3) == ZTau(-2, -1, p21));
    CHECK(tau_pow(p21, 5) == ZTau(6, -1, p21));
}

TEST_CASE("ring arithmetic examples") {
    Params p21(2, 1);
    ZTau tau = ZTau::tau(p21);
    CHECK(tau * tau == ZTau(-2, 1, p21));  // minimal polynomial
    CHECK(ZTau(1, 1, p21) + ZTau(-1, -1, p21) == ZTau::zero(p21));
    CHECK(ZTau(-1, -1, p21) * tau == ZTau(2, -2, p21));
    CHECK_THROWS_AS((void)(ZTau::one(p21) + ZTau::one(Params(3, 1))), ParamsMismatch);
}

TEST_CASE("norm is multiplicative and faithful") {
    std::mt19937_64 rng(20240811);
    for (long q : {2L, 3L, 10L})
        for (int p : {1, -1}) {
            Params params(q, p);
            for (int i = 0; i < 2500; ++i) {
                ZTau x = random_ztau(params, rng, 1000);
                ZTau y = random_ztau(params, rng, 1000);
                CHECK(norm(x * y) == norm(x) * norm(y));
                CHECK((norm(x) == 0) == x.is_zero());
            }
        }
}

TEST_CASE("div_tau inverts multiplication by tau") {
    std::mt19937_64 rng(7);
    for (long q : {2L, 5L})
        for (int p : {1, -1}) {
            Params params(q, p);
            ZTau tau = ZTau::tau(params);
            for (int i = 0; i < 2000; ++i) {
                ZTau z = random_ztau(params, rng, 100000);
                if (!divisible_by_tau(z)) continue;
                CHECK(tau * div_tau(z) == z);
            }
        }
}

TEST_CASE("tau_pow matches repeated multiplication, coefficients coprime") {
    for (long q : {2L, 3L, 17L})
        for (int p : {1, -1}) {
            Params params(q, p);
            ZTau acc = ZTau::one(params);
            ZTau tau = ZTau::tau(params);
            for (long w = 0; w <= 60; ++w) {
                ZTau tw = tau_pow(params, w);
                CHECK(tw == acc);
                if (w >= 1) {
                    Integer g;
                    mpz_gcd(g.get_mpz_t(), tw.a().get_mpz_t(), tw.b().get_mpz_t());
                    CHECK(g == 1);
                }
                acc = acc * tau;
            }
        }
}

TEST_CASE("conj is an involutive ring homomorphism") {
    std::mt19937_64 rng(99);
    for (long q : {2L, 7L})
        for (int p : {1, -1}) {
            Params params(q, p);
            for (int i = 0; i < 2000; ++i) {
                ZTau x = random_ztau(params, rng, 1000);
                ZTau y = random_ztau(params, rng, 1000);
                CHECK(conj(conj(x)) == x);
                CHECK(conj(x * y) == conj(x) * conj(y));
                CHECK(conj(x + y) == conj(x) + conj(y));
                // z * conj(z) is the rational integer norm(z)
                ZTau zc = x * conj(x);
                CHECK(zc.b() == 0);
                CHECK(zc.a() == norm(x));
            }
        }
}
