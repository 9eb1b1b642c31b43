#include <doctest.h>

#include <map>
#include <random>
#include <vector>

#include "wnafcert/digit_set.hpp"

using namespace wnafcert;

namespace {

// Independent residue label modulo tau^w: the coordinates of z*conj(tau^w)
// reduced mod q^w. Two points are congruent iff their labels agree.
std::pair<Integer, Integer> class_label(const ZTau& z, const ZTau& tau_w_conj,
                                        const Integer& q_w) {
    ZTau zc = z * tau_w_conj;
    Integer a, b;
    mpz_fdiv_r(a.get_mpz_t(), zc.a().get_mpz_t(), q_w.get_mpz_t());
    mpz_fdiv_r(b.get_mpz_t(), zc.b().get_mpz_t(), q_w.get_mpz_t());
    return {a, b};
}

// Brute-force minimal-norm class representatives over all lattice points of
// norm at most bound (every class minimum lies within the circumradius).
std::map<std::pair<Integer, Integer>, ZTau> oracle_digit_map(Params params, long w) {
    ZTau tau_w = tau_pow(params, w);
    ZTau tau_w_conj = conj(tau_w);
    Integer q_w;
    mpz_ui_pow_ui(q_w.get_mpz_t(), static_cast<unsigned long>(params.q),
                  static_cast<unsigned long>(w));
    Integer bound = max_digit_norm(params, w) + params.q;

    std::map<std::pair<Integer, Integer>, std::pair<ZTau, bool>> best;  // (min, tie?)
    Integer four_eq = 4 * bound;
    Integer y_max;
    mpz_sqrt(y_max.get_mpz_t(), Integer(four_eq / (4 * params.q - 1)).get_mpz_t());
    for (Integer y = -y_max; y <= y_max; ++y) {
        Integer rem = four_eq - (4 * params.q - 1) * y * y;
        if (rem < 0) continue;
        Integer m;
        mpz_sqrt(m.get_mpz_t(), rem.get_mpz_t());
        for (Integer t = -m; t <= m; ++t) {
            if (mpz_odd_p(t.get_mpz_t()) != mpz_odd_p(y.get_mpz_t())) continue;
            Integer x = (t - params.p * y) / 2;
            ZTau z(x, y, params);
            if (divisible_by_tau(z)) continue;
            if (norm(z) > bound) continue;
            auto key = class_label(z, tau_w_conj, q_w);
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(key, std::make_pair(z, false));
            } else {
                Integer cur = norm(it->second.first);
                Integer nz = norm(z);
                if (nz < cur)
                    it->second = {z, false};
                else if (nz == cur && z != it->second.first)
                    it->second.second = true;
            }
        }
    }

    std::map<std::pair<Integer, Integer>, ZTau> out;
    for (auto& [key, val] : best) {
        REQUIRE_FALSE(val.second);  // unique minimum per class
        out.emplace(key, val.first);
    }
    return out;
}

}  // namespace

TEST_CASE("voronoi membership examples") {
    Params p21(2, 1);
    CHECK(voronoi_membership(QTau(ZTau::zero(p21)), 4) == VoronoiPosition::Interior);
    CHECK(voronoi_membership(QTau(ZTau::zero(Params(37, -1))), 2) == VoronoiPosition::Interior);

    // half tau^(w+1) sits on the lower edge of tau^w V (w = 3)
    ZTau t4 = tau_pow(p21, 4);
    QTau half_t4(Rational(t4.a(), 2), Rational(t4.b(), 2), p21);
    CHECK(voronoi_membership(half_t4, 3) == VoronoiPosition::Boundary);

    // tau^2 is outside tau^2 V: it coincides with a nonzero lattice point of
    // tau^2 Z[tau]
    ZTau t2 = tau_pow(p21, 2);
    CHECK(voronoi_membership(QTau(t2), 2) == VoronoiPosition::Exterior);

    // brute-force distance comparison against all y in tau^2 Z[tau] with
    // coefficients in [-3,3]
    {
        Rational n0 = norm(QTau(t2));
        bool closer_elsewhere = false;
        for (long i = -3; i <= 3; ++i)
            for (long j = -3; j <= 3; ++j) {
                if (i == 0 && j == 0) continue;
                QTau y(QTau(t2 * ZTau(i, j, p21)));
                if (norm(QTau(t2) - y) < n0) closer_elsewhere = true;
            }
        CHECK(closer_elsewhere);
    }
}

TEST_CASE("minimal_norm_rep examples and oracle agreement") {
    Params p21(2, 1);
    CHECK(minimal_norm_rep(ZTau::one(p21), 2) == ZTau::one(p21));
    CHECK(minimal_norm_rep(ZTau(3, 0, p21), 2) == ZTau(-1, 0, p21));
    CHECK_THROWS_AS(minimal_norm_rep(ZTau(2, 0, p21), 2), DivisibleInput);

    Params p31(3, 1);
    ZTau rep = minimal_norm_rep(ZTau(1, 1, p31), 2);
    CHECK(is_digit_value(rep, 2));
    // the oracle is ground truth for the class minimum
    auto oracle = oracle_digit_map(p31, 2);
    ZTau tau_w_conj = conj(tau_pow(p31, 2));
    Integer q_w = 9;
    CHECK(oracle.at(class_label(ZTau(1, 1, p31), tau_w_conj, q_w)) == rep);
}

TEST_CASE("build_digit_set examples") {
    Params p21(2, 1);
    DigitSet ds = build_digit_set(p21, 2);
    CHECK(ds.size() == 2);
    CHECK(ds.contains(ZTau::one(p21)));
    CHECK(ds.contains(ZTau(-1, 0, p21)));
    CHECK(ds.contains(ZTau::zero(p21)));
    CHECK_FALSE(ds.contains(ZTau(3, 0, p21)));

    DigitSet ds31 = build_digit_set(Params(3, 1), 2);
    CHECK(ds31.size() == 6);

    DigitSet ds3 = build_digit_set(p21, 3);
    CHECK(ds3.size() == 4);
    for (auto& [key, d] : ds3.digits()) CHECK(ds3.contains(-d));
}

TEST_CASE("digit sets match the brute-force oracle on a small grid") {
    for (long q : {2L, 3L, 5L})
        for (int p : {1, -1})
            for (long w : {2L, 3L}) {
                Params params(q, p);
                DigitSet ds = build_digit_set(params, w);
                auto oracle = oracle_digit_map(params, w);
                Integer q_w, q_w1;
                mpz_ui_pow_ui(q_w.get_mpz_t(), static_cast<unsigned long>(q),
                              static_cast<unsigned long>(w));
                q_w1 = q_w / q;
                REQUIRE(ds.size() == oracle.size());
                CHECK(Integer(ds.size()) == q_w - q_w1);
                ZTau tau_w = tau_pow(params, w);
                ZTau tau_w_conj = conj(tau_w);
                for (auto& [key, d] : ds.digits()) {
                    CHECK(oracle.at(class_label(d, tau_w_conj, q_w)) == d);
                    CHECK(voronoi_membership(QTau(d), tau_w) == VoronoiPosition::Interior);
                    CHECK(ds.contains(-d));
                    CHECK(is_digit_value(d, tau_w));
                }
            }
}

TEST_CASE("wnaf examples") {
    Params p21(2, 1);
    Expansion e = wnaf(ZTau(3, 0, p21), 2);
    REQUIRE(e.digits.size() == 6);
    std::vector<long> expected{-1, 0, 1, 0, 0, 1};
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(e.digits[i] == ZTau(expected[i], 0, p21));
    CHECK(weight(e) == 3);
    CHECK(value(e) == ZTau(3, 0, p21));
    CHECK(is_wnaf(e));

    CHECK(wnaf(ZTau::zero(p21), 2).digits.empty());
    CHECK(weight(wnaf(ZTau::zero(p21), 2)) == 0);

    // a single digit expands to itself
    DigitSet ds = build_digit_set(p21, 2);
    for (auto& [key, d] : ds.digits()) {
        Expansion ed = wnaf(d, 2);
        REQUIRE(ed.digits.size() == 1);
        CHECK(ed.digits[0] == d);
    }
}

TEST_CASE("value examples") {
    Params p21(2, 1);
    Expansion empty{p21, 2, {}};
    CHECK(value(empty) == ZTau::zero(p21));

    // weight-2 identity of the explicit w=2 family for q=3, p=1
    Params p31(3, 1);
    Expansion fam{p31, 2, {ZTau(1, -1, p31), ZTau(-1, -1, p31)}};
    CHECK(value(fam) == ZTau(4, -3, p31));
}

TEST_CASE("is_wnaf rejects adjacent nonzeros") {
    Params p21(2, 1);
    Expansion bad{p21, 2, {ZTau::one(p21), ZTau::one(p21)}};
    CHECK_FALSE(is_wnaf(bad));
}

TEST_CASE("wnaf round trip on random inputs") {
    std::mt19937_64 rng(20250810);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (long q : {2L, 3L, 5L, 10L})
        for (int p : {1, -1})
            for (long w : {2L, 3L, 4L, 5L}) {
                Params params(q, p);
                ZTau tau_w = tau_pow(params, w);
                for (int i = 0; i < 100; ++i) {
                    ZTau z(dist(rng), dist(rng), params);
                    Expansion e = wnaf(z, w);
                    CHECK(value(e) == z);
                    CHECK(is_wnaf(e));
                    for (const ZTau& d : e.digits) CHECK(is_digit_value(d, tau_w));
                }
            }
}

TEST_CASE("no digit lies on the Voronoi boundary") {
    for (long q : {2L, 3L, 4L})
        for (int p : {1, -1}) {
            Params params(q, p);
            DigitSet ds = build_digit_set(params, 3);
            ZTau tau_w = tau_pow(params, 3);
            for (auto& [key, d] : ds.digits())
                CHECK(voronoi_membership(QTau(d), tau_w) != VoronoiPosition::Boundary);
        }
}

TEST_CASE("shortest vector of half-tau lattice") {
    for (long q : {2L, 3L, 11L})
        for (int p : {1, -1}) {
            Params params(q, p);
            ZTau tau = ZTau::tau(params);
            bool attained_at_half_tau = false;
            Rational best = -1;
            for (long a = -5; a <= 5; ++a)
                for (long b = -5; b <= 5; ++b) {
                    if (a == 0 && b == 0) continue;
                    ZTau v = tau * ZTau(a, b, params);  // a tau + b tau^2
                    Rational n = Rational(norm(v), 4);
                    if (best < 0 || n < best) {
                        best = n;
                        attained_at_half_tau = (b == 0 && (a == 1 || a == -1));
                    }
                }
            CHECK(best == Rational(q, 4));
            CHECK(attained_at_half_tau);
        }
}

TEST_CASE("digits_in_norm_range enumerates exactly the digits") {
    Params params(3, -1);
    long w = 3;
    DigitSet ds = build_digit_set(params, w);
    auto all = digits_in_norm_range(params, w, 1, max_digit_norm(params, w));
    CHECK(all.size() == ds.size());
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        CHECK(norm(all[i]) >= norm(all[i + 1]));
    for (const ZTau& d : all) CHECK(ds.contains(d));
}
