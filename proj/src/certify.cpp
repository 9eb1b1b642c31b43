#include "wnafcert/certify.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <vector>

#include "wnafcert/rectangle.hpp"

namespace wnafcert {

namespace {

Integer pow_int(long base, long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return r;
}

Integer ceil_div(const Integer& a, const Integer& b) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// 1, -1, tau-p, -(tau-p), then the remaining changes of norm <= q not
// divisible by tau, by ascending norm and coordinates. The latter are the
// rational integers +-2 .. +-floor(sqrt(q)).
std::vector<ZTau> delta_candidates(Params params) {
    std::vector<ZTau> out;
    out.push_back(ZTau::one(params));
    out.push_back(-ZTau::one(params));
    out.push_back(ZTau(-params.p, 1, params));
    out.push_back(-ZTau(-params.p, 1, params));
    Integer k_max;
    mpz_sqrt(k_max.get_mpz_t(), Integer(params.q).get_mpz_t());
    for (Integer k = 2; k <= k_max; ++k) {
        out.push_back(ZTau(-k, 0, params));
        out.push_back(ZTau(k, 0, params));
    }
    return out;
}

Expansion make_alt_expansion(const ZTau& A, const ZTau& B, long w) {
    Expansion e{A.params(), w, {}};
    e.digits.push_back(B);
    for (long i = 1; i < w - 1; ++i) e.digits.push_back(ZTau::zero(A.params()));
    e.digits.push_back(A);
    return e;
}

Certificate assemble_certificate(Params params, long w, const ZTau& C, const ZTau& delta,
                                 const ZTau& A, const ZTau& B, const ZTau& D) {
    ZTau z = A * tau_pow(params, w - 1) + B;
    Certificate cert{params, w,  C, delta, A, B, D, z, make_alt_expansion(A, B, w),
                     wnaf(z, w)};
    return cert;
}

}  // namespace

ZTau find_delta(const ZTau& lambda, Params params, long w) {
    if (tau_valuation(lambda) != 1) throw NoDeltaFound();
    ZTau tau_w = tau_pow(params, w);
    for (const ZTau& d : delta_candidates(params)) {
        ZTau A = lambda - d;
        if (divisible_by_tau(A)) continue;
        if (voronoi_membership(A, tau_w) == VoronoiPosition::Interior) return d;
    }
    throw NoDeltaFound();
}

std::pair<ZTau, ZTau> find_compensation(const ZTau& delta, Params params, long w) {
    ZTau shift = delta * tau_pow(params, w - 1);
    ZTau tau_w = tau_pow(params, w);
    long q = params.q;
    // search disc around shift/2 with radius sqrt(q)/2 + 2;
    // radius^2 <= q/4 + 2 sqrt(q) + 4 <= 5q/4 + 5
    Rational radius_sq(5 * q + 20, 4);
    Rational cx(shift.a(), 2), cy(shift.b(), 2);
    cx.canonicalize();
    cy.canonicalize();

    // |u - c|^2 = (x - cx + p (y - cy)/2)^2 + (4q-1)(y - cy)^2 / 4
    Rational y_span_sq = radius_sq * 4 / (4 * q - 1);
    long y_span = 0;
    while (Rational((y_span + 1) * (y_span + 1)) <= y_span_sq) ++y_span;
    y_span += 1;
    Integer cy_floor;
    mpz_fdiv_q(cy_floor.get_mpz_t(), cy.get_num().get_mpz_t(), cy.get_den().get_mpz_t());

    long x_span = 0;
    while (Rational((x_span + 1) * (x_span + 1)) <= radius_sq) ++x_span;
    x_span += 2;
    Integer cx_floor;
    mpz_fdiv_q(cx_floor.get_mpz_t(), cx.get_num().get_mpz_t(), cx.get_den().get_mpz_t());

    std::vector<ZTau> candidates;
    for (Integer y = cy_floor - y_span; y <= cy_floor + y_span + 1; ++y) {
        for (Integer x = cx_floor - 2 * x_span; x <= cx_floor + 2 * x_span + 1; ++x) {
            Rational dx = Rational(x) - cx + Rational(params.p) * (Rational(y) - cy) / 2;
            Rational dy = Rational(y) - cy;
            Rational dist_sq = dx * dx + dy * dy * Rational(4 * q - 1, 4);
            if (dist_sq > radius_sq) continue;
            ZTau u(x, y, params);
            if (u.is_zero() || divisible_by_tau(u)) continue;
            if (voronoi_membership(u, tau_w) != VoronoiPosition::Interior) continue;
            ZTau d = u - shift;
            if (d.is_zero()) continue;
            if (voronoi_membership(d, tau_w) != VoronoiPosition::Interior) continue;
            candidates.push_back(u);
        }
    }
    if (candidates.empty()) throw NoCompensation();
    std::sort(candidates.begin(), candidates.end(), [](const ZTau& u, const ZTau& v) {
        Integer nu = norm(u), nv = norm(v);
        if (nu != nv) return nu < nv;
        if (u.a() != v.a()) return u.a() < v.a();
        return u.b() < v.b();
    });
    const ZTau& B = candidates.front();
    return {B, B - shift};
}

Certificate construct_from_rectangle(Params params, long w) {
    auto lambda = find_point_in_rectangle(params, w);
    if (!lambda.has_value()) throw ConstructionFailed("no lattice point in rectangle");
    ZTau C = div_tau(*lambda);
    if (divisible_by_tau(C)) throw ConstructionFailed("lattice point divisible twice");
    if (is_digit_value(C, w)) throw ConstructionFailed("quotient is a digit");
    ZTau delta = [&] {
        try {
            return find_delta(*lambda, params, w);
        } catch (const NoDeltaFound&) {
            throw ConstructionFailed("no admissible delta");
        }
    }();
    ZTau A = *lambda - delta;
    auto [B, D] = [&] {
        try {
            return find_compensation(delta, params, w);
        } catch (const NoCompensation&) {
            throw ConstructionFailed("no compensation pair");
        }
    }();
    Certificate cert = assemble_certificate(params, w, C, delta, A, B, D);
    if (weight(cert.wnaf_z) < 3) throw ConstructionFailed("wNAF weight below 3");
    return cert;
}

Certificate explicit_family(Params params, long w) {
    long q = params.q;
    int p = params.p;
    if (q < 3) throw OutOfRange("explicit_family requires q >= 3");
    if (w != 2 && w != 3) throw OutOfRange("explicit_family covers w in {2, 3}");
    Integer a = ceil_div(Integer(q), 2);
    Integer b = ceil_div(Integer(q) * q, 6 * q - 2);

    ZTau A = ZTau::zero(params), B = A, C = A, delta = A;
    if (w == 2) {
        // A = (1-a) tau + (a-q) p-dependent sign on the constant term
        if (p == 1)
            A = ZTau(a - q, 1 - a, params);
        else
            A = ZTau(q - a, 1 - a, params);
        B = p == 1 ? ZTau(1, -1, params) : ZTau(-1, a - 1, params);
        C = ZTau(-a, p, params);
        delta = ZTau(-p * a, 0, params);
    } else if (mpz_odd_p(Integer(q).get_mpz_t())) {
        if (p == 1) {
            A = ZTau((a - 1) * q - 1, 1 - q, params);
            B = ZTau(a - 1, q - a, params);
            C = ZTau(-a, 1 - a, params);
            delta = ZTau(1, -1, params);
        } else {
            // conjugate mirror of the p = +1 family; the change is tau - p
            A = ZTau((a - 1) * q - 1, q - 1, params);
            B = ZTau(a - 1, a - q, params);
            C = ZTau(a, 1 - a, params);
            delta = ZTau(1, 1, params);
        }
    } else {
        // even q; the same change delta = q - 1 works for both traces
        if (p == 1) {
            A = ZTau((a - 1) * q + 1, -a - b, params);
            B = ZTau(1 - a * q, a, params);
            C = ZTau(-b, -a, params);
        } else {
            A = ZTau((a - 1) * q + 1, a + b, params);
            B = ZTau(1 - a * q, -a, params);
            C = ZTau(b, -a, params);
        }
        delta = ZTau(q - 1, 0, params);
    }
    ZTau D = B - delta * tau_pow(params, w - 1);
    if (ZTau::tau(params) * C != A + delta)
        throw ConstructionFailed("explicit family: change identity");
    return assemble_certificate(params, w, C, delta, A, B, D);
}

Certificate special_q4w6(int p) {
    Params params(4, p);
    ZTau A(-66 * p, 7, params);
    ZTau B(-65, 0, params);
    ZTau C(-10, 17 * p, params);
    ZTau delta(-2 * p, 0, params);
    ZTau D = B - delta * tau_pow(params, 5);
    return assemble_certificate(params, 6, C, delta, A, B, D);
}

std::optional<Certificate> fallback_search(Params params, long w, const RunConfig& cfg) {
    if (w < 2) throw OutOfRange("fallback_search: w must be >= 2");
    if (pow_int(params.q, w) > cfg.digit_set_cap) return std::nullopt;
    ZTau tau_w = tau_pow(params, w);
    ZTau tau_w1 = tau_pow(params, w - 1);
    auto deltas = delta_candidates(params);
    std::sort(deltas.begin(), deltas.end(), [](const ZTau& u, const ZTau& v) {
        Integer nu = norm(u), nv = norm(v);
        if (nu != nv) return nu < nv;
        if (u.a() != v.a()) return u.a() < v.a();
        return u.b() < v.b();
    });

    // compensation depends only on delta; cache per candidate
    std::map<std::pair<Integer, Integer>, std::optional<std::pair<ZTau, ZTau>>> comp_cache;
    auto compensation_for = [&](const ZTau& delta) {
        auto key = std::make_pair(delta.a(), delta.b());
        auto it = comp_cache.find(key);
        if (it != comp_cache.end()) return it->second;
        std::optional<std::pair<ZTau, ZTau>> comp;
        try {
            comp = find_compensation(delta, params, w);
        } catch (const NoCompensation&) {
            // exhaustive scan over the digit set, ascending norm
            ZTau shift = delta * tau_w1;
            auto all = digits_in_norm_range(params, w, 1, max_digit_norm(params, w));
            for (auto it2 = all.rbegin(); it2 != all.rend(); ++it2) {
                ZTau d = *it2 - shift;
                if (!d.is_zero() && is_digit_value(d, tau_w)) {
                    comp = std::make_pair(*it2, d);
                    break;
                }
            }
        }
        comp_cache.emplace(key, comp);
        return comp;
    };

    Integer n_hi = max_digit_norm(params, w);
    Integer band = n_hi / 64 + 1;
    for (Integer hi = n_hi; hi >= 1; hi -= band) {
        Integer lo = hi - band + 1;
        if (lo < 1) lo = 1;
        for (const ZTau& A : digits_in_norm_range(params, w, lo, hi)) {
            for (const ZTau& delta : deltas) {
                ZTau s = A + delta;
                if (!divisible_by_tau(s)) continue;
                ZTau C = div_tau(s);
                if (divisible_by_tau(C)) continue;  // tau^2 | A + delta
                if (C.is_zero() || is_digit_value(C, tau_w)) continue;
                auto comp = compensation_for(delta);
                if (!comp.has_value()) continue;
                Certificate cert =
                    assemble_certificate(params, w, C, delta, A, comp->first, comp->second);
                if (verify_certificate(cert)) return cert;
            }
        }
    }
    return std::nullopt;
}

bool in_lattice_point_cases(long q, long w) {
    if ((q == 2 || q == 4) && w >= 7) return true;
    if (q == 3 && w >= 5) return true;
    if (q >= 5 && q <= 500 && w >= 4) return true;
    return false;
}

bool construction_hypotheses(long q, long w) { return (w >= 4 && q >= 11) || w >= 8; }

Verdict run_single(Params params, long w, const RunConfig& cfg) {
    if (w < 2) throw OutOfRange("run_single: w must be >= 2");
    long q = params.q;
    if (q == 2 && (w == 2 || w == 3)) return {Verdict::Tag::KnownOptimal, std::nullopt, ""};

    auto certify = [&](Certificate cert) -> Verdict {
        if (!verify_certificate(cert))
            return {Verdict::Tag::Unresolved, std::nullopt, "certificate failed verification"};
        return {Verdict::Tag::NonOptimal, std::move(cert), ""};
    };

    if (w == 2 || w == 3) return certify(explicit_family(params, w));
    if (q == 4 && w == 6) return certify(special_q4w6(params.p));

    if (in_lattice_point_cases(q, w) && construction_hypotheses(q, w)) {
        try {
            return certify(construct_from_rectangle(params, w));
        } catch (const ConstructionFailed&) {
            // fall through to the direct search
        }
    }
    auto cert = fallback_search(params, w, cfg);
    if (cert.has_value()) return certify(std::move(*cert));
    return {Verdict::Tag::Unresolved, std::nullopt, "no certificate found by direct search"};
}

bool verify_certificate(const Certificate& cert) {
    const Params& params = cert.params;
    long w = cert.w;
    if (w < 2) return false;
    ZTau tau_w = tau_pow(params, w);
    ZTau tau_w1 = tau_pow(params, w - 1);

    // digit membership of the stored witnesses
    if (cert.A.is_zero() || !is_digit_value(cert.A, tau_w)) return false;
    if (cert.B.is_zero() || !is_digit_value(cert.B, tau_w)) return false;
    if (cert.D.is_zero() || !is_digit_value(cert.D, tau_w)) return false;

    // the intermediate C must be a non-digit not divisible by tau
    if (cert.C.is_zero() || divisible_by_tau(cert.C)) return false;
    if (is_digit_value(cert.C, tau_w)) return false;

    // algebraic identities
    if (ZTau::tau(params) * cert.C != cert.A + cert.delta) return false;
    if (cert.D != cert.B - cert.delta * tau_w1) return false;
    if (cert.z != cert.A * tau_w1 + cert.B) return false;
    if (cert.z != cert.C * tau_w + cert.D) return false;

    // stored weight-2 expansion
    if (static_cast<long>(cert.alt_expansion.digits.size()) != w) return false;
    if (cert.alt_expansion.w != w || cert.alt_expansion.params != params) return false;
    if (cert.alt_expansion.digits.front() != cert.B) return false;
    if (cert.alt_expansion.digits.back() != cert.A) return false;
    for (long i = 1; i < w - 1; ++i)
        if (!cert.alt_expansion.digits[static_cast<std::size_t>(i)].is_zero()) return false;
    if (weight(cert.alt_expansion) != 2) return false;
    if (value(cert.alt_expansion) != cert.z) return false;

    // stored wNAF: well-formed, same value, strictly heavier
    if (cert.wnaf_z.w != w || cert.wnaf_z.params != params) return false;
    if (!is_wnaf(cert.wnaf_z)) return false;
    if (value(cert.wnaf_z) != cert.z) return false;
    if (weight(cert.wnaf_z) < 3) return false;
    return true;
}

}  // namespace wnafcert
