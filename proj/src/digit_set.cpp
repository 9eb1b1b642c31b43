#include "wnafcert/digit_set.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <tuple>

namespace wnafcert {

namespace {

// The Voronoi-relevant units of Z[tau]: 1, tau, tau-p and their negatives.
std::array<ZTau, 6> voronoi_units(Params params) {
    ZTau one = ZTau::one(params);
    ZTau tau = ZTau::tau(params);
    ZTau tp = ZTau(-params.p, 1, params);
    return {one, tau, tp, -one, -tau, -tp};
}

Integer round_half_toward_zero(const Rational& x) {
    if (x == 0) return 0;
    Rational t = abs(x) - Rational(1, 2);
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
    return sgn(x) < 0 ? Integer(-r) : r;
}

struct ReductionContext {
    Params params;
    long w;
    ZTau tau_w;
    ZTau tau_w_conj;
    Integer q_w;
    std::array<ZTau, 7> scaled_candidates;  // tau^w * u, u in {0, +-1, +-tau, +-(tau-p)}

    explicit ReductionContext(Params params_, long w_)
        : params(params_), w(w_), tau_w(tau_pow(params_, w_)), tau_w_conj(conj(tau_w)),
          q_w(1),
          scaled_candidates{ZTau::zero(params_), ZTau::zero(params_), ZTau::zero(params_),
                            ZTau::zero(params_), ZTau::zero(params_), ZTau::zero(params_),
                            ZTau::zero(params_)} {
        mpz_ui_pow_ui(q_w.get_mpz_t(), static_cast<unsigned long>(params.q),
                      static_cast<unsigned long>(w));
        ZTau tau = ZTau::tau(params);
        ZTau tp = ZTau(-params.p, 1, params);
        scaled_candidates[0] = ZTau::zero(params);
        scaled_candidates[1] = tau_w;
        scaled_candidates[2] = -tau_w;
        scaled_candidates[3] = tau_w * tau;
        scaled_candidates[4] = -(tau_w * tau);
        scaled_candidates[5] = tau_w * tp;
        scaled_candidates[6] = -(tau_w * tp);
    }
};

ZTau minimal_norm_rep_ctx(const ZTau& z, const ReductionContext& ctx) {
    if (divisible_by_tau(z)) throw DivisibleInput();
    // z / tau^w = z * conj(tau^w) / q^w, rounded coordinatewise.
    ZTau zc = z * ctx.tau_w_conj;
    Integer ya = round_half_toward_zero(Rational(zc.a(), ctx.q_w));
    Integer yb = round_half_toward_zero(Rational(zc.b(), ctx.q_w));
    ZTau base = z - ctx.tau_w * ZTau(ya, yb, ctx.params);

    bool have = false;
    bool tie = false;
    ZTau best = base;
    Integer best_norm;
    for (const ZTau& s : ctx.scaled_candidates) {
        ZTau cand = base - s;
        Integer n = norm(cand);
        if (!have || n < best_norm) {
            best = cand;
            best_norm = n;
            have = true;
            tie = false;
        } else if (n == best_norm && cand != best) {
            tie = true;
        }
    }
    if (tie) throw TieDetected();
    return best;
}

// Exact division by tau^w; the quotient must be integral.
ZTau div_tau_w(const ZTau& z, const ReductionContext& ctx) {
    ZTau zc = z * ctx.tau_w_conj;
    if (!mpz_divisible_p(zc.a().get_mpz_t(), ctx.q_w.get_mpz_t()) ||
        !mpz_divisible_p(zc.b().get_mpz_t(), ctx.q_w.get_mpz_t()))
        throw NotDivisible();
    Integer a, b;
    mpz_divexact(a.get_mpz_t(), zc.a().get_mpz_t(), ctx.q_w.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), zc.b().get_mpz_t(), ctx.q_w.get_mpz_t());
    return ZTau(a, b, ctx.params);
}

Integer floor_sqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

Integer ceil_sqrt(const Integer& n) {
    Integer r = floor_sqrt(n);
    if (r * r != n) r += 1;
    return r;
}

}  // namespace

VoronoiPosition voronoi_membership(const QTau& z, const ZTau& tau_w) {
    Rational n0 = norm(z);
    bool boundary = false;
    for (const ZTau& u : voronoi_units(z.params())) {
        QTau shifted = z - QTau(tau_w * u);
        int c = cmp(n0, norm(shifted));
        if (c > 0) return VoronoiPosition::Exterior;
        if (c == 0) boundary = true;
    }
    return boundary ? VoronoiPosition::Boundary : VoronoiPosition::Interior;
}

VoronoiPosition voronoi_membership(const ZTau& z, const ZTau& tau_w) {
    Integer n0 = norm(z);
    bool boundary = false;
    for (const ZTau& u : voronoi_units(z.params())) {
        ZTau shifted = z - tau_w * u;
        int c = cmp(n0, norm(shifted));
        if (c > 0) return VoronoiPosition::Exterior;
        if (c == 0) boundary = true;
    }
    return boundary ? VoronoiPosition::Boundary : VoronoiPosition::Interior;
}

VoronoiPosition voronoi_membership(const QTau& z, long w) {
    return voronoi_membership(z, tau_pow(z.params(), w));
}

bool is_digit_value(const ZTau& z, const ZTau& tau_w) {
    if (z.is_zero()) return true;
    if (divisible_by_tau(z)) return false;
    return voronoi_membership(z, tau_w) == VoronoiPosition::Interior;
}

bool is_digit_value(const ZTau& z, long w) {
    return is_digit_value(z, tau_pow(z.params(), w));
}

ZTau minimal_norm_rep(const ZTau& z, long w) {
    ReductionContext ctx(z.params(), w);
    return minimal_norm_rep_ctx(z, ctx);
}

DigitSet::Key DigitSet::key(const ZTau& z) const {
    Integer j, k2, i;
    mpz_fdiv_r(j.get_mpz_t(), z.b().get_mpz_t(), g_.get_mpz_t());
    k2 = (z.b() - j) / g_;
    Integer x = z.a() - k2 * f_;
    mpz_fdiv_r(i.get_mpz_t(), x.get_mpz_t(), e_.get_mpz_t());
    return {i, j};
}

bool DigitSet::contains(const ZTau& z) const {
    if (z.params() != params_) throw ParamsMismatch();
    if (z.is_zero()) return true;
    if (divisible_by_tau(z)) return false;
    auto it = digits_.find(key(z));
    return it != digits_.end() && it->second == z;
}

bool is_digit(const ZTau& z, const DigitSet& ds) { return ds.contains(z); }

DigitSet build_digit_set(Params params, long w) {
    if (w < 2) throw OutOfRange("build_digit_set: w must be >= 2");
    ZTau tw = tau_pow(params, w);
    ZTau tw1 = tau_pow(params, w + 1);

    // Hermite form of the sublattice <tau^w, tau^(w+1)> in basis (1, tau).
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), tw.b().get_mpz_t(),
               tw1.b().get_mpz_t());
    Integer det = tw.a() * tw1.b() - tw1.a() * tw.b();
    Integer e = abs(det) / g;
    assert(e * g == abs(det));
    Integer f;
    {
        Integer f_raw = s * tw.a() + t * tw1.a();
        mpz_fdiv_r(f.get_mpz_t(), f_raw.get_mpz_t(), e.get_mpz_t());
    }
    // Divisibility by tau is constant on residue classes, so q | e and q | f.
    assert(mpz_divisible_ui_p(e.get_mpz_t(), static_cast<unsigned long>(params.q)));
    assert(mpz_divisible_ui_p(f.get_mpz_t(), static_cast<unsigned long>(params.q)));

    ReductionContext ctx(params, w);
    std::map<DigitSet::Key, ZTau> digits;
    for (Integer j = 0; j < g; ++j) {
        for (Integer i = 0; i < e; ++i) {
            if (mpz_divisible_ui_p(i.get_mpz_t(), static_cast<unsigned long>(params.q)))
                continue;
            ZTau rep(i, j, params);
            digits.emplace(DigitSet::Key{i, j}, minimal_norm_rep_ctx(rep, ctx));
        }
    }
    return DigitSet(params, w, std::move(e), std::move(f), std::move(g), std::move(digits));
}

Expansion wnaf(const ZTau& z, long w) {
    if (w < 2) throw OutOfRange("wnaf: w must be >= 2");
    Params params = z.params();
    ReductionContext ctx(params, w);
    Expansion e{params, w, {}};
    if (z.is_zero()) return e;

    // norm shrinks by a factor of about q per tau division
    std::size_t cap = 4 * mpz_sizeinbase(norm(z).get_mpz_t(), 2) + 10 * w + 64;
    ZTau cur = z;
    std::size_t steps = 0;
    while (!cur.is_zero()) {
        if (++steps > cap) throw NonTermination();
        if (divisible_by_tau(cur)) {
            e.digits.push_back(ZTau::zero(params));
            cur = div_tau(cur);
        } else {
            ZTau d = minimal_norm_rep_ctx(cur, ctx);
            e.digits.push_back(d);
            cur = div_tau_w(cur - d, ctx);  // exactness asserts the w-1 zero window
            if (!cur.is_zero())
                for (long k = 1; k < w; ++k) e.digits.push_back(ZTau::zero(params));
        }
    }
    return e;
}

ZTau value(const Expansion& e) {
    ZTau acc = ZTau::zero(e.params);
    ZTau tau = ZTau::tau(e.params);
    for (auto it = e.digits.rbegin(); it != e.digits.rend(); ++it) acc = acc * tau + *it;
    return acc;
}

long weight(const Expansion& e) {
    long count = 0;
    for (const ZTau& d : e.digits)
        if (!d.is_zero()) ++count;
    return count;
}

bool is_wnaf(const Expansion& e) {
    ZTau tau_w = tau_pow(e.params, e.w);
    long last_nonzero = -e.w;  // sentinel far enough left
    for (long i = 0; i < static_cast<long>(e.digits.size()); ++i) {
        const ZTau& d = e.digits[static_cast<std::size_t>(i)];
        if (d.is_zero()) continue;
        if (!is_digit_value(d, tau_w)) return false;
        if (i - last_nonzero < e.w && last_nonzero >= 0) return false;
        last_nonzero = i;
    }
    return true;
}

Integer max_digit_norm(Params params, long w) {
    Integer qw2;
    mpz_ui_pow_ui(qw2.get_mpz_t(), static_cast<unsigned long>(params.q),
                  static_cast<unsigned long>(w + 2));
    return qw2 / (4 * params.q - 1);
}

std::vector<ZTau> digits_in_norm_range(Params params, long w, const Integer& lo,
                                       const Integer& hi) {
    std::vector<ZTau> out;
    if (hi < lo || hi < 0) return out;
    ZTau tau_w = tau_pow(params, w);
    Integer lo_clamped = lo < 1 ? Integer(1) : lo;

    // norm(x + y tau) = ((2x + p y)^2 + (4q - 1) y^2) / 4
    Integer four_hi = 4 * hi;
    Integer four_lo = 4 * lo_clamped;
    Integer y_max = floor_sqrt(four_hi / (4 * params.q - 1));
    std::vector<std::tuple<Integer, Integer, Integer>> found;  // (norm, x, y)

    auto consider_interval = [&](const Integer& y, const Integer& t_lo, const Integer& t_hi) {
        // t = 2x + p y must have the correct parity
        for (Integer t = t_lo; t <= t_hi; ++t) {
            if (mpz_odd_p(t.get_mpz_t()) != mpz_odd_p(y.get_mpz_t())) continue;
            Integer x = (t - params.p * y) / 2;
            if (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(params.q)))
                continue;
            ZTau z(x, y, params);
            Integer n = norm(z);
            if (n < lo_clamped || n > hi) continue;
            if (voronoi_membership(z, tau_w) != VoronoiPosition::Interior) continue;
            found.emplace_back(n, x, y);
        }
    };

    for (Integer y = -y_max; y <= y_max; ++y) {
        Integer rem = four_hi - (4 * params.q - 1) * y * y;
        if (rem < 0) continue;
        Integer m_out = floor_sqrt(rem);
        Integer rem_in = four_lo - (4 * params.q - 1) * y * y;
        if (rem_in <= 0) {
            consider_interval(y, -m_out, m_out);
        } else {
            Integer m_in = ceil_sqrt(rem_in);
            consider_interval(y, -m_out, -m_in);
            if (m_in != 0) consider_interval(y, m_in, m_out);
        }
    }

    std::sort(found.begin(), found.end(), [](const auto& u, const auto& v) {
        if (std::get<0>(u) != std::get<0>(v)) return std::get<0>(u) > std::get<0>(v);
        if (std::get<1>(u) != std::get<1>(v)) return std::get<1>(u) < std::get<1>(v);
        return std::get<2>(u) < std::get<2>(v);
    });
    out.reserve(found.size());
    for (auto& [n, x, y] : found) out.emplace_back(x, y, params);
    return out;
}

}  // namespace wnafcert
