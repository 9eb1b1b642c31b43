#include "wnafcert/interval.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace wnafcert {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
    if (this != &other) {
        prec_ = other.prec_;
        mpfr_set_prec(lo_, prec_);
        mpfr_set_prec(hi_, prec_);
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
    if (this != &other) {
        prec_ = other.prec_;
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::exact_integer(const Integer& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::from_rational(const Rational& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    if (mpfr_less_p(r.hi_, r.lo_)) throw Error("interval hull with reversed endpoints");
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sqrt_rational(const Rational& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::log_rational(const Rational& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_log(r.lo_, r.lo_, MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    mpfr_log(r.hi_, r.hi_, MPFR_RNDU);
    return r;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::is_exact() const { return mpfr_equal_p(lo_, hi_) != 0; }

double Interval::mid_double() const {
    return (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)) / 2.0;
}

double Interval::width_double() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

std::string Interval::str(std::size_t digits) const {
    char* s1 = nullptr;
    char* s2 = nullptr;
    mpfr_asprintf(&s1, "%.*Rg", static_cast<int>(digits), lo_);
    mpfr_asprintf(&s2, "%.*Rg", static_cast<int>(digits), hi_);
    std::string out = std::string("[") + s1 + ", " + s2 + "]";
    mpfr_free_str(s1);
    mpfr_free_str(s2);
    return out;
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator+(const Interval& other) const {
    Interval r(std::max(prec_, other.prec_));
    mpfr_add(r.lo_, lo_, other.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, other.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& other) const {
    Interval r(std::max(prec_, other.prec_));
    mpfr_sub(r.lo_, lo_, other.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, other.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator*(const Interval& other) const {
    Interval r(std::max(prec_, other.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);

    bool first = true;
    const mpfr_srcptr xs[2] = {lo_, hi_};
    const mpfr_srcptr ys[2] = {other.lo_, other.hi_};
    for (auto x : xs)
        for (auto y : ys) {
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::recip() const {
    if (contains_zero()) throw Error("interval reciprocal across zero");
    Interval r(prec_);
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::mul_integer(const Integer& k) const {
    Interval r(prec_);
    if (sgn(k) >= 0) {
        mpfr_mul_z(r.lo_, lo_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi_, hi_, k.get_mpz_t(), MPFR_RNDU);
    } else {
        mpfr_mul_z(r.lo_, hi_, k.get_mpz_t(), MPFR_RNDD);
        mpfr_mul_z(r.hi_, lo_, k.get_mpz_t(), MPFR_RNDU);
    }
    return r;
}

Interval Interval::mul_rational(const Rational& k) const {
    Interval r(prec_);
    if (sgn(k) >= 0) {
        mpfr_mul_q(r.lo_, lo_, k.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, hi_, k.get_mpq_t(), MPFR_RNDU);
    } else {
        mpfr_mul_q(r.lo_, hi_, k.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, lo_, k.get_mpq_t(), MPFR_RNDU);
    }
    return r;
}

Interval Interval::add_rational(const Rational& k) const {
    Interval r(prec_);
    mpfr_add_q(r.lo_, lo_, k.get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(r.hi_, hi_, k.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::abs() const {
    Interval r(prec_);
    if (mpfr_sgn(lo_) >= 0) return *this;
    if (mpfr_sgn(hi_) <= 0) return -*this;
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    if (mpfr_less_p(r.hi_, hi_)) mpfr_set(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::atan2(const Interval& y, const Interval& x) {
    // Valid on boxes avoiding the branch cut; atan2 is monotone in each
    // argument separately there, so box extremes occur at corners.
    if (y.contains_zero() && mpfr_sgn(x.lo_) <= 0)
        throw Error("interval atan2 across the branch cut");
    mpfr_prec_t prec = std::max(y.prec_, x.prec_);
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    const mpfr_srcptr ys[2] = {y.lo_, y.hi_};
    const mpfr_srcptr xs[2] = {x.lo_, x.hi_};
    for (auto yy : ys)
        for (auto xx : xs) {
            mpfr_atan2(t, yy, xx, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_atan2(t, yy, xx, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::log(const Interval& x) {
    if (mpfr_sgn(x.lo_) <= 0) throw Error("interval log of nonpositive value");
    Interval r(x.prec_);
    mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::meet(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_set(r.lo_, mpfr_less_p(a.lo_, b.lo_) ? b.lo_ : a.lo_, MPFR_RNDD);
    mpfr_set(r.hi_, mpfr_less_p(a.hi_, b.hi_) ? a.hi_ : b.hi_, MPFR_RNDU);
    if (mpfr_less_p(r.hi_, r.lo_)) throw Error("interval meet of disjoint enclosures");
    return r;
}

Interval Interval::join(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

std::optional<int> Interval::compare(const Interval& a, const Interval& b) {
    if (mpfr_less_p(a.hi_, b.lo_)) return -1;
    if (mpfr_greater_p(a.lo_, b.hi_)) return 1;
    return std::nullopt;
}

std::optional<int> Interval::compare_rational(const Rational& r) const {
    if (mpfr_cmp_q(hi_, r.get_mpq_t()) < 0) return -1;
    if (mpfr_cmp_q(lo_, r.get_mpq_t()) > 0) return 1;
    return std::nullopt;
}

std::optional<Integer> Interval::floor_if_decided() const {
    mpfr_t f;
    mpfr_init2(f, prec_);
    mpfr_floor(f, lo_);
    Integer n;
    mpfr_get_z(n.get_mpz_t(), f, MPFR_RNDN);
    mpfr_clear(f);
    // decided iff hi < n + 1
    Integer n1 = n + 1;
    if (mpfr_cmp_z(hi_, n1.get_mpz_t()) < 0) return n;
    return std::nullopt;
}

std::optional<Integer> Interval::round_if_decided() const {
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    mpfr_round(m, m);
    Integer n;
    mpfr_get_z(n.get_mpz_t(), m, MPFR_RNDN);
    mpfr_clear(m);
    Rational lo_bound = Rational(2 * n - 1, 2);
    Rational hi_bound = Rational(2 * n + 1, 2);
    if (mpfr_cmp_q(lo_, lo_bound.get_mpq_t()) > 0 && mpfr_cmp_q(hi_, hi_bound.get_mpq_t()) < 0)
        return n;
    return std::nullopt;
}

Interval Interval::dist_to_nearest_int() const {
    Interval r(prec_);
    mpfr_t width;
    mpfr_init2(width, prec_);
    mpfr_sub(width, hi_, lo_, MPFR_RNDU);
    if (mpfr_cmp_ui(width, 1) >= 0) {
        mpfr_clear(width);
        mpfr_set_zero(r.lo_, 1);
        mpfr_set_ui_2exp(r.hi_, 1, -1, MPFR_RNDU);
        return r;
    }
    mpfr_clear(width);

    // Distance at an exact point x: |x - round(x)|, with directed rounding.
    auto point_dist = [&](mpfr_srcptr x, mpfr_ptr out_lo, mpfr_ptr out_hi) {
        mpfr_t n, d;
        mpfr_init2(n, prec_);
        mpfr_init2(d, prec_);
        mpfr_round(n, x);
        mpfr_sub(d, x, n, MPFR_RNDD);
        mpfr_abs(out_lo, d, MPFR_RNDD);
        mpfr_sub(d, x, n, MPFR_RNDU);
        mpfr_abs(d, d, MPFR_RNDU);
        if (mpfr_greater_p(d, out_lo))
            mpfr_set(out_hi, d, MPFR_RNDU);
        else
            mpfr_set(out_hi, out_lo, MPFR_RNDU);
        mpfr_clear(n);
        mpfr_clear(d);
    };

    mpfr_t lo1, hi1, lo2, hi2;
    mpfr_inits2(prec_, lo1, hi1, lo2, hi2, static_cast<mpfr_ptr>(nullptr));
    point_dist(lo_, lo1, hi1);
    point_dist(hi_, lo2, hi2);
    mpfr_min(r.lo_, lo1, lo2, MPFR_RNDD);
    mpfr_max(r.hi_, hi1, hi2, MPFR_RNDU);

    // Interior breakpoints: half-grid points k/2 inside [lo, hi].
    mpfr_t t;
    mpfr_init2(t, prec_);
    Integer k_lo, k_hi;
    mpfr_mul_2ui(t, lo_, 1, MPFR_RNDU);
    mpfr_ceil(t, t);
    mpfr_get_z(k_lo.get_mpz_t(), t, MPFR_RNDN);
    mpfr_mul_2ui(t, hi_, 1, MPFR_RNDD);
    mpfr_floor(t, t);
    mpfr_get_z(k_hi.get_mpz_t(), t, MPFR_RNDN);
    for (Integer k = k_lo; k <= k_hi; ++k) {
        if (mpz_even_p(k.get_mpz_t()))
            mpfr_set_zero(r.lo_, 1);
        else
            mpfr_set_ui_2exp(r.hi_, 1, -1, MPFR_RNDU);
    }
    mpfr_clears(lo1, hi1, lo2, hi2, t, static_cast<mpfr_ptr>(nullptr));
    return r;
}

RealEnclosure::RealEnclosure(RealFn gen, mpfr_prec_t start_prec)
    : gen_(std::move(gen)), prec_(start_prec), iv_(gen_(start_prec)) {}

void RealEnclosure::refine() {
    if (iv_.is_exact()) return;
    mpfr_t target;
    mpfr_init2(target, 64);
    mpfr_sub(target, iv_.hi(), iv_.lo(), MPFR_RNDU);
    mpfr_div_2ui(target, target, 1, MPFR_RNDU);

    constexpr mpfr_prec_t kHardCap = mpfr_prec_t(1) << 24;
    while (true) {
        prec_ *= 2;
        if (prec_ > kHardCap) {
            mpfr_clear(target);
            throw PrecisionExhausted("RealEnclosure::refine");
        }
        iv_ = Interval::meet(iv_, gen_(prec_));
        mpfr_t w;
        mpfr_init2(w, 64);
        mpfr_sub(w, iv_.hi(), iv_.lo(), MPFR_RNDU);
        bool done = mpfr_lessequal_p(w, target) != 0;
        mpfr_clear(w);
        if (done) break;
    }
    mpfr_clear(target);
}

}  // namespace wnafcert
