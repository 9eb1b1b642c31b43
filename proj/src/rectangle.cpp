#include "wnafcert/rectangle.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <vector>

namespace wnafcert {

namespace {

constexpr long kScanLimit = 300000;

// enough mantissa to resolve the rectangle widths below q^(w+1)
mpfr_prec_t working_prec(const RectangleBounds& rb) {
    return static_cast<mpfr_prec_t>(mpz_sizeinbase(rb.four_B1.get_mpz_t(), 2)) + 160;
}

Integer pow_int(long base, long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return r;
}

// lambda = a tau + b tau^2 = (-q b) + (a + p b) tau in the (1, tau) basis
ZTau lattice_point(const Integer& a, const Integer& b, Params params) {
    return ZTau(-params.q * b, a + params.p * b, params);
}

struct ScanWindow {
    bool empty = false;
    Integer lo, hi;  // integer candidates, outer approximation
};

// outer integer range of (c1, c2) from interval endpoints
ScanWindow window_from_interval(const Interval& lo_iv, const Interval& hi_iv) {
    ScanWindow win;
    mpfr_t t;
    mpfr_init2(t, std::max(lo_iv.precision(), hi_iv.precision()));
    mpfr_ceil(t, lo_iv.lo());
    mpfr_get_z(win.lo.get_mpz_t(), t, MPFR_RNDN);
    mpfr_floor(t, hi_iv.hi());
    mpfr_get_z(win.hi.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    if (win.lo > win.hi) win.empty = true;
    return win;
}

ScanWindow intersect(const ScanWindow& a, const ScanWindow& b) {
    if (a.empty || b.empty) return ScanWindow{true, 0, 0};
    ScanWindow r;
    r.lo = std::max(a.lo, b.lo);
    r.hi = std::min(a.hi, b.hi);
    r.empty = r.lo > r.hi;
    return r;
}

}  // namespace

std::pair<Integer, Integer> tau_tau2_coords(const ZTau& lambda) {
    // lambda = a tau + b tau^2 = (-q b) + (a + p b) tau
    if (!divisible_by_tau(lambda)) throw NotDivisible();
    Integer b = -lambda.a() / lambda.params().q;
    Integer a = lambda.b() - lambda.params().p * b;
    return {a, b};
}

int cmp_rational_sqrt(const Rational& x, const Rational& r) {
    assert(sgn(r) >= 0);
    if (sgn(x) < 0) return sgn(r) == 0 ? sgn(x) : -1;
    return cmp(x * x, r);
}

bool rectangle_well_defined(Params params, long w) {
    if (w < 2) return false;
    return pow_int(params.q, w) > 16 * params.q - 4;
}

Interval RectangleBounds::B2_enclosure(mpfr_prec_t prec) const {
    return Interval::sqrt_rational(B2_rad, prec).add_rational(B2_base);
}

Interval RectangleBounds::B3_enclosure(mpfr_prec_t prec) const {
    return (-Interval::sqrt_rational(B3_rad, prec)).add_rational(B3_base);
}

RectangleBounds rect_bounds(Params params, long w) {
    if (w < 2) throw OutOfRange("rect_bounds: w must be >= 2");
    if (!rectangle_well_defined(params, w)) throw RectangleDegenerate();

    long q = params.q;
    int p = params.p;
    ZTau tw1 = tau_pow(params, w + 1);
    Integer U = tw1.a();
    Integer V = tw1.b();
    Integer q_w1 = pow_int(q, w + 1);

    RectangleBounds rb{params,
                       w,
                       Rational(U, 2),
                       Rational(V, 2),
                       Rational(q_w1, 4),
                       Rational(q_w1, 4),
                       Rational(q_w1 * (4 * q - 1), 16 * (q + 2)),
                       Rational(q_w1, 2 * (4 * q - 1)),
                       Rational(q_w1 * q, 4 * q - 1),
                       U * p + 2 * V * q,
                       U * (1 - 2 * q) + V * p * q,
                       2 * U,
                       2 * (U * p + V * q),
                       q_w1};
    rb.u_w.canonicalize();
    rb.v_w.canonicalize();
    rb.B1.canonicalize();
    rb.B2_base.canonicalize();
    rb.B2_rad.canonicalize();
    rb.B3_base.canonicalize();
    rb.B3_rad.canonicalize();
    assert(rb.m11 * rb.m22 - rb.m12 * rb.m21 == 4 * q_w1 * q);
    return rb;
}

bool in_rectangle(const Integer& a, const Integer& b, const RectangleBounds& rb) {
    Integer m1 = rb.m11 * a + rb.m12 * b;
    if (m1 <= rb.four_B1) return false;
    // m1 < 4 B2  <=>  m1 - q^(w+1) < sqrt(16 B2_rad)
    if (cmp_rational_sqrt(Rational(m1 - rb.four_B1), rb.B2_rad * 16) >= 0) return false;
    Integer m2 = rb.m21 * a + rb.m22 * b;
    // |m2| < 4 B3  <=>  4 B3_base - |m2| > sqrt(16 B3_rad)
    Rational slack = rb.B3_base * 4 - Rational(abs(m2));
    return cmp_rational_sqrt(slack, rb.B3_rad * 16) > 0;
}

namespace {

// Walks integers a inside [win.lo, win.hi] ordered by |a|, returning the
// first that passes the exact membership test and q does not divide a.
std::optional<Integer> best_a_in_window(const ScanWindow& win, const Integer& b,
                                        const RectangleBounds& rb) {
    if (win.empty) return std::nullopt;
    Integer start = 0;
    if (start < win.lo) start = win.lo;
    if (start > win.hi) start = win.hi;

    // Any interior integer passes in_rectangle (the outer window overshoots
    // by far less than 1), and among q consecutive integers q-1 are not
    // divisible by q, so a hit comes within a few steps when the window is
    // wide. The cap only guards degenerate narrow windows.
    Integer span = win.hi - win.lo + 1;
    long cap_steps = 16 * rb.params.q + 64;
    if (span < cap_steps) cap_steps = span.get_si() + 1;

    Integer down = start, up = start + 1;
    for (long step = 0; step < 2 * cap_steps; ++step) {
        bool take_down;
        bool down_ok = down >= win.lo;
        bool up_ok = up <= win.hi;
        if (!down_ok && !up_ok) break;
        if (down_ok && up_ok)
            take_down = abs(down) <= abs(up);
        else
            take_down = down_ok;
        Integer a = take_down ? down : up;
        if (take_down)
            down -= 1;
        else
            up += 1;
        if (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(rb.params.q)))
            continue;
        if (in_rectangle(a, b, rb)) return a;
    }
    return std::nullopt;
}

ScanWindow a_window_for_b(const Integer& b, const RectangleBounds& rb,
                          const Interval& B2x4, const Interval& B3x4) {
    // axial: four_B1 < m11 a + m12 b < 4 B2
    const mpfr_prec_t prec = working_prec(rb);
    std::optional<ScanWindow> axial, radial;
    Interval m12b = Interval::exact_integer(rb.m12 * b, prec);
    Interval m22b = Interval::exact_integer(rb.m22 * b, prec);
    Interval fourB1 = Interval::exact_integer(rb.four_B1, prec);

    if (rb.m11 != 0) {
        Interval inv = Interval::exact_integer(rb.m11, prec).recip();
        Interval e1 = (fourB1 - m12b) * inv;
        Interval e2 = (B2x4 - m12b) * inv;
        axial = rb.m11 > 0 ? window_from_interval(e1, e2) : window_from_interval(e2, e1);
    }
    if (rb.m21 != 0) {
        Interval inv = Interval::exact_integer(rb.m21, prec).recip();
        Interval e1 = (-B3x4 - m22b) * inv;
        Interval e2 = (B3x4 - m22b) * inv;
        radial = rb.m21 > 0 ? window_from_interval(e1, e2) : window_from_interval(e2, e1);
    }
    if (axial && radial) return intersect(*axial, *radial);
    if (axial) return *axial;
    if (radial) return *radial;
    return ScanWindow{true, 0, 0};
}

struct Mat2q {
    Rational a11, a12, a21, a22;
};

struct Mat2z {
    Integer a11, a12, a21, a22;
};

Rational dot(const Rational& x1, const Rational& y1, const Rational& x2, const Rational& y2) {
    return x1 * x2 + y1 * y2;
}

// Lagrange-reduces the columns of V, tracking the unimodular column transform.
void gauss_reduce(Mat2q& V, Mat2z& T) {
    auto col_norm = [&](int j) {
        if (j == 1) return dot(V.a11, V.a21, V.a11, V.a21);
        return dot(V.a12, V.a22, V.a12, V.a22);
    };
    auto swap_cols = [&]() {
        std::swap(V.a11, V.a12);
        std::swap(V.a21, V.a22);
        std::swap(T.a11, T.a12);
        std::swap(T.a21, T.a22);
    };
    for (int iter = 0; iter < 256; ++iter) {
        if (col_norm(1) > col_norm(2)) swap_cols();
        Rational n1 = col_norm(1);
        if (sgn(n1) == 0) break;
        Rational mu = dot(V.a11, V.a21, V.a12, V.a22) / n1;
        // nearest integer to mu
        Rational half(1, 2);
        Integer r;
        Rational shifted = mu + half;
        mpz_fdiv_q(r.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
        if (r == 0) {
            if (col_norm(2) >= n1) break;
            continue;
        }
        V.a12 -= Rational(r) * V.a11;
        V.a22 -= Rational(r) * V.a21;
        T.a12 -= r * T.a11;
        T.a22 -= r * T.a21;
    }
}

Rational rational_mid(const Interval& iv) {
    mpfr_t m;
    mpfr_init2(m, iv.precision());
    mpfr_add(m, iv.lo(), iv.hi(), MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    mpq_class out;
    mpfr_get_q(out.get_mpq_t(), m);
    mpfr_clear(m);
    out.canonicalize();
    return out;
}

Integer round_rational(const Rational& x) {
    Rational shifted = x + Rational(1, 2);
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
    return r;
}

// Reduced-basis walk for instances whose coefficient range is too large to
// scan: Babai rounding at the rectangle center plus an expanding ring search.
std::optional<ZTau> babai_search(const RectangleBounds& rb, const Interval& B2x4,
                                 const Interval& B3x4) {
    Rational s1 = rational_mid(B2x4) - Rational(rb.four_B1);  // ~ width of axial window
    Rational s2 = rational_mid(B3x4) * 2;                     // ~ width of radial window
    if (sgn(s1) <= 0 || sgn(s2) <= 0) return std::nullopt;

    Mat2q V{Rational(rb.m11) / s1, Rational(rb.m12) / s1, Rational(rb.m21) / s2,
            Rational(rb.m22) / s2};
    Mat2z T{1, 0, 0, 1};
    gauss_reduce(V, T);

    // center of the normalized box: m1 = four_B1 + s1/2, m2 = 0
    Rational c1 = (Rational(rb.four_B1) + s1 / 2) / s1;
    Rational c2 = 0;
    Rational det = V.a11 * V.a22 - V.a12 * V.a21;
    if (sgn(det) == 0) return std::nullopt;
    Rational k1 = (c1 * V.a22 - c2 * V.a12) / det;
    Rational k2 = (V.a11 * c2 - V.a21 * c1) / det;
    Integer k10 = round_rational(k1);
    Integer k20 = round_rational(k2);

    const long max_ring = 512;
    for (long ring = 0; ring <= max_ring; ++ring) {
        for (long i = -ring; i <= ring; ++i) {
            for (long j = -ring; j <= ring; ++j) {
                if (std::max(std::labs(i), std::labs(j)) != ring) continue;
                Integer m1 = k10 + i;
                Integer m2 = k20 + j;
                Integer a = T.a11 * m1 + T.a12 * m2;
                Integer b = T.a21 * m1 + T.a22 * m2;
                if (mpz_divisible_ui_p(a.get_mpz_t(),
                                       static_cast<unsigned long>(rb.params.q)))
                    continue;
                if (in_rectangle(a, b, rb)) return lattice_point(a, b, rb.params);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<ZTau> find_point_in_rectangle(Params params, long w) {
    if (w < 2) throw OutOfRange("find_point_in_rectangle: w must be >= 2");
    if (!rectangle_well_defined(params, w)) return std::nullopt;
    RectangleBounds rb = rect_bounds(params, w);
    const mpfr_prec_t prec = working_prec(rb);
    Interval B2x4 = Interval::sqrt_rational(rb.B2_rad * 16, prec)
                        .add_rational(Rational(rb.four_B1));
    Interval B3x4 =
        (-Interval::sqrt_rational(rb.B3_rad * 16, prec)).add_rational(rb.B3_base * 4);

    // b-range over the four corners of the image box, outer approximation
    Interval det_inv =
        Interval::exact_integer(rb.m11 * rb.m22 - rb.m12 * rb.m21, prec).recip();
    Interval fourB1 = Interval::exact_integer(rb.four_B1, prec);
    Interval m11_iv = Interval::exact_integer(rb.m11, prec);
    Interval m21_iv = Interval::exact_integer(rb.m21, prec);
    std::optional<Interval> b_hull;
    for (int ci = 0; ci < 2; ++ci)
        for (int cj = 0; cj < 2; ++cj) {
            Interval e1 = ci == 0 ? fourB1 : B2x4;
            Interval e2 = cj == 0 ? -B3x4 : B3x4;
            Interval bc = (m11_iv * e2 - m21_iv * e1) * det_inv;
            b_hull = b_hull ? Interval::join(*b_hull, bc) : bc;
        }

    ScanWindow b_range = window_from_interval(*b_hull, *b_hull);
    if (b_range.empty) return std::nullopt;

    Integer span = b_range.hi - b_range.lo + 1;
    if (span <= kScanLimit) {
        // complete scan in |b| ascending order; the first hit is the global
        // minimum of (|b|, |a|)
        std::vector<Integer> bs;
        bs.reserve(static_cast<std::size_t>(span.get_si()));
        for (Integer b = b_range.lo; b <= b_range.hi; ++b) bs.push_back(b);
        std::sort(bs.begin(), bs.end(), [](const Integer& x, const Integer& y) {
            if (abs(x) != abs(y)) return abs(x) < abs(y);
            return x < y;
        });
        for (const Integer& b : bs) {
            ScanWindow win = a_window_for_b(b, rb, B2x4, B3x4);
            auto a = best_a_in_window(win, b, rb);
            if (a) return lattice_point(*a, b, params);
        }
        return std::nullopt;
    }
    return babai_search(rb, B2x4, B3x4);
}

}  // namespace wnafcert
