#pragma once

#include <optional>

#include "wnafcert/interval.hpp"
#include "wnafcert/ztau.hpp"

namespace wnafcert {

/// True iff R_w has positive area, i.e. q^w > 16q - 4.
bool rectangle_well_defined(Params params, long w);

/**
 * Data for the membership test of the open rectangle R_w hugging the lower
 * long edge of tau^w V.
 *
 * A lattice point lambda = a tau + b tau^2 lies in R_w iff
 *     B1 < L1(a, b) < B2   and   |L2(a, b)| < B3
 * with L1 = a (u_w p/2 + v_w q) + b (u_w/2 - u_w q + v_w p q / 2) and
 * L2 = a u_w + b (u_w p + v_w q), where u_w + v_w tau = tau^(w+1)/2.
 *
 * Internally the forms are scaled by 4 to integer coefficients, and B2, B3
 * are kept as c + s*sqrt(r) with rational c, r so every comparison can fall
 * back to an exact square-root isolation.
 */
struct RectangleBounds {
    Params params;
    long w;
    Rational u_w, v_w;
    Rational B1;        // q^(w+1) / 4, exact
    Rational B2_base;   // B1; B2 = B2_base + sqrt(B2_rad)
    Rational B2_rad;    // q^(w+1) (4q-1) / (16 (q+2))
    Rational B3_base;   // q^(w+1) / (2 (4q-1)); B3 = B3_base - sqrt(B3_rad)
    Rational B3_rad;    // q^(w+2) / (4q-1)

    // 4*L1 = m11 a + m12 b, 4*L2 = m21 a + m22 b; det = 4 q^(w+2)
    Integer m11, m12, m21, m22;
    Integer four_B1;    // q^(w+1)

    Interval B2_enclosure(mpfr_prec_t prec) const;
    Interval B3_enclosure(mpfr_prec_t prec) const;
};

/// Computes the bounds; throws RectangleDegenerate when R_w has no area.
RectangleBounds rect_bounds(Params params, long w);

/// Exact membership of lambda = a tau + b tau^2 in the open rectangle R_w.
bool in_rectangle(const Integer& a, const Integer& b, const RectangleBounds& bounds);

/**
 * A point lambda = a tau + b tau^2 of R_w with q not dividing a, or nullopt
 * when no such point exists. When the coefficient range is small enough to
 * scan completely, the result is the candidate with smallest |b|, ties broken
 * by smallest |a|; emptiness is only ever reported by that complete scan.
 * Larger instances switch to a reduced-basis walk around the rectangle
 * center, which the covered parameter ranges always satisfy quickly.
 */
std::optional<ZTau> find_point_in_rectangle(Params params, long w);

/// sign of x - sqrt(r) for rational x and rational r >= 0, exact.
int cmp_rational_sqrt(const Rational& x, const Rational& r);

/// Writes lambda = a tau + b tau^2; requires tau | lambda.
std::pair<Integer, Integer> tau_tau2_coords(const ZTau& lambda);

}  // namespace wnafcert
