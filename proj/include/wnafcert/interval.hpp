#pragma once

#include <mpfr.h>

#include <functional>
#include <optional>
#include <string>

#include "wnafcert/ztau.hpp"

namespace wnafcert {

/**
 * Certified real enclosure: the true value always lies in [lo, hi].
 * Endpoints are MPFR numbers at a fixed working precision; every operation
 * rounds the lower endpoint down and the upper endpoint up.
 */
class Interval {
public:
    explicit Interval(mpfr_prec_t prec);
    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    static Interval exact_long(long v, mpfr_prec_t prec);
    static Interval exact_integer(const Integer& v, mpfr_prec_t prec);
    static Interval from_rational(const Rational& v, mpfr_prec_t prec);
    static Interval hull(const Rational& lo, const Rational& hi, mpfr_prec_t prec);
    static Interval pi(mpfr_prec_t prec);
    /// Enclosure of sqrt(r) for rational r >= 0.
    static Interval sqrt_rational(const Rational& r, mpfr_prec_t prec);
    /// Enclosure of log(r) for rational r > 0.
    static Interval log_rational(const Rational& r, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }

    bool contains_zero() const;
    bool is_exact() const;
    double mid_double() const;
    double width_double() const;
    std::string str(std::size_t digits = 20) const;

    Interval operator-() const;
    Interval operator+(const Interval& other) const;
    Interval operator-(const Interval& other) const;
    Interval operator*(const Interval& other) const;
    /// Reciprocal; the interval must not contain zero.
    Interval recip() const;
    Interval operator/(const Interval& other) const { return *this * other.recip(); }

    Interval mul_integer(const Integer& k) const;
    Interval mul_rational(const Rational& k) const;
    Interval add_rational(const Rational& k) const;
    Interval abs() const;

    static Interval atan2(const Interval& y, const Interval& x);
    static Interval log(const Interval& x);

    /// Intersection; the arguments must overlap (both enclose the same value).
    static Interval meet(const Interval& a, const Interval& b);

    /// Convex hull of two enclosures.
    static Interval join(const Interval& a, const Interval& b);

    /// -1 if certainly below, +1 if certainly above, nullopt if undecided.
    static std::optional<int> compare(const Interval& a, const Interval& b);
    std::optional<int> compare_rational(const Rational& r) const;

    std::optional<Integer> floor_if_decided() const;
    /// Nearest integer if the enclosure pins it down, i.e. it lies strictly
    /// within (n - 1/2, n + 1/2).
    std::optional<Integer> round_if_decided() const;

    /// Enclosure of the distance to the nearest integer over this interval.
    Interval dist_to_nearest_int() const;

private:
    mpfr_prec_t prec_;
    mpfr_t lo_;
    mpfr_t hi_;
};

/// Generator producing an enclosure of one fixed real number at any precision.
using RealFn = std::function<Interval(mpfr_prec_t)>;

/// Refinable enclosure around a generator; refine() at least halves the width.
class RealEnclosure {
public:
    RealEnclosure(RealFn gen, mpfr_prec_t start_prec);

    const Interval& interval() const { return iv_; }
    mpfr_prec_t precision() const { return prec_; }
    Interval at(mpfr_prec_t prec) const { return gen_(prec); }

    void refine();

private:
    RealFn gen_;
    mpfr_prec_t prec_;
    Interval iv_;
};

}  // namespace wnafcert
