#pragma once

#include <gmpxx.h>

#include <optional>
#include <ostream>
#include <string>

#include "wnafcert/errors.hpp"

namespace wnafcert {

using Integer = mpz_class;
using Rational = mpq_class;

/**
 * Ambient parameters of the order Z[tau]: tau is the root
 * p/2 + i*sqrt(q - 1/4) of X^2 - p*X + q with q >= 2 and p in {-1, +1}.
 */
struct Params {
    long q;
    int p;

    Params(long q_, int p_) : q(q_), p(p_) {
        if (q < 2) throw OutOfRange("q must be >= 2");
        if (p != 1 && p != -1) throw OutOfRange("p must be +1 or -1");
    }

    bool operator==(const Params&) const = default;
};

class QTau;

/// Exact element a + b*tau of Z[tau].
class ZTau {
public:
    ZTau(Integer a, Integer b, Params params)
        : a_(std::move(a)), b_(std::move(b)), params_(params) {}

    static ZTau zero(Params params) { return ZTau(0, 0, params); }
    static ZTau one(Params params) { return ZTau(1, 0, params); }
    static ZTau tau(Params params) { return ZTau(0, 1, params); }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Params& params() const { return params_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    bool operator==(const ZTau& other) const {
        if (params_ != other.params_) throw ParamsMismatch();
        return a_ == other.a_ && b_ == other.b_;
    }
    bool operator!=(const ZTau& other) const { return !(*this == other); }

    ZTau operator-() const { return ZTau(-a_, -b_, params_); }

    ZTau operator+(const ZTau& other) const {
        check_params(other);
        return ZTau(a_ + other.a_, b_ + other.b_, params_);
    }

    ZTau operator-(const ZTau& other) const {
        check_params(other);
        return ZTau(a_ - other.a_, b_ - other.b_, params_);
    }

    // (a1 + b1 tau)(a2 + b2 tau) with tau^2 = p tau - q.
    ZTau operator*(const ZTau& other) const {
        check_params(other);
        Integer bb = b_ * other.b_;
        return ZTau(a_ * other.a_ - params_.q * bb,
                    a_ * other.b_ + other.a_ * b_ + params_.p * bb, params_);
    }

    ZTau operator*(const Integer& k) const { return ZTau(a_ * k, b_ * k, params_); }

    std::string str() const;

private:
    void check_params(const ZTau& other) const {
        if (params_ != other.params_) throw ParamsMismatch();
    }

    Integer a_;
    Integer b_;
    Params params_;
};

/// Element a + b*tau with rational coordinates, for points of (1/2)Z[tau]
/// and exact Voronoi-cell tests.
class QTau {
public:
    QTau(Rational a, Rational b, Params params)
        : a_(std::move(a)), b_(std::move(b)), params_(params) {
        a_.canonicalize();
        b_.canonicalize();
    }

    explicit QTau(const ZTau& z) : a_(z.a()), b_(z.b()), params_(z.params()) {}

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Params& params() const { return params_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    bool operator==(const QTau& other) const {
        if (params_ != other.params_) throw ParamsMismatch();
        return a_ == other.a_ && b_ == other.b_;
    }
    bool operator!=(const QTau& other) const { return !(*this == other); }

    bool operator<(const QTau& other) const {
        if (params_ != other.params_) throw ParamsMismatch();
        int c = cmp(a_, other.a_);
        if (c != 0) return c < 0;
        return b_ < other.b_;
    }

    QTau operator-() const { return QTau(-a_, -b_, params_); }

    QTau operator+(const QTau& other) const {
        check_params(other);
        return QTau(a_ + other.a_, b_ + other.b_, params_);
    }

    QTau operator-(const QTau& other) const {
        check_params(other);
        return QTau(a_ - other.a_, b_ - other.b_, params_);
    }

    QTau operator*(const QTau& other) const {
        check_params(other);
        Rational bb = b_ * other.b_;
        return QTau(a_ * other.a_ - params_.q * bb,
                    a_ * other.b_ + other.a_ * b_ + params_.p * bb, params_);
    }

    QTau operator*(const Rational& k) const { return QTau(a_ * k, b_ * k, params_); }

private:
    void check_params(const QTau& other) const {
        if (params_ != other.params_) throw ParamsMismatch();
    }

    Rational a_;
    Rational b_;
    Params params_;
};

/// |a + b*tau|^2 = a^2 + p*a*b + q*b^2, always a nonnegative integer.
inline Integer norm(const ZTau& z) {
    return z.a() * z.a() + z.params().p * z.a() * z.b() + z.params().q * z.b() * z.b();
}

inline Rational norm(const QTau& z) {
    return z.a() * z.a() + z.params().p * z.a() * z.b() + z.params().q * z.b() * z.b();
}

/// Complex conjugation: tau-bar = p - tau.
inline ZTau conj(const ZTau& z) {
    return ZTau(z.a() + z.params().p * z.b(), -z.b(), z.params());
}

inline QTau conj(const QTau& z) {
    return QTau(z.a() + z.params().p * z.b(), -z.b(), z.params());
}

/// tau | (a + b*tau) holds exactly when q | a.
inline bool divisible_by_tau(const ZTau& z) {
    return mpz_divisible_ui_p(z.a().get_mpz_t(), static_cast<unsigned long>(z.params().q)) != 0;
}

/// Exact quotient z / tau; closed form (c + d*tau)/tau = (c/q)p + d - (c/q)tau.
ZTau div_tau(const ZTau& z);

/// Largest k with tau^k | z; nullopt encodes the infinite valuation of 0.
std::optional<long> tau_valuation(const ZTau& z);

/// tau^w = A_w + B_w tau via A_{k+1} = -q B_k, B_{k+1} = A_k + p B_k.
ZTau tau_pow(Params params, long w);

std::ostream& operator<<(std::ostream& os, const ZTau& z);

}  // namespace wnafcert
