#pragma once

#include <map>
#include <utility>
#include <vector>

#include "wnafcert/ztau.hpp"

namespace wnafcert {

enum class VoronoiPosition { Interior, Boundary, Exterior };

/**
 * Classifies z against the scaled Voronoi cell tau^w V by the six exact
 * comparisons norm(z) vs norm(z - tau^w u) for u in {1, tau, tau-p} and
 * their negatives. Interior means all six are strict "<", Boundary means
 * at least one equality and no ">".
 */
VoronoiPosition voronoi_membership(const QTau& z, const ZTau& tau_w);
VoronoiPosition voronoi_membership(const QTau& z, long w);

/// Integer-only variant for lattice points.
VoronoiPosition voronoi_membership(const ZTau& z, const ZTau& tau_w);

/// Digit test without materializing a digit set: 0, or a lattice point not
/// divisible by tau lying strictly inside tau^w V.
bool is_digit_value(const ZTau& z, long w);
bool is_digit_value(const ZTau& z, const ZTau& tau_w);

/**
 * The unique representative of z's residue class modulo tau^w of minimal
 * norm. Requires tau not dividing z. The reduction rounds the rational
 * coordinates of z/tau^w half-toward-zero and then minimizes over the
 * 7-point candidate neighborhood {0, +-1, +-tau, +-(tau-p)}.
 */
ZTau minimal_norm_rep(const ZTau& z, long w);

/// The minimal norm representatives digit set modulo tau^w, keyed by the
/// canonical residue coordinates of the Hermite-form fundamental domain.
class DigitSet {
public:
    using Key = std::pair<Integer, Integer>;

    DigitSet(Params params, long w, Integer e, Integer f, Integer g,
             std::map<Key, ZTau> digits)
        : params_(params), w_(w), e_(std::move(e)), f_(std::move(f)), g_(std::move(g)),
          digits_(std::move(digits)) {}

    const Params& params() const { return params_; }
    long w() const { return w_; }
    const std::map<Key, ZTau>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }

    /// Canonical residue key of z modulo tau^w.
    Key key(const ZTau& z) const;

    /// True iff z = 0 or z is the stored representative of its class.
    bool contains(const ZTau& z) const;

private:
    Params params_;
    long w_;
    Integer e_, f_, g_;  // lattice tau^w Z[tau] = <(e,0), (f,g)> in basis (1, tau)
    std::map<Key, ZTau> digits_;
};

/// Enumerates one representative per residue class of Z[tau]/tau^w, drops the
/// classes divisible by tau and maps the rest through minimal_norm_rep.
DigitSet build_digit_set(Params params, long w);

bool is_digit(const ZTau& z, const DigitSet& ds);

/// Finite digit sequence, least-significant digit first.
struct Expansion {
    Params params;
    long w;
    std::vector<ZTau> digits;
};

/// Width-w non-adjacent form of z; value-preserving and unique.
Expansion wnaf(const ZTau& z, long w);

/// Exact Horner evaluation of the expansion.
ZTau value(const Expansion& e);

long weight(const Expansion& e);

/// Checks the width-w window property and digit membership.
bool is_wnaf(const Expansion& e);

/// Largest possible digit norm, floor(q^(w+2)/(4q-1)); every digit of the
/// minimal norm digit set satisfies norm <= this bound.
Integer max_digit_norm(Params params, long w);

/// All digits with norm in [lo, hi], sorted by descending norm and then by
/// coordinates. Works directly on lattice points, no residue map needed.
std::vector<ZTau> digits_in_norm_range(Params params, long w, const Integer& lo,
                                       const Integer& hi);

}  // namespace wnafcert
