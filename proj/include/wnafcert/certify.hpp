#pragma once

#include <optional>
#include <string>
#include <utility>

#include "wnafcert/config.hpp"
#include "wnafcert/digit_set.hpp"
#include "wnafcert/ztau.hpp"

namespace wnafcert {

/**
 * A verified counterexample to wNAF minimality for one (q, p, w): the value
 * z = A tau^(w-1) + B has the stored weight-2 expansion but its wNAF has
 * weight at least 3. C, delta, A, B, D are the construction witnesses with
 * tau C = A + delta, D = B - delta tau^(w-1) and z = C tau^w + D, where C is
 * not a digit and not divisible by tau.
 */
struct Certificate {
    Params params;
    long w;
    ZTau C;
    ZTau delta;
    ZTau A;
    ZTau B;
    ZTau D;
    ZTau z;
    Expansion alt_expansion;  // B at index 0, A at index w-1
    Expansion wnaf_z;
};

struct Verdict {
    enum class Tag { NonOptimal, KnownOptimal, Unresolved };
    Tag tag;
    std::optional<Certificate> certificate;  // present iff NonOptimal
    std::string reason;                      // set for Unresolved
};

/**
 * First change delta, in the fixed order 1, -1, tau-p, -(tau-p) followed by
 * the extended candidates of norm <= q not divisible by tau (ascending norm,
 * then coordinates), such that lambda - delta lies strictly inside tau^w V
 * and is not divisible by tau. Requires tau || lambda (valuation exactly 1);
 * throws NoDeltaFound otherwise or when no candidate qualifies.
 */
ZTau find_delta(const ZTau& lambda, Params params, long w);

/**
 * Digits (B, D) with D = B - delta tau^(w-1), found near the center
 * delta tau^(w-1) / 2 within the lattice-point radius sqrt(q)/2 + 1 plus
 * margin. Throws NoCompensation when the local search finds no pair.
 */
std::pair<ZTau, ZTau> find_compensation(const ZTau& delta, Params params, long w);

/// Builds a certificate from a rectangle lattice point; throws
/// ConstructionFailed (with the failing stage) when any step has no witness.
Certificate construct_from_rectangle(Params params, long w);

/// Closed-form counterexamples for w in {2, 3} and q >= 3 (all four
/// parameter branches, with the even-q, p=-1, w=3 digit G derived from the
/// compensation identity).
Certificate explicit_family(Params params, long w);

/// The (q=4, w=6) special case with the relaxed change delta = -2p.
Certificate special_q4w6(int p);

/**
 * Direct search over digits A in descending-norm order and small changes
 * delta (norm <= q, not divisible by tau): returns the first certificate
 * that verifies, or nullopt if the search space is exhausted or the digit
 * set exceeds cfg.digit_set_cap.
 */
std::optional<Certificate> fallback_search(Params params, long w,
                                           const RunConfig& cfg = {});

/// (q, w) ranges of the lattice-point existence result.
bool in_lattice_point_cases(long q, long w);

/// Hypotheses of the rectangle-based construction (compensation guarantee).
bool construction_hypotheses(long q, long w);

/// Certifies one (q, p, w): KnownOptimal only for q=2, w in {2,3}; otherwise
/// NonOptimal with a verified certificate, or Unresolved with a reason.
Verdict run_single(Params params, long w, const RunConfig& cfg = {});

/// Independent re-check of every invariant of the certificate.
bool verify_certificate(const Certificate& cert);

}  // namespace wnafcert
