#pragma once

#include <optional>
#include <vector>

#include "wnafcert/config.hpp"
#include "wnafcert/interval.hpp"
#include "wnafcert/ztau.hpp"

namespace wnafcert {

/// Generator for epsilon = (2/pi) arg(tau), arg taken in (0, pi).
RealFn epsilon_fn(Params params);
RealEnclosure epsilon(Params params, mpfr_prec_t start_prec = 256);

/// Generator for delta = (2/pi) arg(a + b tau), arg taken in (-pi, pi].
RealFn delta_fn(const Integer& a, const Integer& b, Params params);
RealEnclosure delta(const Integer& a, const Integer& b, Params params,
                    mpfr_prec_t start_prec = 256);

/**
 * Least w0 such that
 *   7.72e13 log q log(2q) log(4.87 w max{3pi, 2 log q} / log(2q))
 *     > -log 9 + (w-4)/2 log q
 * fails for every w >= w0; solutions of the main inequality system are
 * impossible from w0 on. The crossing search rounds up.
 */
long long matveev_w_bound(long q, const RunConfig& cfg = {});

struct Convergent {
    Integer p;
    Integer q;
};

/**
 * Continued-fraction convergents of the real number behind the generator,
 * with denominators up to q_limit; every partial quotient is certified by
 * enclosure arithmetic and each convergent re-checked against |x - P/Q| <
 * 1/Q^2. Throws PrecisionExhausted when the value cannot be separated from a
 * rational at the configured ceiling.
 */
std::vector<Convergent> convergents(const RealFn& x, const Integer& q_limit,
                                    const RunConfig& cfg = {});

struct PairClass {
    enum class Tag { Independent, Dependent, AxisSpecial };
    Tag tag = Tag::Independent;
    Integer eta = 0;    // only for Dependent
    Integer theta = 0;  // only for Dependent, > 0

    static PairClass independent() { return {Tag::Independent, 0, 0}; }
    static PairClass axis_special() { return {Tag::AxisSpecial, 0, 0}; }
    static PairClass dependent(Integer eta, Integer theta) {
        return {Tag::Dependent, std::move(eta), std::move(theta)};
    }
};

/**
 * Decides whether log(tau/|tau|) and log((a+b tau)/|a+b tau|) are linearly
 * dependent over Q. Dependent(eta, theta) certifies the exact identity
 * (tau/|tau|)^eta = ((a+b tau)/|a+b tau|)^theta, verified over Q(tau) in its
 * squared form with a certified sign disambiguation. AxisSpecial covers b=0
 * and 2a+bp=0, whose second logarithm is an integer multiple of i pi/2.
 */
PairClass classify_pair(const Integer& a, const Integer& b, Params params,
                        const RunConfig& cfg = {});

/// Exponent search space for the dependence test: theta runs over the
/// divisors of 24N.
Integer dependence_N(const Integer& a, const Integer& b, Params params);

/**
 * Baker-Davenport reduction for an independent pair: scans convergents P/Q of
 * epsilon by ascending Q, accepts the first with kappa = w_q ||Q epsilon|| <
 * 1/4 and ||Q delta|| > 2 kappa, and returns
 * ceil((2/log q) log(2 chi Q/(kappa pi)) + 4). nullopt when no convergent in
 * range qualifies.
 */
std::optional<long long> bd_reduce_pair(const Integer& a, const Integer& b, Params params,
                                        long long w_q, const std::vector<Convergent>& convs,
                                        const RunConfig& cfg = {});

/// Reduction for a dependent pair with verified (eta, theta).
long long dependent_reduce(const Integer& a, const Integer& b, const Integer& eta,
                           const Integer& theta, Params params, long long w_q,
                           const std::vector<Convergent>& convs, const RunConfig& cfg = {});

/// Reduction for the two axis-special shapes (1,0) and (-p,2); result >= 25.
long long axis_special_reduce(const Integer& a, const Integer& b, Params params,
                              long long w_q, const std::vector<Convergent>& convs,
                              const RunConfig& cfg = {});

struct PairResult {
    Integer a;
    Integer b;
    PairClass cls;
    std::optional<long long> w_pair;  // nullopt = unresolved
};

struct BoundReport {
    Params params;
    int chi = 9;
    int psi = 4;
    long long w_matveev = 0;
    std::vector<PairResult> pairs;
    long long w_reduced = 0;
    bool all_resolved = false;
};

/// Normalized coefficient pairs for the reduction: (1,0) plus all coprime
/// (a,b) with b > 0 and norm(a + b tau) < psi^2 q^4.
std::vector<std::pair<Integer, Integer>> normalized_pairs(Params params);

/// Algorithm steps 1-2: Matveev bound plus the Baker-Davenport reduction over
/// all normalized pairs; w_reduced is the maximum of the per-pair bounds.
BoundReport reduced_bound(Params params, const RunConfig& cfg = {});

}  // namespace wnafcert
