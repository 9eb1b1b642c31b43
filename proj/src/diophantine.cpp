#include "wnafcert/diophantine.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace wnafcert {

namespace {

enum class Cert { True, False, Unknown };

// Evaluates a three-valued predicate at doubling precision until decided.
template <typename F>
Cert decide(F eval, const RunConfig& cfg) {
    for (mpfr_prec_t prec = cfg.precision_start;; prec *= 2) {
        auto r = eval(prec);
        if (r.has_value()) return *r ? Cert::True : Cert::False;
        if (prec > cfg.precision_ceiling) return Cert::Unknown;
    }
}

std::vector<std::pair<Integer, int>> factorize(const Integer& n_in) {
    std::vector<std::pair<Integer, int>> out;
    Integer n = n_in;
    assert(n >= 1);
    auto strip = [&](const Integer& d) {
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            n /= d;
            ++e;
        }
        if (e) out.emplace_back(d, e);
    };
    strip(2);
    for (Integer d = 3; d * d <= n; d += 2) strip(d);
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Integer radical(const std::vector<std::pair<Integer, int>>& f, bool odd_exponents_only) {
    Integer r = 1;
    for (auto& [p, e] : f)
        if (!odd_exponents_only || (e % 2 == 1)) r *= p;
    return r;
}

std::vector<Integer> divisors_of(const Integer& n) {
    std::vector<Integer> divs{1};
    for (auto& [p, e] : factorize(n)) {
        std::size_t base = divs.size();
        Integer pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

Interval two_over_pi_times(const Interval& theta, mpfr_prec_t prec) {
    return theta.mul_rational(2) * Interval::pi(prec).recip();
}

}  // namespace

RealFn epsilon_fn(Params params) {
    return [params](mpfr_prec_t prec) {
        Interval y = Interval::sqrt_rational(Rational(4 * params.q - 1, 4), prec);
        Interval x = Interval::from_rational(Rational(params.p, 2), prec);
        return two_over_pi_times(Interval::atan2(y, x), prec);
    };
}

RealEnclosure epsilon(Params params, mpfr_prec_t start_prec) {
    return RealEnclosure(epsilon_fn(params), start_prec);
}

RealFn delta_fn(const Integer& a, const Integer& b, Params params) {
    if (a == 0 && b == 0) throw ZeroElement();
    return [a, b, params](mpfr_prec_t prec) {
        if (b == 0)
            return Interval::exact_long(a > 0 ? 0 : 2, prec);
        Interval y = Interval::sqrt_rational(Rational(4 * params.q - 1, 4), prec).mul_integer(b);
        Interval x = Interval::from_rational(Rational(2 * a + params.p * b, 2), prec);
        return two_over_pi_times(Interval::atan2(y, x), prec);
    };
}

RealEnclosure delta(const Integer& a, const Integer& b, Params params, mpfr_prec_t start_prec) {
    return RealEnclosure(delta_fn(a, b, params), start_prec);
}

long long matveev_w_bound(long q, const RunConfig& cfg) {
    if (q < 2) throw OutOfRange("matveev_w_bound: q must be >= 2");
    const Integer C("77200000000000");  // 7.72e13

    // nullopt = undecided at this precision, otherwise "inequality fails at w"
    auto fails_at = [&](long long w) {
        return [&, w](mpfr_prec_t prec) -> std::optional<bool> {
            Interval logq = Interval::log_rational(Rational(q), prec);
            Interval log2q = Interval::log_rational(Rational(2 * q), prec);
            Interval three_pi = Interval::pi(prec).mul_rational(3);
            Interval two_logq = logq.mul_rational(2);
            auto pick = Interval::compare(three_pi, two_logq);
            if (!pick.has_value()) return std::nullopt;
            const Interval& big = *pick > 0 ? three_pi : two_logq;

            Interval inner = Interval::exact_integer(Integer(static_cast<long>(w)), prec)
                                 .mul_rational(Rational(487, 100)) *
                             big * log2q.recip();
            Interval lhs = Interval::exact_integer(C, prec) * logq * log2q * Interval::log(inner);
            Interval rhs = logq.mul_rational(Rational(static_cast<long>(w - 4), 2)) -
                           Interval::log_rational(Rational(9), prec);
            auto c = Interval::compare(lhs, rhs);
            if (!c.has_value()) return std::nullopt;
            return *c < 0;  // lhs <= rhs certainly: no solutions at this w
        };
    };
    auto fails = [&](long long w) {
        Cert c = decide(fails_at(w), cfg);
        if (c == Cert::Unknown) throw PrecisionExhausted("matveev_w_bound");
        return c == Cert::True;
    };

    long long hi = 16;
    while (!fails(hi)) {
        if (hi > (1LL << 61)) throw Error("matveev_w_bound: no crossing found");
        hi *= 2;
    }
    long long lo = hi / 2;  // holds here (or hi == 16 and lo trivially below)
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (fails(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<Convergent> convergents(const RealFn& x, const Integer& q_limit,
                                    const RunConfig& cfg) {
    for (mpfr_prec_t prec = cfg.precision_start;; prec *= 2) {
        if (prec > cfg.precision_ceiling) throw PrecisionExhausted("convergents");
        Interval X = x(prec);
        std::vector<Convergent> out;
        Integer pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
        bool complete = false;
        while (true) {
            auto a = X.floor_if_decided();
            if (!a.has_value()) break;
            Integer P = *a * pm1 + pm2;
            Integer Q = *a * qm1 + qm2;
            out.push_back({P, Q});
            pm2 = pm1;
            qm2 = qm1;
            pm1 = P;
            qm1 = Q;
            if (Q > q_limit) {
                complete = true;
                break;
            }
            Interval frac = X - Interval::exact_integer(*a, prec);
            if (frac.contains_zero()) {
                if (frac.is_exact())
                    throw PrecisionExhausted("convergents: value is rational");
                break;
            }
            X = frac.recip();
        }
        if (!complete) continue;

        // re-check |x - P/Q| < 1/Q^2 for every convergent
        Interval X0 = x(prec);
        bool certified = true;
        for (const Convergent& c : out) {
            Rational pq(c.p, c.q);
            pq.canonicalize();
            Interval err = (X0 - Interval::from_rational(pq, prec)).abs();
            Interval scaled = err.mul_integer(c.q * c.q);
            auto cm = scaled.compare_rational(1);
            if (!cm.has_value() || *cm >= 0) {
                certified = false;
                break;
            }
        }
        if (certified) return out;
    }
}

Integer dependence_N(const Integer& a, const Integer& b, Params params) {
    Integer m = norm(ZTau(a, b, params));
    auto fq = factorize(Integer(params.q));
    auto fm = factorize(m);

    Integer d1 = 1;
    for (auto& [p, e] : fq)
        if (e % 2 == 1) {
            Integer pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            d1 *= pe;
        }
    Integer m1 = 1;
    std::vector<std::pair<Integer, int>> fm1;
    for (auto& [p, e] : fm)
        if (e % 2 == 1) {
            Integer pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            m1 *= pe;
            fm1.emplace_back(p, e);
        }

    // m' = m1 / gcd(m1, d1); exponents of m' determine its squarefree kernel
    Integer g;
    mpz_gcd(g.get_mpz_t(), m1.get_mpz_t(), d1.get_mpz_t());
    Integer mprime = m1 / g;
    Integer kernel_mprime = 1;
    for (auto& [p, e] : fm1) {
        int ed1 = 0;
        Integer t = d1;
        while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
            t /= p;
            ++ed1;
        }
        int em = e - std::min(e, ed1);
        if (em % 2 == 1) kernel_mprime *= p;
    }
    Integer kernel_d1 = radical(factorize(d1), false);

    Integer d1mprime = d1 * mprime;
    std::vector<Integer> alpha_primes;
    for (auto& [ell, alpha] : fq) {
        Integer aprime;
        if (ell != 2) {
            if (mpz_divisible_p(d1mprime.get_mpz_t(), ell.get_mpz_t())) {
                aprime = alpha;
            } else {
                assert(alpha % 2 == 0);
                aprime = alpha / 2;
            }
        } else {
            // ramification of (2) in Q(sqrt(d1)), Q(sqrt(m')) and their
            // compositum, read off the squarefree kernels mod 4
            Integer k1 = kernel_d1;
            Integer k2 = kernel_mprime;
            Integer kg;
            mpz_gcd(kg.get_mpz_t(), k1.get_mpz_t(), k2.get_mpz_t());
            Integer k3 = (k1 / kg) * (k2 / kg);
            auto ram = [](const Integer& k) { return mpz_fdiv_ui(k.get_mpz_t(), 4) != 1; };
            int c = (ram(k1) ? 1 : 0) + (ram(k2) ? 1 : 0) + (ram(k3) ? 1 : 0);
            assert(c != 1);
            if (c == 0) {
                assert(alpha % 2 == 0);
                aprime = alpha / 2;
            } else if (c == 2) {
                aprime = alpha;
            } else {
                aprime = 2 * alpha;
            }
        }
        alpha_primes.push_back(aprime);
    }
    Integer N = 0;
    for (const Integer& ap : alpha_primes) mpz_gcd(N.get_mpz_t(), N.get_mpz_t(), ap.get_mpz_t());
    assert(N >= 1);
    return N;
}

namespace {

// t = (tau/|tau|)^2 = tau^2/q and r = ((a+b tau)/|a+b tau|)^2 = (a+b tau)^2/m
// are exact elements of Q(tau); the squared dependence identity t^eta = r^theta
// is decided by table lookup over the eta range.
QTau unit_square_tau(Params params) {
    return QTau(Rational(-1), Rational(params.p, params.q), params);
}

QTau unit_square_of(const Integer& a, const Integer& b, Params params) {
    ZTau z(a, b, params);
    ZTau z2 = z * z;
    Integer m = norm(z);
    return QTau(Rational(z2.a(), m), Rational(z2.b(), m), params);
}

long eta_cap(const Integer& theta, Params params) {
    // |eta| < theta (4 + 2 log psi / log q), psi = 4
    Interval bf = Interval::log_rational(Rational(4), 128) *
                      Interval::log_rational(Rational(params.q), 128).recip() *
                      Interval::exact_long(2, 128) +
                  Interval::exact_long(4, 128);
    Interval cap = bf.mul_integer(theta);
    mpfr_t f;
    mpfr_init2(f, 128);
    mpfr_floor(f, cap.hi());
    long out = mpfr_get_si(f, MPFR_RNDN);
    mpfr_clear(f);
    return out;
}

// parity of k in  eta*arg(tau) - theta*arg(a+b tau) = k pi
std::optional<bool> angle_multiple_is_even(const Integer& eta, const Integer& theta,
                                           const Integer& a, const Integer& b, Params params,
                                           const RunConfig& cfg) {
    auto eval = [&](mpfr_prec_t prec) -> std::optional<bool> {
        Interval theta_tau = Interval::atan2(
            Interval::sqrt_rational(Rational(4 * params.q - 1, 4), prec),
            Interval::from_rational(Rational(params.p, 2), prec));
        Interval theta_ab = Interval::atan2(
            Interval::sqrt_rational(Rational(4 * params.q - 1, 4), prec).mul_integer(b),
            Interval::from_rational(Rational(2 * a + params.p * b, 2), prec));
        Interval k = (theta_tau.mul_integer(eta) - theta_ab.mul_integer(theta)) *
                     Interval::pi(prec).recip();
        auto n = k.round_if_decided();
        if (!n.has_value()) return std::nullopt;
        return mpz_even_p(n->get_mpz_t()) != 0;
    };
    Cert c = decide(eval, cfg);
    if (c == Cert::Unknown) return std::nullopt;
    return c == Cert::True;
}

}  // namespace

namespace {

// Shared power table of t = tau^2/q covering |eta| <= cap; grown on demand.
std::shared_ptr<const std::map<QTau, Integer>> t_power_table(Params params, long cap) {
    static std::mutex mtx;
    static std::map<std::tuple<long, int, long>, std::shared_ptr<std::map<QTau, Integer>>>
        cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{params.q, params.p, cap}];
    if (!slot) {
        auto table = std::make_shared<std::map<QTau, Integer>>();
        QTau t = unit_square_tau(params);
        QTau t_inv = conj(t);
        QTau one(Rational(1), Rational(0), params);
        table->emplace(one, 0);
        QTau up = one, down = one;
        for (long k = 1; k <= cap; ++k) {
            up = up * t;
            down = down * t_inv;
            table->emplace(up, Integer(k));
            table->emplace(down, Integer(-k));
        }
        slot = std::move(table);
    }
    return slot;
}

}  // namespace

PairClass classify_pair(const Integer& a, const Integer& b, Params params,
                        const RunConfig& cfg) {
    if (b == 0) return PairClass::axis_special();
    if (2 * a + params.p * b == 0) return PairClass::axis_special();

    Integer N = dependence_N(a, b, params);
    Integer theta_max = 24 * N;
    long cap_all = eta_cap(theta_max, params);
    auto t_pows_ptr = t_power_table(params, cap_all);
    const auto& t_pows = *t_pows_ptr;

    QTau r = unit_square_of(a, b, params);
    QTau r_pow(Rational(1), Rational(0), params);
    std::optional<std::pair<Integer, Integer>> odd_hit;  // (eta, theta), sign -1
    for (Integer theta = 1; theta <= theta_max; ++theta) {
        r_pow = r_pow * r;
        if (!mpz_divisible_p(theta_max.get_mpz_t(), theta.get_mpz_t())) continue;
        auto it = t_pows.find(r_pow);
        if (it == t_pows.end()) continue;
        const Integer& eta = it->second;
        assert(abs(eta) <= eta_cap(theta, params));
        auto even = angle_multiple_is_even(eta, theta, a, b, params, cfg);
        if (!even.has_value()) throw PrecisionExhausted("classify_pair: sign check");
        if (*even) return PairClass::dependent(eta, theta);
        if (!odd_hit) odd_hit = {eta, theta};
    }
    if (odd_hit) return PairClass::dependent(2 * odd_hit->first, 2 * odd_hit->second);
    return PairClass::independent();
}

namespace {

Integer floor_certified(const RunConfig& cfg, const std::function<Interval(mpfr_prec_t)>& f) {
    for (mpfr_prec_t prec = cfg.precision_start;; prec *= 2) {
        auto n = f(prec).floor_if_decided();
        if (n.has_value()) return *n;
        if (prec > cfg.precision_ceiling) throw PrecisionExhausted("floor of reduced bound");
    }
}

// certified test  Q' c e' < (2 chi theta / pi) q^(2 - W/2)  in the log domain,
// with e' = |epsilon - P'/Q'| and W = (c Q' + eta)/theta.
std::optional<bool> expanded_fraction_test(const RealFn& eps, const Integer& c,
                                           const Convergent& conv, const Integer& eta,
                                           const Integer& theta, Params params,
                                           mpfr_prec_t prec) {
    Rational pq(conv.p, conv.q);
    pq.canonicalize();
    Interval err = (eps(prec) - Interval::from_rational(pq, prec)).abs();
    if (err.contains_zero()) return std::nullopt;
    Integer Q = c * conv.q;
    Integer W_num = Q + eta;  // divisible by theta at call sites
    Rational W(W_num, theta);
    W.canonicalize();

    Interval lhs = Interval::log(err.mul_integer(Q));
    Rational chi_term(2 * 9 * theta);
    Interval rhs = Interval::log_rational(chi_term, prec) -
                   Interval::log(Interval::pi(prec)) +
                   Interval::log_rational(Rational(params.q), prec)
                       .mul_rational(Rational(2) - W / 2);
    auto cmp = Interval::compare(lhs, rhs);
    if (!cmp.has_value()) return std::nullopt;
    return *cmp < 0;
}

// Largest integer W_Q = (c Q' + eta)/theta with 1 <= W_Q < w_q over expanded
// fractions of the convergents satisfying the approximation inequality;
// nullopt when no fraction qualifies.
std::optional<Integer> largest_WQ(const RealFn& eps, const std::vector<Convergent>& convs,
                                  const Integer& eta, const Integer& theta, Params params,
                                  long long w_q, const RunConfig& cfg) {
    std::optional<Integer> best;
    Integer Q_cap = Integer(static_cast<long>(w_q - 1)) * theta - eta;  // Q <= Q_cap gives W_Q <= w_q - 1
    for (const Convergent& conv : convs) {
        if (conv.q < 1 || conv.q > Q_cap) continue;
        // c Q' == -eta (mod theta), c >= c_min, c <= c_max
        Integer qmod, etamod, g;
        mpz_fdiv_r(qmod.get_mpz_t(), conv.q.get_mpz_t(), theta.get_mpz_t());
        mpz_fdiv_r(etamod.get_mpz_t(), Integer(-eta).get_mpz_t(), theta.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), qmod.get_mpz_t(), theta.get_mpz_t());
        if (!mpz_divisible_p(etamod.get_mpz_t(), g.get_mpz_t())) continue;
        Integer step = theta / g;
        Integer c0;
        if (step == 1) {
            c0 = 1;
        } else {
            Integer inv;
            if (mpz_invert(inv.get_mpz_t(), Integer(qmod / g).get_mpz_t(),
                           step.get_mpz_t()) == 0)
                continue;
            mpz_fdiv_r(c0.get_mpz_t(), Integer((etamod / g) * inv).get_mpz_t(),
                       step.get_mpz_t());
            if (c0 == 0) c0 = step;
        }
        // raise c0 until W_Q >= 1, i.e. c Q' >= theta - eta
        Integer c_lo_num = theta - eta;
        while (c0 * conv.q < c_lo_num) c0 += step;
        Integer c_max = Q_cap / conv.q;
        if (c0 > c_max) continue;
        Integer j_max = (c_max - c0) / step;

        auto valid = [&](const Integer& j) {
            Integer c = c0 + j * step;
            auto eval = [&](mpfr_prec_t prec) {
                return expanded_fraction_test(eps, c, conv, eta, theta, params, prec);
            };
            Cert cert = decide(eval, cfg);
            return cert != Cert::False;  // undecided counts as valid (upward safe)
        };
        if (!valid(0)) continue;
        Integer lo = 0, hi = j_max;
        while (lo < hi) {
            Integer mid = lo + (hi - lo + 1) / 2;
            if (valid(mid))
                lo = mid;
            else
                hi = mid - 1;
        }
        Integer c_best = c0 + lo * step;
        Integer WQ = (c_best * conv.q + eta) / theta;
        if (!best || WQ > *best) best = WQ;
    }
    return best;
}

}  // namespace

std::optional<long long> bd_reduce_pair(const Integer& a, const Integer& b, Params params,
                                        long long w_q, const std::vector<Convergent>& convs,
                                        const RunConfig& cfg) {
    RealFn eps = epsilon_fn(params);
    RealFn del = delta_fn(a, b, params);
    Integer wq_int(static_cast<long>(w_q));

    for (const Convergent& conv : convs) {
        if (conv.q < 1) continue;
        // kappa = w_q ||Q epsilon||
        auto kappa_small = [&](mpfr_prec_t prec) -> std::optional<bool> {
            Interval kappa =
                eps(prec).mul_integer(conv.q).dist_to_nearest_int().mul_integer(wq_int);
            auto c = kappa.compare_rational(Rational(1, 4));
            if (!c.has_value()) return std::nullopt;
            return *c < 0;
        };
        Cert small = decide(kappa_small, cfg);
        if (small == Cert::Unknown) throw PrecisionExhausted("bd_reduce_pair: kappa");
        if (small == Cert::False) continue;

        auto delta_ok = [&](mpfr_prec_t prec) -> std::optional<bool> {
            Interval kappa =
                eps(prec).mul_integer(conv.q).dist_to_nearest_int().mul_integer(wq_int);
            Interval dd = del(prec).mul_integer(conv.q).dist_to_nearest_int();
            auto c = Interval::compare(dd, kappa.mul_rational(2));
            if (!c.has_value()) return std::nullopt;
            return *c > 0;
        };
        Cert ok = decide(delta_ok, cfg);
        if (ok == Cert::Unknown) throw PrecisionExhausted("bd_reduce_pair: delta");
        if (ok == Cert::False) continue;

        // w~ = (2/log q) log(2 chi Q / (kappa pi)) + 4; the bound is used
        // inclusively downstream (w's up to and including it get checked
        // directly), so the integer reported is the certified floor
        Integer wt = floor_certified(cfg, [&](mpfr_prec_t prec) {
            Interval kappa =
                eps(prec).mul_integer(conv.q).dist_to_nearest_int().mul_integer(wq_int);
            return Interval::log(Interval::exact_integer(18 * conv.q, prec) *
                                 (kappa * Interval::pi(prec)).recip())
                       .mul_rational(2) *
                       Interval::log_rational(Rational(params.q), prec).recip() +
                   Interval::exact_long(4, prec);
        });
        return wt.get_si();
    }
    return std::nullopt;
}

long long dependent_reduce(const Integer& a, const Integer& b, const Integer& eta,
                           const Integer& theta, Params params, long long w_q,
                           const std::vector<Convergent>& convs, const RunConfig& cfg) {
    (void)a;
    (void)b;
    if (theta <= 0) throw OutOfRange("dependent_reduce: theta must be positive");

    // W: least positive integer with (2 chi theta/pi) q^(2-W/2) <= 1/(2(W theta - eta))
    Integer W = 1;
    {
        Integer floor_ratio;
        mpz_fdiv_q(floor_ratio.get_mpz_t(), eta.get_mpz_t(), theta.get_mpz_t());
        if (floor_ratio + 1 > W) W = floor_ratio + 1;
    }
    for (long guard = 0;; ++guard) {
        if (guard > 1000000) throw Error("dependent_reduce: W search did not terminate");
        auto eval = [&](mpfr_prec_t prec) -> std::optional<bool> {
            Interval lhs = Interval::log_rational(Rational(18 * theta), prec) -
                           Interval::log(Interval::pi(prec)) +
                           Interval::log_rational(Rational(params.q), prec)
                               .mul_rational(Rational(4 - W, 2));
            Interval rhs = -Interval::log_rational(Rational(2 * (W * theta - eta)), prec);
            auto c = Interval::compare(lhs, rhs);
            if (!c.has_value()) return std::nullopt;
            return *c < 0;  // strictly below certainly implies <=
        };
        if (decide(eval, cfg) == Cert::True) break;
        W += 1;
    }

    RealFn eps = epsilon_fn(params);
    auto WQ = largest_WQ(eps, convs, eta, theta, params, w_q, cfg);
    Integer result = W;
    if (WQ && *WQ + 1 > result) result = *WQ + 1;
    return result.get_si();
}

long long axis_special_reduce(const Integer& a, const Integer& b, Params params,
                              long long w_q, const std::vector<Convergent>& convs,
                              const RunConfig& cfg) {
    (void)a;
    (void)b;
    RealFn eps = epsilon_fn(params);
    auto WQ = largest_WQ(eps, convs, 0, 1, params, w_q, cfg);
    Integer result = 25;
    if (WQ && *WQ + 1 > result) result = *WQ + 1;
    return result.get_si();
}

std::vector<std::pair<Integer, Integer>> normalized_pairs(Params params) {
    std::vector<std::pair<Integer, Integer>> out;
    out.emplace_back(1, 0);
    long q = params.q;
    Integer bound;  // norm < 16 q^4, i.e. (2a+pb)^2 + (4q-1) b^2 < 64 q^4
    {
        Integer q4;
        mpz_ui_pow_ui(q4.get_mpz_t(), static_cast<unsigned long>(q), 4);
        bound = 64 * q4;
    }
    Integer b_max;
    mpz_sqrt(b_max.get_mpz_t(), Integer(bound / (4 * q - 1)).get_mpz_t());
    for (Integer b = 1; b <= b_max; ++b) {
        Integer rem = bound - (4 * q - 1) * b * b;
        if (rem <= 0) continue;
        Integer m;
        mpz_sqrt(m.get_mpz_t(), rem.get_mpz_t());
        for (Integer t = -m; t <= m; ++t) {
            if (mpz_odd_p(t.get_mpz_t()) != mpz_odd_p(b.get_mpz_t())) continue;
            Integer a = (t - params.p * b) / 2;
            ZTau z(a, b, params);
            Integer n = norm(z);
            if (4 * n >= bound) continue;  // strict norm < 16 q^4
            Integer g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            if (g != 1) continue;
            out.emplace_back(a, b);
        }
    }
    return out;
}

BoundReport reduced_bound(Params params, const RunConfig& cfg) {
    BoundReport report{params};
    report.w_matveev = matveev_w_bound(params.q, cfg);

    auto pairs = normalized_pairs(params);

    // classify first; the largest dependent theta fixes the convergent range
    std::vector<PairClass> classes;
    classes.reserve(pairs.size());
    Integer theta_max = 1;
    for (auto& [a, b] : pairs) {
        PairClass cls = classify_pair(a, b, params, cfg);
        if (cls.tag == PairClass::Tag::Dependent && cls.theta > theta_max)
            theta_max = cls.theta;
        classes.push_back(std::move(cls));
    }

    Integer eta_abs_max = eta_cap(theta_max, params) + 1;
    Integer q_limit =
        Integer(static_cast<long>(report.w_matveev)) * theta_max + eta_abs_max + 16;
    if (q_limit > cfg.convergent_denominator_cap) q_limit = cfg.convergent_denominator_cap;
    auto convs = convergents(epsilon_fn(params), q_limit, cfg);

    report.all_resolved = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [a, b] = pairs[i];
        const PairClass& cls = classes[i];
        PairResult res{a, b, cls, std::nullopt};
        try {
            switch (cls.tag) {
                case PairClass::Tag::AxisSpecial:
                    res.w_pair =
                        axis_special_reduce(a, b, params, report.w_matveev, convs, cfg);
                    break;
                case PairClass::Tag::Dependent:
                    res.w_pair = dependent_reduce(a, b, cls.eta, cls.theta, params,
                                                  report.w_matveev, convs, cfg);
                    break;
                case PairClass::Tag::Independent:
                    res.w_pair = bd_reduce_pair(a, b, params, report.w_matveev, convs, cfg);
                    break;
            }
        } catch (const PrecisionExhausted&) {
            res.w_pair = std::nullopt;
        }
        if (!res.w_pair.has_value()) report.all_resolved = false;
        report.pairs.push_back(std::move(res));
    }

    long long w_red = 0;
    for (const PairResult& r : report.pairs)
        if (r.w_pair && *r.w_pair > w_red) w_red = *r.w_pair;
    report.w_reduced = w_red;
    return report;
}

}  // namespace wnafcert
