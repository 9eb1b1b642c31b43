#include "wnafcert/ztau.hpp"

#include <sstream>

namespace wnafcert {

ZTau div_tau(const ZTau& z) {
    if (!divisible_by_tau(z)) throw NotDivisible();
    Integer c_over_q = z.a() / z.params().q;
    return ZTau(c_over_q * z.params().p + z.b(), -c_over_q, z.params());
}

std::optional<long> tau_valuation(const ZTau& z) {
    if (z.is_zero()) return std::nullopt;
    long k = 0;
    ZTau cur = z;
    while (divisible_by_tau(cur)) {
        cur = div_tau(cur);
        ++k;
    }
    return k;
}

ZTau tau_pow(Params params, long w) {
    if (w < 0) throw OutOfRange("tau_pow: negative exponent");
    Integer a = 1, b = 0;
    for (long k = 0; k < w; ++k) {
        Integer next_a = -params.q * b;
        Integer next_b = a + params.p * b;
        a = std::move(next_a);
        b = std::move(next_b);
    }
    return ZTau(a, b, params);
}

std::string ZTau::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ZTau& z) {
    os << z.a();
    if (z.b() >= 0)
        os << "+" << z.b() << "*tau";
    else
        os << z.b() << "*tau";
    return os;
}

}  // namespace wnafcert
