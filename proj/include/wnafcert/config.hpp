#pragma once

#include <mpfr.h>

#include <string>

#include "wnafcert/ztau.hpp"

namespace wnafcert {

/// Knobs shared by the certified-arithmetic pipeline and the CLI.
struct RunConfig {
    mpfr_prec_t precision_start = 256;
    mpfr_prec_t precision_ceiling = 16384;
    /// Hard cap on continued-fraction denominators; enumeration limits derived
    /// from the Matveev bound are clipped against it.
    Integer convergent_denominator_cap = Integer("1000000000000000000000000000000");
    Integer digit_set_cap = 10000000;
    int jobs = 1;
    std::string output_path;  // empty = stdout

    void validate() const {
        if (precision_start < 16 || precision_ceiling < precision_start)
            throw OutOfRange("precision bounds");
        if (convergent_denominator_cap <= 0 || digit_set_cap <= 0)
            throw OutOfRange("caps must be positive");
        if (jobs < 1) throw OutOfRange("jobs must be positive");
    }
};

}  // namespace wnafcert
