#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace qfactor {

// Exact signed coefficient type. 128 bits is wide enough for every quantity
// the pipeline produces (objective coefficients grow like N^4 times the
// square of the encoding width; penalty weights add a few more decimal
// digits). The checked backend throws std::overflow_error instead of
// silently wrapping, so an instance that genuinely exceeds the width fails
// loudly rather than corrupting results.
using Coeff = boost::multiprecision::checked_int128_t;

inline Coeff abs_coeff(const Coeff& c) { return c < 0 ? Coeff(-c) : c; }

inline double to_double(const Coeff& c) { return c.template convert_to<double>(); }

std::string coeff_to_string(const Coeff& c);

// Parses an optionally signed decimal integer. Throws ParseError on any
// other input or on values outside the 128-bit range.
Coeff coeff_from_string(std::string_view text);

bool fits_int64(const Coeff& c);

}  // namespace qfactor
