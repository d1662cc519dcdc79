#include "qfactor/coeff.hpp"

#include <cctype>
#include <limits>

#include "qfactor/errors.hpp"

namespace qfactor {

std::string coeff_to_string(const Coeff& c) { return c.str(); }

Coeff coeff_from_string(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  if (i == text.size()) throw ParseError("not an integer: '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) {
      throw ParseError("not an integer: '" + std::string(text) + "'");
    }
  }
  try {
    return Coeff(std::string(text));
  } catch (const std::exception&) {
    throw ParseError("integer out of range: '" + std::string(text) + "'");
  }
}

bool fits_int64(const Coeff& c) {
  static const Coeff lo(std::numeric_limits<long long>::min());
  static const Coeff hi(std::numeric_limits<long long>::max());
  return c >= lo && c <= hi;
}

}  // namespace qfactor
