#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "trasdim/errors.hpp"

namespace trasdim {

// Ordinals below w^2, written w*a + n. The (a, n) pair is the canonical form;
// nothing ever normalizes it.
struct Ordinal {
  std::int64_t omega_coeff = 0;
  std::int64_t finite_part = 0;

  friend constexpr auto operator<=>(const Ordinal&, const Ordinal&) = default;
};

enum class Cmp { LT, EQ, GT };

// Lexicographic on (omega_coeff, finite_part); this is the ordinal order.
inline Cmp ord_compare(const Ordinal& x, const Ordinal& y) {
  const auto c = x <=> y;
  if (c < 0) return Cmp::LT;
  if (c > 0) return Cmp::GT;
  return Cmp::EQ;
}

struct OrdinalParts {
  Ordinal limit;        // w * omega_coeff, a limit ordinal or 0
  std::int64_t finite;  // the finite tail
};

inline OrdinalParts ord_decompose(const Ordinal& g) {
  return {Ordinal{g.omega_coeff, 0}, g.finite_part};
}

inline std::string ord_format(const Ordinal& g) {
  return "w*" + std::to_string(g.omega_coeff) + "+" + std::to_string(g.finite_part);
}

// Accepts "w*a+n" and the bare-"n" shorthand for finite ordinals.
inline Ordinal ord_parse(const std::string& s) {
  const auto parse_nonneg = [&](const std::string& t) -> std::int64_t {
    require(!t.empty(), Errc::bad_json, "ordinal: empty numeral in '" + s + "'");
    for (char ch : t)
      require(ch >= '0' && ch <= '9', Errc::bad_json, "ordinal: bad numeral in '" + s + "'");
    return std::stoll(t);
  };
  if (s.rfind("w*", 0) == 0) {
    const auto plus = s.find('+', 2);
    require(plus != std::string::npos, Errc::bad_json, "ordinal: expected 'w*a+n', got '" + s + "'");
    return Ordinal{parse_nonneg(s.substr(2, plus - 2)), parse_nonneg(s.substr(plus + 1))};
  }
  return Ordinal{0, parse_nonneg(s)};
}

}  // namespace trasdim
