#pragma once

// Axioms <x, y, sigma> and their numeric codes.
//
//   strcode(sigma) = value of "1" sigma in binary, minus 1
//   cantor(a, b)   = (a + b)(a + b + 1) / 2 + b
//   code           = cantor(cantor(x, y), strcode(sigma)) + 1
//
// Every positive natural decodes to a triple (x, y, sigma); it is an axiom
// code exactly when y is 0 or 1. Zero is never an axiom code.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ksdeg/ksf/real.hpp"

namespace ksdeg::ksf {

using Code = std::uint64_t;

struct Axiom {
  std::uint64_t x = 0;
  int y = 0;
  BinaryString sigma;

  friend bool operator==(const Axiom&, const Axiom&) = default;
  friend auto operator<=>(const Axiom& a, const Axiom& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    if (auto c = a.y <=> b.y; c != 0) return c;
    if (auto c = a.sigma.size() <=> b.sigma.size(); c != 0) return c;
    return a.sigma <=> b.sigma;
  }
};

inline std::string to_string(const Axiom& a) {
  return "<" + std::to_string(a.x) + "," + std::to_string(a.y) + ",\"" + a.sigma + "\">";
}

class CodecOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

namespace codec {

inline Code checked_add(Code a, Code b) {
  if (a > UINT64_MAX - b) throw CodecOverflow("axiom code overflow");
  return a + b;
}

inline Code cantor(Code a, Code b) {
  const Code s = checked_add(a, b);
  const Code t = checked_add(s, 1);
  // s * t is even; halve the even factor first to keep the product in range.
  Code lo = s, hi = t;
  if (lo % 2 == 0) lo /= 2; else hi /= 2;
  if (lo != 0 && hi > UINT64_MAX / lo) throw CodecOverflow("axiom code overflow");
  return checked_add(lo * hi, b);
}

inline std::pair<Code, Code> uncantor(Code n) {
  // Largest w with w(w+1)/2 <= n, by binary search in 128-bit arithmetic.
  using Wide = unsigned __int128;
  auto tri = [](Wide w) { return w * (w + 1) / 2; };
  Wide lo = 0, hi = Wide{1} << 33;
  while (lo < hi) {
    const Wide mid = lo + (hi - lo + 1) / 2;
    if (tri(mid) <= n) lo = mid; else hi = mid - 1;
  }
  const Code w = static_cast<Code>(lo);
  const Code b = n - static_cast<Code>(tri(lo));
  return {w - b, b};
}

inline Code strcode(const BinaryString& sigma) {
  if (sigma.size() >= 63) throw CodecOverflow("use too long to code");
  Code v = 1;
  for (char c : sigma) v = v * 2 + (c == '1' ? 1 : 0);
  return v - 1;
}

inline BinaryString strdecode(Code n) {
  if (n == UINT64_MAX) throw CodecOverflow("string code out of range");
  Code v = n + 1;
  BinaryString s;
  while (v > 1) {
    s.push_back((v & 1) ? '1' : '0');
    v >>= 1;
  }
  return {s.rbegin(), s.rend()};
}

}  // namespace codec

inline Code encode(const Axiom& a) {
  if (a.y != 0 && a.y != 1) throw std::invalid_argument("axiom output must be 0 or 1");
  require_binary(a.sigma, "axiom use");
  return codec::checked_add(
      codec::cantor(codec::cantor(a.x, static_cast<Code>(a.y)), codec::strcode(a.sigma)), 1);
}

/// Result of decoding a natural: an axiom, or the reason it is not one.
struct Decoded {
  std::optional<Axiom> axiom;
  std::string reason;  // set when axiom is empty

  [[nodiscard]] bool is_axiom() const { return axiom.has_value(); }
};

inline Decoded decode(Code n) {
  if (n == 0) return {std::nullopt, "0 is not an axiom code"};
  const auto [pair, s] = codec::uncantor(n - 1);
  const auto [x, y] = codec::uncantor(pair);
  if (y > 1) return {std::nullopt, "decodes to output " + std::to_string(y)};
  if (s >= (Code{1} << 62)) return {std::nullopt, "use too long"};
  return {Axiom{x, static_cast<int>(y), codec::strdecode(s)}, {}};
}

}  // namespace ksdeg::ksf
