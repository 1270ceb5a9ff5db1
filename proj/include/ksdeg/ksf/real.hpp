#pragma once

// Binary strings and eventually periodic reals.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ksdeg::ksf {

/// A finite binary string, stored as characters '0' and '1'.
using BinaryString = std::string;

inline bool is_binary(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

inline void require_binary(std::string_view s, const char* what) {
  if (!is_binary(s)) throw std::invalid_argument(std::string(what) + " must contain only 0 and 1");
}

/// `a` is an initial segment of `b` (not necessarily proper).
inline bool is_prefix(std::string_view a, std::string_view b) {
  return a.size() <= b.size() && b.substr(0, a.size()) == a;
}

inline bool is_proper_prefix(std::string_view a, std::string_view b) { return a.size() < b.size() && is_prefix(a, b); }

inline bool compatible(std::string_view a, std::string_view b) { return is_prefix(a, b) || is_prefix(b, a); }

/// The infinite sequence prefix . period . period . ...
class Real {
 public:
  Real() : period_("0") {}

  Real(BinaryString prefix, BinaryString period) : prefix_(std::move(prefix)), period_(std::move(period)) {
    require_binary(prefix_, "real prefix");
    require_binary(period_, "real period");
    if (period_.empty()) throw std::invalid_argument("real period must be nonempty");
    normalize();
  }

  /// Parses "prefix:period"; a bare string means period "0".
  static Real parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return {std::string(text), "0"};
    return {std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
  }

  [[nodiscard]] const BinaryString& prefix() const { return prefix_; }
  [[nodiscard]] const BinaryString& period() const { return period_; }

  [[nodiscard]] char bit(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n];
    return period_[(n - prefix_.size()) % period_.size()];
  }

  [[nodiscard]] BinaryString initial_segment(std::size_t length) const {
    BinaryString s;
    s.reserve(length);
    for (std::size_t n = 0; n < length; ++n) s.push_back(bit(n));
    return s;
  }

  /// sigma is an initial segment of this real.
  [[nodiscard]] bool has_prefix(std::string_view sigma) const {
    for (std::size_t n = 0; n < sigma.size(); ++n) {
      if (sigma[n] != bit(n)) return false;
    }
    return true;
  }

  [[nodiscard]] std::string to_string() const { return prefix_ + ":" + period_; }

  // The representation is normalized, so equal sequences compare equal.
  friend bool operator==(const Real&, const Real&) = default;
  friend auto operator<=>(const Real& a, const Real& b) {
    if (auto c = a.prefix_.size() <=> b.prefix_.size(); c != 0) return c;
    if (auto c = a.prefix_ <=> b.prefix_; c != 0) return c;
    if (auto c = a.period_.size() <=> b.period_.size(); c != 0) return c;
    return a.period_ <=> b.period_;
  }

 private:
  void normalize() {
    // Shortest period: the smallest divisor d of |period| with a d-periodic period.
    const std::size_t p = period_.size();
    for (std::size_t d = 1; d <= p; ++d) {
      if (p % d != 0) continue;
      bool ok = true;
      for (std::size_t i = d; i < p && ok; ++i) ok = period_[i] == period_[i - d];
      if (ok) {
        period_.resize(d);
        break;
      }
    }
    // Shortest prefix: absorb trailing prefix bits into a rotated period.
    while (!prefix_.empty() && prefix_.back() == period_.back()) {
      prefix_.pop_back();
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    }
  }

  BinaryString prefix_;
  BinaryString period_;
};

/// A real extending tau that differs from `avoid`: tau.0^w, or tau.1.0^w
/// when tau.0^w is `avoid` itself.
inline Real real_extending(const BinaryString& tau, const Real* avoid = nullptr) {
  Real r(tau, "0");
  if (avoid && r == *avoid) r = Real(tau + "1", "0");
  return r;
}

}  // namespace ksdeg::ksf
