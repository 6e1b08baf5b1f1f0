#pragma once

// Test-only reference routes. None of these call into the search or
// construction code they are used to check.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gtm/core.hpp"

namespace gtm::oracle {

/// Prefix of omega_q of length q^k built by iterating the substitution
/// a -> a (a+1) ... (a+q-1) mod q from "0".
inline std::vector<Symbol> morphic_prefix(std::uint32_t q, unsigned k) {
  std::vector<Symbol> w{0};
  for (unsigned step = 0; step < k; ++step) {
    std::vector<Symbol> next;
    next.reserve(w.size() * q);
    for (Symbol a : w) {
      for (Symbol j = 0; j < q; ++j) next.push_back((a + j) % q);
    }
    w = std::move(next);
  }
  return w;
}

/// Digit sum via decimal-free textual conversion: repeatedly subtract powers.
inline Symbol digit_sum_by_powers(std::uint64_t x, std::uint32_t q) {
  std::uint64_t p = 1;
  while (p <= x / q) p *= q;
  std::uint64_t sum = 0;
  for (; p > 0; p /= q) {
    while (x >= p) {
      x -= p;
      ++sum;
    }
  }
  return static_cast<Symbol>(sum % q);
}

/// First c <= limit with the word at (c, d), using a materialized prefix.
inline std::optional<std::uint64_t> scan_prefix(const std::vector<Symbol>& prefix, const Word& u, std::uint64_t d) {
  const std::uint64_t span = d * (u.size() - 1);
  for (std::uint64_t c = 0; c + span < prefix.size(); ++c) {
    bool ok = true;
    for (std::size_t k = 0; k < u.size() && ok; ++k) ok = prefix[c + k * d] == u[k];
    if (ok) return c;
  }
  return std::nullopt;
}

/// Distinct length-m words read with difference d inside a long prefix.
inline std::set<Word> factors_with_difference(const std::vector<Symbol>& prefix, std::size_t m, std::uint64_t d) {
  std::set<Word> out;
  const std::uint64_t span = d * (m - 1);
  for (std::uint64_t c = 0; c + span < prefix.size(); ++c) {
    Word w(m);
    for (std::size_t k = 0; k < m; ++k) w[k] = prefix[c + k * d];
    out.insert(std::move(w));
  }
  return out;
}

/// Least z with s(z) = a and s(z+1) - s(z) = delta (mod q), by scanning.
inline std::optional<std::uint64_t> min_z_by_scan(Symbol a, Symbol delta, std::uint32_t q, std::uint64_t limit) {
  for (std::uint64_t z = 0; z < limit; ++z) {
    const Symbol s0 = digit_sum_by_powers(z, q), s1 = digit_sum_by_powers(z + 1, q);
    if (s0 == a && (s1 + q - s0) % q == delta) return z;
  }
  return std::nullopt;
}

inline std::string to_string(const Word& w) {
  std::string s;
  for (Symbol x : w) s += std::to_string(x);
  return s;
}

}  // namespace gtm::oracle
