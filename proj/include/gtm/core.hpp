#pragma once

// Base-q digit arithmetic and lazy evaluation of the generalized Thue-Morse
// word w_i = (digit sum of i in base q) mod q, q prime.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gtm/error.hpp"

namespace gtm {

/// Arbitrary-precision non-negative integer, used wherever indices can
/// outgrow 64 bits (constructed initial numbers and differences).
using Natural = boost::multiprecision::cpp_int;

/// Fixed-width index used by the searches.
using Index = std::uint64_t;

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

/// Alphabet size q. Construction rejects anything that is not prime.
class PrimeBase {
 public:
  explicit PrimeBase(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) {
      throw InvalidInput("base must be prime, got " + std::to_string(q));
    }
  }

  std::uint32_t value() const noexcept { return q_; }
  operator std::uint32_t() const noexcept { return q_; }

  bool operator==(const PrimeBase&) const = default;

 private:
  std::uint32_t q_;
};

// Overflow-checked 64-bit helpers. Searches run on machine words and bail
// out loudly rather than wrapping.

inline Index checked_mul(Index a, Index b) {
  Index r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("index overflow in multiplication");
  return r;
}

inline Index checked_add(Index a, Index b) {
  Index r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("index overflow in addition");
  return r;
}

inline Index ipow(Index base, unsigned exp) {
  Index r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline Natural npow(std::uint32_t base, unsigned exp) {
  return boost::multiprecision::pow(Natural(base), exp);
}

/// Base-q expansion, most significant digit first. Zero is the single digit "0".
struct DigitString {
  std::vector<Symbol> digits;

  std::size_t size() const noexcept { return digits.size(); }
  bool operator==(const DigitString&) const = default;
};

inline DigitString base_q_expansion(Index x, PrimeBase base) {
  DigitString s;
  const Index q = base.value();
  do {
    s.digits.push_back(static_cast<Symbol>(x % q));
    x /= q;
  } while (x != 0);
  std::reverse(s.digits.begin(), s.digits.end());
  return s;
}

inline DigitString base_q_expansion(const Natural& x, PrimeBase base) {
  if (x < 0) throw InvalidInput("base_q_expansion: negative value");
  DigitString s;
  Natural rest = x;
  const Natural q = base.value();
  do {
    Natural digit;
    boost::multiprecision::divide_qr(rest, q, rest, digit);
    s.digits.push_back(digit.convert_to<Symbol>());
  } while (rest != 0);
  std::reverse(s.digits.begin(), s.digits.end());
  return s;
}

inline Natural from_digits(const DigitString& d, PrimeBase base) {
  if (d.digits.empty()) throw InvalidInput("from_digits: empty digit string");
  Natural x = 0;
  for (Symbol digit : d.digits) {
    if (digit >= base.value()) {
      throw InvalidInput("from_digits: digit " + std::to_string(digit) + " out of range for base " +
                         std::to_string(base.value()));
    }
    x = x * base.value() + digit;
  }
  return x;
}

/// |S_q(x)|, the number of base-q digits of x (1 for x = 0).
inline unsigned expansion_length(Index x, PrimeBase base) {
  unsigned len = 1;
  while (x >= base.value()) {
    x /= base.value();
    ++len;
  }
  return len;
}

inline unsigned expansion_length(const Natural& x, PrimeBase base) {
  return static_cast<unsigned>(base_q_expansion(x, base).size());
}

/// s_q(x): digit sum of x in base q, reduced mod q.
inline Symbol digit_sum(Index x, PrimeBase base) {
  const Index q = base.value();
  if (q == 2) return static_cast<Symbol>(std::popcount(x) & 1);
  Index sum = 0;
  while (x != 0) {
    sum += x % q;
    x /= q;
  }
  return static_cast<Symbol>(sum % q);
}

inline Symbol digit_sum(const Natural& x, PrimeBase base) {
  Index sum = 0;
  for (Symbol d : base_q_expansion(x, base).digits) sum += d;
  return static_cast<Symbol>(sum % base.value());
}

/// Witness that a word occurs as an arithmetic factor: initial number c,
/// difference d.
struct Occurrence {
  Index c = 0;
  Index d = 1;

  bool operator==(const Occurrence&) const = default;
};

// ---------------------------------------------------------------------------
// Words

inline void validate_word(const Word& u, PrimeBase base) {
  for (Symbol s : u) {
    if (s >= base.value()) {
      throw InvalidInput("symbol " + std::to_string(s) + " out of range for base " +
                         std::to_string(base.value()));
    }
  }
}

/// Symbol-wise (u + a) mod q.
inline Word shift_word(const Word& u, Symbol a, PrimeBase base) {
  Word out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (u[i] + a) % base.value();
  return out;
}

/// Contiguous digit string for q <= 10, comma-separated otherwise.
inline std::string format_word(const Word& u, PrimeBase base) {
  std::string out;
  const bool compact = base.value() <= 10;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (compact) {
      out.push_back(static_cast<char>('0' + u[i]));
    } else {
      if (i) out.push_back(',');
      out += std::to_string(u[i]);
    }
  }
  return out;
}

/// Parses a contiguous digit string ("0121"). Only meaningful for q <= 10.
inline Word parse_word(std::string_view text, PrimeBase base) {
  if (base.value() > 10) throw InvalidInput("contiguous words need q <= 10; use a comma-separated word");
  Word u;
  u.reserve(text.size());
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw InvalidInput(std::string("not a digit: '") + ch + "'");
    u.push_back(static_cast<Symbol>(ch - '0'));
  }
  validate_word(u, base);
  return u;
}

/// Parses comma-separated symbols ("0,12,3").
inline Word parse_word_csv(std::string_view text, PrimeBase base) {
  Word u;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view token = text.substr(pos, comma - pos);
    if (token.empty()) throw InvalidInput("empty symbol in comma-separated word");
    Symbol value = 0;
    for (char ch : token) {
      if (ch < '0' || ch > '9') throw InvalidInput(std::string("not a digit: '") + ch + "'");
      value = value * 10 + static_cast<Symbol>(ch - '0');
      if (value > 1'000'000) throw InvalidInput("symbol too large");
    }
    u.push_back(value);
    pos = comma + 1;
  }
  validate_word(u, base);
  return u;
}

// ---------------------------------------------------------------------------
// The word omega_q

/// omega_q evaluated on demand. Nothing is materialized except a small
/// digit-sum table for one chunk of q^k values (q^k <= 2^16), shared between
/// copies. q = 2 uses popcount directly.
class GtmSequence {
 public:
  explicit GtmSequence(PrimeBase base) : base_(base) {
    const std::uint32_t q = base.value();
    if (q == 2 || q > 256) return;
    Index chunk = q;
    while (chunk * q <= (Index{1} << 16)) chunk *= q;
    chunk_ = chunk;
    auto table = std::make_shared<std::vector<std::uint8_t>>(chunk);
    for (Index i = 0; i < chunk; ++i) {
      Index x = i, sum = 0;
      while (x != 0) {
        sum += x % q;
        x /= q;
      }
      (*table)[i] = static_cast<std::uint8_t>(sum % q);
    }
    table_ = std::move(table);
  }

  PrimeBase base() const noexcept { return base_; }
  std::uint32_t q() const noexcept { return base_.value(); }

  Symbol symbol_at(Index i) const {
    if (!table_) return digit_sum(i, base_);
    const auto& table = *table_;
    unsigned sum = 0;
    while (i != 0) {
      sum += table[i % chunk_];
      i /= chunk_;
    }
    return sum % base_.value();
  }

  Symbol symbol_at(const Natural& i) const { return digit_sum(i, base_); }

  Symbol operator[](Index i) const { return symbol_at(i); }

  Word slice(Index c, Index d, std::size_t m) const {
    if (d == 0) throw InvalidInput("arithmetic_slice: difference must be positive");
    if (m > 0) checked_add(c, checked_mul(d, m - 1));
    Word out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = symbol_at(c + d * k);
    return out;
  }

  Word slice(const Natural& c, const Natural& d, std::size_t m) const {
    if (d <= 0) throw InvalidInput("arithmetic_slice: difference must be positive");
    if (c < 0) throw InvalidInput("arithmetic_slice: negative start");
    Word out(m);
    Natural pos = c;
    for (std::size_t k = 0; k < m; ++k) {
      out[k] = symbol_at(pos);
      pos += d;
    }
    return out;
  }

  Word prefix(std::size_t len) const { return len == 0 ? Word{} : slice(Index{0}, Index{1}, len); }

  /// Largest k >= 1 with w_c = w_{c+d} = ... = w_{c+(k-1)d}.
  std::size_t run_length_at(Index c, Index d) const {
    if (d == 0) throw InvalidInput("run_length_at: difference must be positive");
    const Symbol first = symbol_at(c);
    std::size_t k = 1;
    Index pos = c;
    while (true) {
      pos = checked_add(pos, d);
      if (symbol_at(pos) != first) return k;
      ++k;
    }
  }

 private:
  PrimeBase base_;
  Index chunk_ = 0;
  std::shared_ptr<const std::vector<std::uint8_t>> table_;
};

inline Symbol symbol_at(const GtmSequence& seq, Index i) { return seq.symbol_at(i); }

inline Word arithmetic_slice(const GtmSequence& seq, Index c, Index d, std::size_t m) {
  if (m == 0) throw InvalidInput("arithmetic_slice: length must be positive");
  return seq.slice(c, d, m);
}

inline Word arithmetic_slice(const GtmSequence& seq, const Natural& c, const Natural& d, std::size_t m) {
  if (m == 0) throw InvalidInput("arithmetic_slice: length must be positive");
  return seq.slice(c, d, m);
}

inline std::size_t run_length_at(const GtmSequence& seq, Index c, Index d) { return seq.run_length_at(c, d); }

}  // namespace gtm
