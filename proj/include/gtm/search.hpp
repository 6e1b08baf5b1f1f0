#pragma once

// Exact decision procedures over all start positions: arithmetic-factor
// occurrence, maximal homogeneous runs, minimal differences and arithmetic
// indices. Also the prefix-scan oracle used to cross-check them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "gtm/constructive.hpp"
#include "gtm/core.hpp"
#include "gtm/parallel.hpp"

namespace gtm {

struct RunReport {
  Index d = 1;
  std::size_t length = 1;
  Index witness_c = 0;

  bool operator==(const RunReport&) const = default;
};

struct IndexReport {
  Word u;
  Index d_min = 1;
  Occurrence occurrence;
  unsigned index = 1;  // |S_q(d_min)|
};

struct MaxIndexRow {
  unsigned n = 1;
  unsigned I = 1;
  std::vector<Word> extremal_words;  // lexicographic
  std::vector<IndexReport> reports;  // one per word of length n, lexicographic
};

namespace detail {

/// Least z >= 0 with s_q(z) = a.
inline Index min_z_with_sum(Symbol a) {
  // A single digit a < q has digit sum a.
  return a;
}

/// Least z >= 0 with s_q(z) = a and s_q(z+1) - s_q(z) = delta (mod q).
///
/// s_q(z+1) - s_q(z) = 1 - j(q-1) = 1 + j (mod q), j the number of trailing
/// (q-1) digits of z. The minimum uses exactly j = delta - 1 (mod q) trailing
/// digits: z = P q^j + (q^j - 1) with P the least value whose last digit is
/// not q-1 and whose digit sum is a + j (mod q).
inline Index min_z_with_jump(Symbol a, Symbol delta, PrimeBase base) {
  const Index q = base.value();
  const Index j = (delta + q - 1) % q;
  const Index e = (a + j) % q;
  const Index p = e == 0 ? 0 : (e <= q - 2 ? e : 2 * q - 2);
  const Index qj = ipow(q, static_cast<unsigned>(j));
  return checked_add(checked_mul(p, qj), qj - 1);
}

}  // namespace detail

/// Complete decision: does u occur with difference d at some c >= 0?
/// Returns the least such c.
///
/// Fix t with Q = q^t >= |u| d and write c = zQ + r, r < Q. By
/// w_{zQ + s} = s_q(z) + w_s, the slice at c depends only on r, s_q(z) and,
/// when r + (|u|-1)d crosses Q, on s_q(z+1). Every (s_q(z), s_q(z+1)) pair is
/// realisable, so enumerating r in [0, Q) covers all c. The least z for each
/// pattern is closed-form, which gives the least c.
inline std::optional<Occurrence> occurs_with_difference(const GtmSequence& seq, const Word& u, Index d) {
  if (u.empty()) throw InvalidInput("occurs_with_difference: empty word");
  if (d == 0) throw InvalidInput("occurs_with_difference: difference must be positive");
  const PrimeBase base = seq.base();
  validate_word(u, base);
  const Symbol q = base.value();
  const std::size_t m = u.size();
  const Index span = checked_mul(d, m - 1);
  const Index need = checked_mul(d, m);
  Index Q = 1;
  while (Q < need) Q = checked_mul(Q, q);

  std::optional<Index> best;
  auto offer = [&](Index z, Index r) {
    const Index c = checked_add(checked_mul(z, Q), r);
    if (!best || c < *best) best = c;
  };

  for (Index r = 0; r < Q; ++r) {
    const Symbol a = (u[0] + q - seq.symbol_at(r)) % q;
    if (r + span < Q) {
      bool ok = true;
      for (std::size_t k = 1; k < m && ok; ++k) ok = (seq.symbol_at(r + k * d) + a) % q == u[k];
      if (!ok) continue;
      const Index z = detail::min_z_with_sum(a);
      if (z == 0) return Occurrence{r, d};
      offer(z, r);
    } else {
      const std::size_t k0 = static_cast<std::size_t>((Q - r + d - 1) / d);
      bool ok = true;
      for (std::size_t k = 1; k < k0 && ok; ++k) ok = (seq.symbol_at(r + k * d) + a) % q == u[k];
      if (!ok) continue;
      const Symbol b = (u[k0] + q - seq.symbol_at(r + k0 * d - Q)) % q;
      for (std::size_t k = k0 + 1; k < m && ok; ++k) ok = (seq.symbol_at(r + k * d - Q) + b) % q == u[k];
      if (!ok) continue;
      const Symbol delta = (b + q - a) % q;
      const Index z = detail::min_z_with_jump(a, delta, base);
      if (z == 0) return Occurrence{r, d};
      offer(z, r);
    }
  }
  if (!best) return std::nullopt;
  return Occurrence{*best, d};
}

/// Brute-force scan of c = 0..scan_limit. Sound, not complete.
inline std::optional<Occurrence> occurs_prefix_oracle(const GtmSequence& seq, const Word& u, Index d,
                                                      Index scan_limit) {
  if (u.empty()) throw InvalidInput("occurs_prefix_oracle: empty word");
  if (d == 0) throw InvalidInput("occurs_prefix_oracle: difference must be positive");
  const Symbol q = seq.q();
  for (Index c = 0; c <= scan_limit; ++c) {
    std::size_t k = 0;
    while (k < u.size() && seq.symbol_at(c + k * d) % q == u[k]) ++k;
    if (k == u.size()) return Occurrence{c, d};
  }
  return std::nullopt;
}

/// Exact L(d): the longest constant progression with difference d anywhere in
/// the word. Constant runs are closed under adding a symbol, so deciding 0^L
/// is enough; L is found by doubling then bisection.
inline RunReport max_run_length(const GtmSequence& seq, Index d) {
  if (d == 0) throw InvalidInput("max_run_length: difference must be positive");
  auto zeros = [&](std::size_t len) { return occurs_with_difference(seq, Word(len, 0), d); };

  std::size_t good = 1;
  Occurrence witness = *zeros(1);
  std::size_t bad = 2;
  while (true) {
    if (bad > (std::size_t{1} << 24)) throw InternalInconsistency("max_run_length: run length did not terminate");
    auto occ = zeros(bad);
    if (!occ) break;
    good = bad;
    witness = *occ;
    bad *= 2;
  }
  while (bad - good > 1) {
    const std::size_t mid = good + (bad - good) / 2;
    if (auto occ = zeros(mid)) {
      good = mid;
      witness = *occ;
    } else {
      bad = mid;
    }
  }
  return {d, good, witness.c};
}

/// Least d whose arithmetic factors include u, searching d = 1, 2, ... and
/// skipping multiples of q. Returns nullopt if nothing is found up to `cap`.
inline std::optional<IndexReport> find_min_difference(const GtmSequence& seq, const Word& u, Index cap) {
  if (u.empty()) throw InvalidInput("min_difference: empty word");
  const Index q = seq.q();
  for (Index d = 1; d <= cap; ++d) {
    if (d % q == 0) continue;
    if (auto occ = occurs_with_difference(seq, u, d)) {
      return IndexReport{u, d, *occ, expansion_length(d, seq.base())};
    }
    if (d == cap) break;
  }
  return std::nullopt;
}

/// The difference supplied by the basis embedding; every word occurs with it,
/// so the d_min search never has to look further.
inline Index constructive_cap(const GtmSequence& seq, const Word& u) {
  const EmbeddingResult e = construct_embedding(seq, u);
  if (e.d_u > Natural(std::numeric_limits<Index>::max())) return std::numeric_limits<Index>::max();
  return e.d_u.convert_to<Index>();
}

inline IndexReport min_difference(const GtmSequence& seq, const Word& u) {
  if (u.empty()) throw InvalidInput("min_difference: empty word");
  validate_word(u, seq.base());
  const Index cap = constructive_cap(seq, u);
  if (auto report = find_min_difference(seq, u, cap)) return *report;
  throw InternalInconsistency("min_difference: word " + format_word(u, seq.base()) +
                              " has no occurrence up to the constructive difference");
}

/// All q^n words of length n in lexicographic order.
inline std::vector<Word> all_words(PrimeBase q, std::size_t n) {
  const Index count = ipow(q.value(), static_cast<unsigned>(n));
  std::vector<Word> words;
  words.reserve(count);
  Word w(n, 0);
  for (Index i = 0; i < count; ++i) {
    words.push_back(w);
    for (std::size_t k = n; k-- > 0;) {
      if (++w[k] < q.value()) break;
      w[k] = 0;
    }
  }
  return words;
}

/// I(n) with the full set of words attaining it. `lookup` may serve cached
/// reports; it is called from worker threads.
template <typename Lookup>
MaxIndexRow max_index_for_length(const GtmSequence& seq, unsigned n, unsigned workers, Lookup&& lookup) {
  if (n == 0) throw InvalidInput("max_index_for_length: n must be positive");
  const std::vector<Word> words = all_words(seq.base(), n);
  std::vector<IndexReport> reports(words.size());
  parallel_for(words.size(), workers, [&](std::size_t i) { reports[i] = lookup(words[i]); });

  MaxIndexRow row;
  row.n = n;
  row.I = 0;
  for (const auto& r : reports) row.I = std::max(row.I, r.index);
  for (const auto& r : reports) {
    if (r.index == row.I) row.extremal_words.push_back(r.u);
  }
  row.reports = std::move(reports);
  return row;
}

inline MaxIndexRow max_index_for_length(const GtmSequence& seq, unsigned n, unsigned workers = 1) {
  return max_index_for_length(seq, n, workers, [&](const Word& u) { return min_difference(seq, u); });
}

/// Number of length-n words that occur as arithmetic factors.
inline Index arithmetical_complexity(const GtmSequence& seq, unsigned n, unsigned workers = 1) {
  if (n == 0) throw InvalidInput("arithmetical_complexity: n must be positive");
  const std::vector<Word> words = all_words(seq.base(), n);
  std::vector<char> found(words.size(), 0);
  parallel_for(words.size(), workers, [&](std::size_t i) {
    found[i] = find_min_difference(seq, words[i], constructive_cap(seq, words[i])).has_value();
  });
  return static_cast<Index>(std::count(found.begin(), found.end(), 1));
}

/// Distinct length-m factors in a prefix of the given length.
inline Index count_factors_in_prefix(const GtmSequence& seq, std::size_t m, std::size_t prefix_len) {
  if (prefix_len < m) return 0;
  std::string text(prefix_len, '\0');
  for (std::size_t i = 0; i < prefix_len; ++i) text[i] = static_cast<char>(seq.symbol_at(i));
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i + m <= prefix_len; ++i) seen.insert(std::string_view(text).substr(i, m));
  return seen.size();
}

/// p(m), the number of distinct length-m factors. The prefix doubles from
/// q*m until the count is unchanged across two consecutive doublings.
inline Index factor_complexity(const GtmSequence& seq, std::size_t m) {
  if (m == 0) throw InvalidInput("factor_complexity: m must be positive");
  std::size_t len = seq.q() * m;
  Index prev = count_factors_in_prefix(seq, m, len);
  int stable = 0;
  while (stable < 2) {
    len *= 2;
    const Index cur = count_factors_in_prefix(seq, m, len);
    stable = cur == prev ? stable + 1 : 0;
    prev = cur;
  }
  return prev;
}

}  // namespace gtm
