#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gtm/search.hpp"
#include "oracles.hpp"

namespace gtm {
namespace {

Word digits(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(static_cast<Symbol>(c - '0'));
  return w;
}

void expect_witness(const GtmSequence& seq, const Word& u, const std::optional<Occurrence>& occ) {
  ASSERT_TRUE(occ.has_value());
  EXPECT_EQ(seq.slice(occ->c, occ->d, u.size()), u);
}

TEST(Occurs, Examples) {
  const GtmSequence seq{PrimeBase(2)};
  EXPECT_EQ(occurs_with_difference(seq, digits("01"), 1), (Occurrence{0, 1}));
  EXPECT_FALSE(occurs_with_difference(seq, digits("000"), 1).has_value());
  // w_0 = w_3 = w_6 = 0, so the least start is 0; (6, 3) is a later occurrence.
  const auto occ = occurs_with_difference(seq, digits("000"), 3);
  EXPECT_EQ(occ, (Occurrence{0, 3}));
  EXPECT_EQ(seq.slice(6, 3, 3), digits("000"));
  EXPECT_THROW(occurs_with_difference(seq, digits("01"), 0), InvalidInput);
  EXPECT_THROW(occurs_with_difference(seq, Word{}, 1), InvalidInput);
}

TEST(Occurs, PrefixOracleExamples) {
  const GtmSequence bin{PrimeBase(2)}, ter{PrimeBase(3)};
  EXPECT_EQ(occurs_prefix_oracle(bin, digits("01"), 1, 10), (Occurrence{0, 1}));
  EXPECT_EQ(occurs_prefix_oracle(ter, digits("012"), 1, 10), (Occurrence{0, 1}));
  EXPECT_EQ(occurs_prefix_oracle(bin, digits("000"), 3, 100), (Occurrence{0, 3}));
  EXPECT_FALSE(occurs_prefix_oracle(bin, digits("000"), 1, 100000).has_value());
}

TEST(Occurs, ReturnsLeastStart) {
  // Compare with a first-hit scan over a long materialized prefix, for words
  // that do appear early.
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    const auto prefix = oracle::morphic_prefix(q, q == 2 ? 18 : 12);
    for (std::size_t m = 1; m <= 4; ++m) {
      for (const Word& u : all_words(seq.base(), m)) {
        for (Index d = 1; d <= 12; ++d) {
          const auto exact = occurs_with_difference(seq, u, d);
          const auto scanned = oracle::scan_prefix(prefix, u, d);
          if (scanned) {
            ASSERT_TRUE(exact.has_value());
            EXPECT_EQ(exact->c, *scanned) << oracle::to_string(u) << " d=" << d;
          } else if (exact) {
            EXPECT_GE(exact->c + d * (m - 1), prefix.size());
          }
        }
      }
    }
  }
}

TEST(Occurs, AgreesWithPrefixScanOnSmallInstances) {
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (std::size_t m = 1; m <= 4; ++m) {
      for (const Word& u : all_words(seq.base(), m)) {
        for (Index d = 1; d <= 10; ++d) {
          const auto exact = occurs_with_difference(seq, u, d);
          const auto scanned = occurs_prefix_oracle(seq, u, d, 200000);
          ASSERT_EQ(exact.has_value(), scanned.has_value()) << oracle::to_string(u) << " d=" << d;
          if (exact) expect_witness(seq, u, exact);
        }
      }
    }
  }
}

TEST(Occurs, FarOccurrencesAreFound) {
  // Crossing patterns whose least block index z is large: the witness lies
  // beyond q^t and is still a valid occurrence.
  std::mt19937_64 rng(41);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t m = 2 + rng() % 6;
      const Index d = 1 + rng() % 40;
      Word u(m);
      for (auto& s : u) s = rng() % q;
      if (auto occ = occurs_with_difference(seq, u, d)) expect_witness(seq, u, occ);
    }
  }
}

TEST(Occurs, JumpTableMatchesScan) {
  for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
    const PrimeBase base(q);
    for (Symbol a = 0; a < q; ++a) {
      EXPECT_EQ(digit_sum(detail::min_z_with_sum(a), base), a);
      for (Symbol delta = 0; delta < q; ++delta) {
        const auto scanned = oracle::min_z_by_scan(a, delta, q, ipow(q, q + 2));
        ASSERT_TRUE(scanned.has_value());
        EXPECT_EQ(detail::min_z_with_jump(a, delta, base), *scanned) << "q=" << q << " a=" << a << " delta=" << delta;
      }
    }
  }
}

TEST(Occurs, JumpCoverage) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const PrimeBase base(q);
    std::set<Symbol> jumps;
    const Index limit = ipow(q, q + 1);
    for (Index z = 0; z < limit; ++z) jumps.insert((digit_sum(z + 1, base) + q - digit_sum(z, base)) % q);
    EXPECT_EQ(jumps.size(), q);
  }
}

TEST(Occurs, ShiftClosure) {
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (std::size_t m = 1; m <= 4; ++m) {
      for (const Word& u : all_words(seq.base(), m)) {
        for (Index d = 1; d <= 12; ++d) {
          const bool base_hit = occurs_with_difference(seq, u, d).has_value();
          for (Symbol a = 1; a < q; ++a) {
            ASSERT_EQ(occurs_with_difference(seq, shift_word(u, a, seq.base()), d).has_value(), base_hit);
          }
        }
      }
    }
  }
}

TEST(Occurs, ResidueClassIdentity) {
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (std::size_t m = 1; m <= (q == 2 ? 5u : 4u); ++m) {
      const auto words = all_words(seq.base(), m);
      for (Index d = 1; d <= 30; ++d) {
        for (const Word& u : words) {
          ASSERT_EQ(occurs_with_difference(seq, u, d).has_value(),
                    occurs_with_difference(seq, u, q * d).has_value())
              << oracle::to_string(u) << " d=" << d;
        }
      }
    }
  }
}

TEST(RunLength, MaxRunExamples) {
  const GtmSequence seq{PrimeBase(2)};
  EXPECT_EQ(max_run_length(seq, 1).length, 2u);
  EXPECT_EQ(max_run_length(seq, 3).length, 8u);
  EXPECT_EQ(max_run_length(seq, 2).length, 2u);
}

TEST(RunLength, ReportIsMaximalAndConstant) {
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (Index d = 1; d <= 40; ++d) {
      const RunReport r = max_run_length(seq, d);
      const Word run = seq.slice(r.witness_c, d, r.length);
      EXPECT_TRUE(std::all_of(run.begin(), run.end(), [&](Symbol s) { return s == run[0]; }));
      EXPECT_NE(seq[r.witness_c + r.length * d], run[0]);
      if (r.witness_c >= d) EXPECT_NE(seq[r.witness_c - d], run[0]);
      // Lower-bound cross-check from a long prefix.
      const auto prefix = oracle::morphic_prefix(q, q == 2 ? 16 : 10);
      std::size_t best = 1;
      for (Index c = 0; c + d < prefix.size(); ++c) {
        std::size_t len = 1;
        while (c + len * d < prefix.size() && prefix[c + len * d] == prefix[c]) ++len;
        best = std::max(best, len);
      }
      EXPECT_GE(r.length, best);
    }
  }
}

TEST(RunLength, ResidueClassKeepsMaximum) {
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (Index d = 1; d <= 30; ++d) EXPECT_EQ(max_run_length(seq, q * d).length, max_run_length(seq, d).length);
  }
}

TEST(RunLength, NeverExceedsClosedForm) {
  for (std::uint32_t q : {2u, 3u}) {
    const PrimeBase base(q);
    const GtmSequence seq(base);
    for (unsigned n = 1; n <= (q == 2 ? 5u : 3u); ++n) {
      const Index limit = ipow(q, n);
      for (Index d = 1; d < limit; ++d) EXPECT_LE(max_run_length(seq, d).length, theorem_max_run(base, n));
      EXPECT_EQ(max_run_length(seq, limit - 1).length, theorem_max_run(base, n));
    }
  }
}

TEST(MinDifference, Examples) {
  const GtmSequence bin{PrimeBase(2)}, ter{PrimeBase(3)};
  IndexReport r = min_difference(bin, digits("0"));
  EXPECT_EQ(r.d_min, 1u);
  EXPECT_EQ(r.index, 1u);
  r = min_difference(bin, digits("000"));
  EXPECT_EQ(r.d_min, 3u);
  EXPECT_EQ(r.occurrence, (Occurrence{0, 3}));
  EXPECT_EQ(r.index, 2u);
  r = min_difference(ter, digits("012"));
  EXPECT_EQ(r.d_min, 1u);
  EXPECT_EQ(r.occurrence.c, 0u);
  EXPECT_EQ(r.index, 1u);
}

TEST(MinDifference, MatchesPrefixScan) {
  // d_min from scanning every d (including multiples of q) over a long prefix.
  const GtmSequence seq{PrimeBase(2)};
  const auto prefix = oracle::morphic_prefix(2, 20);
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const Word& u : all_words(seq.base(), m)) {
      const IndexReport r = min_difference(seq, u);
      Index d_scan = 0;
      for (Index d = 1; d <= r.d_min && !d_scan; ++d) {
        if (oracle::scan_prefix(prefix, u, d)) d_scan = d;
      }
      EXPECT_EQ(d_scan, r.d_min) << oracle::to_string(u);
    }
  }
}

TEST(MinDifference, Invariants) {
  std::mt19937_64 rng(13);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const GtmSequence seq{PrimeBase(q)};
    for (int trial = 0; trial < 40; ++trial) {
      Word u(1 + rng() % 6);
      for (auto& s : u) s = rng() % q;
      const IndexReport r = min_difference(seq, u);
      EXPECT_NE(r.d_min % q, 0u);
      EXPECT_EQ(r.index, base_q_expansion(r.d_min, seq.base()).size());
      EXPECT_EQ(seq.slice(r.occurrence.c, r.d_min, u.size()), u);
      for (Index d = 1; d < r.d_min; ++d) ASSERT_FALSE(occurs_with_difference(seq, u, d).has_value());
    }
  }
}

TEST(MaxIndex, Examples) {
  const GtmSequence seq{PrimeBase(2)};
  MaxIndexRow row = max_index_for_length(seq, 1);
  EXPECT_EQ(row.I, 1u);
  EXPECT_EQ(row.extremal_words, (std::vector<Word>{digits("0"), digits("1")}));
  row = max_index_for_length(seq, 3);
  EXPECT_EQ(row.reports.size(), 8u);
  EXPECT_EQ(row.reports.front().u, digits("000"));
  EXPECT_EQ(row.reports.front().index, 2u);
  EXPECT_GE(row.I, 2u);
  for (const auto& r : row.reports) EXPECT_LE(r.index, row.I);
}

TEST(MaxIndex, WorkerCountDoesNotChangeResult) {
  const GtmSequence seq{PrimeBase(3)};
  const MaxIndexRow a = max_index_for_length(seq, 3, 1);
  const MaxIndexRow b = max_index_for_length(seq, 3, 4);
  EXPECT_EQ(a.I, b.I);
  EXPECT_EQ(a.extremal_words, b.extremal_words);
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    EXPECT_EQ(a.reports[i].d_min, b.reports[i].d_min);
    EXPECT_EQ(a.reports[i].occurrence, b.reports[i].occurrence);
  }
}

TEST(Complexity, Arithmetical) {
  EXPECT_EQ(arithmetical_complexity(GtmSequence{PrimeBase(2)}, 1), 2u);
  EXPECT_EQ(arithmetical_complexity(GtmSequence{PrimeBase(2)}, 6), 64u);
  EXPECT_EQ(arithmetical_complexity(GtmSequence{PrimeBase(3)}, 3), 27u);
}

TEST(Complexity, Factor) {
  const GtmSequence seq{PrimeBase(2)};
  EXPECT_EQ(factor_complexity(seq, 1), 2u);
  EXPECT_EQ(factor_complexity(seq, 2), 4u);
  EXPECT_LE(factor_complexity(seq, 16), 64u);
  // Every factor of length m <= 32 already appears in the first 2^16 symbols.
  for (std::uint32_t q : {2u, 3u}) {
    const GtmSequence s{PrimeBase(q)};
    const auto prefix = oracle::morphic_prefix(q, q == 2 ? 16 : 10);
    for (std::size_t m = 1; m <= 32; ++m) {
      std::set<std::vector<Symbol>> seen;
      for (std::size_t i = 0; i + m <= prefix.size(); ++i) seen.emplace(prefix.begin() + i, prefix.begin() + i + m);
      EXPECT_EQ(factor_complexity(s, m), seen.size()) << "q=" << q << " m=" << m;
    }
  }
}

}  // namespace
}  // namespace gtm
