#pragma once

// Reproducible experiment reports: run-length grids against the closed form,
// arithmetic-index tables with both bounds, the alternating-word probe, a
// verified on-disk result cache and CSV/JSON export.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gtm/constructive.hpp"
#include "gtm/core.hpp"
#include "gtm/parallel.hpp"
#include "gtm/search.hpp"

namespace gtm {

// ---------------------------------------------------------------------------
// Result cache

struct CacheEntry {
  Index d_min = 1;
  Index c = 0;
};

/// (q, word) -> (d_min, c). Text format, one entry per line:
///   <q>\t<word>\t<d_min>\t<c>\n
/// Every entry is re-verified on load by evaluating the slice at (c, d_min).
class ResultCache {
 public:
  using Key = std::pair<std::uint32_t, std::string>;

  static ResultCache load(const std::filesystem::path& path) {
    ResultCache cache;
    std::ifstream in(path);
    if (!in) {
      if (!std::filesystem::exists(path)) return cache;
      throw std::runtime_error("cannot read cache file " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto fail = [&](const std::string& why) {
        throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": " + why);
      };
      std::vector<std::string> fields;
      std::stringstream ss(line);
      for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
      if (fields.size() != 4) fail("expected 4 tab-separated fields");
      std::uint32_t q = 0;
      Index d_min = 0, c = 0;
      try {
        q = static_cast<std::uint32_t>(std::stoul(fields[0]));
        d_min = std::stoull(fields[2]);
        c = std::stoull(fields[3]);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      if (!is_prime(q)) fail("base is not prime");
      const PrimeBase base(q);
      const Word u = base.value() <= 10 ? parse_word(fields[1], base) : parse_word_csv(fields[1], base);
      if (u.empty() || d_min == 0) fail("empty word or zero difference");
      if (GtmSequence(base).slice(c, d_min, u.size()) != u) fail("entry does not verify");
      cache.entries_[{q, fields[1]}] = CacheEntry{d_min, c};
    }
    return cache;
  }

  std::optional<CacheEntry> lookup(PrimeBase q, const Word& u) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({q.value(), format_word(u, q)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void insert(PrimeBase q, const Word& u, CacheEntry entry) {
    std::lock_guard lock(mutex_);
    entries_[{q.value(), format_word(u, q)}] = entry;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

  std::string serialize() const {
    std::lock_guard lock(mutex_);
    std::string out;
    for (const auto& [key, e] : entries_) {
      out += std::to_string(key.first) + '\t' + key.second + '\t' + std::to_string(e.d_min) + '\t' +
             std::to_string(e.c) + '\n';
    }
    return out;
  }

  ResultCache() = default;
  ResultCache(ResultCache&& other) noexcept : entries_(std::move(other.entries_)) {}
  ResultCache& operator=(ResultCache&& other) noexcept {
    entries_ = std::move(other.entries_);
    return *this;
  }

 private:
  std::map<Key, CacheEntry> entries_;
  mutable std::mutex mutex_;
};

/// min_difference through an optional cache. Misses are computed and stored.
inline IndexReport min_difference_cached(const GtmSequence& seq, const Word& u, ResultCache* cache) {
  if (cache) {
    if (auto hit = cache->lookup(seq.base(), u)) {
      return IndexReport{u, hit->d_min, Occurrence{hit->c, hit->d_min}, expansion_length(hit->d_min, seq.base())};
    }
  }
  IndexReport report = min_difference(seq, u);
  if (cache) cache->insert(seq.base(), u, CacheEntry{report.d_min, report.occurrence.c});
  return report;
}

// ---------------------------------------------------------------------------
// Run-length grid

struct TheoremReport {
  std::uint32_t q = 2;
  unsigned n = 1;
  Index expected = 0;
  std::size_t observed_max = 0;
  std::vector<Index> argmax_differences;
  std::vector<RunReport> per_d;

  bool passed() const {
    const Index witness_d = ipow(q, n) - 1;
    return observed_max == expected &&
           std::find(argmax_differences.begin(), argmax_differences.end(), witness_d) != argmax_differences.end();
  }
};

/// L(d) for every d < q^n, compared with the closed-form maximum.
inline TheoremReport verify_theorem(const GtmSequence& seq, unsigned n, unsigned workers = 1) {
  if (n == 0) throw InvalidInput("verify_theorem: n must be positive");
  TheoremReport report;
  report.q = seq.q();
  report.n = n;
  report.expected = theorem_max_run(seq.base(), n);
  const Index limit = ipow(seq.q(), n);
  report.per_d.resize(limit - 1);
  parallel_for(limit - 1, workers, [&](std::size_t i) { report.per_d[i] = max_run_length(seq, i + 1); });
  for (const auto& r : report.per_d) report.observed_max = std::max(report.observed_max, r.length);
  for (const auto& r : report.per_d) {
    if (r.length == report.observed_max) report.argmax_differences.push_back(r.d);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Index table

/// Words of length n with period 2 and two distinct symbols (01010..., 1010...
/// for q = 2), lexicographic.
inline std::vector<Word> alternating_words(PrimeBase q, std::size_t n) {
  std::vector<Word> out;
  for (Symbol a = 0; a < q.value(); ++a) {
    for (Symbol b = 0; b < q.value(); ++b) {
      if (a == b) continue;
      Word w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = i % 2 == 0 ? a : b;
      if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct IndexRow {
  unsigned n = 1;
  unsigned I = 1;
  std::int64_t lower = 0;
  Index upper = 0;
  std::size_t extremal_count = 0;
  bool alternating_is_extremal = false;
  std::vector<Word> extremal_words;

  bool within_bounds() const { return lower <= static_cast<std::int64_t>(I) && I <= upper; }
};

struct IndexTable {
  std::uint32_t q = 2;
  Index C = 4;
  std::vector<IndexRow> rows;
};

/// Complexity constant C with p(m) <= C m. Fixed at 4 for q = 2; otherwise
/// the largest ceil(p(m)/m) over m <= 32.
inline Index complexity_constant(const GtmSequence& seq) {
  if (seq.q() == 2) return 4;
  Index C = 1;
  for (std::size_t m = 1; m <= 32; ++m) {
    const Index p = factor_complexity(seq, m);
    C = std::max<Index>(C, (p + m - 1) / m);
  }
  return C;
}

inline IndexTable index_table(const GtmSequence& seq, unsigned n_max, unsigned workers = 1,
                              ResultCache* cache = nullptr) {
  if (n_max == 0) throw InvalidInput("index_table: n_max must be positive");
  IndexTable table;
  table.q = seq.q();
  table.C = complexity_constant(seq);
  for (unsigned n = 1; n <= n_max; ++n) {
    const MaxIndexRow max_row =
        max_index_for_length(seq, n, workers, [&](const Word& u) { return min_difference_cached(seq, u, cache); });
    IndexRow row;
    row.n = n;
    row.I = max_row.I;
    row.lower = lower_bound_index(seq.base(), n, table.C);
    row.upper = upper_bound_index(seq.base(), n);
    row.extremal_words = max_row.extremal_words;
    row.extremal_count = max_row.extremal_words.size();
    for (const Word& w : alternating_words(seq.base(), n)) {
      if (std::binary_search(row.extremal_words.begin(), row.extremal_words.end(), w)) {
        row.alternating_is_extremal = true;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Alternating-word probe

struct ConjectureReport {
  std::uint32_t q = 2;
  unsigned n = 1;
  Word alternating;                     // 0101... truncated to n
  std::vector<IndexReport> period_two;  // all period-2 words with two symbols
  unsigned I = 1;
  std::vector<Word> extremal_words;
  bool alternating_attains_max = false;
};

/// Index of the alternating word of length n against I(n). For q > 2 every
/// period-2 word is reported; the flag is set when any of them attains I(n).
inline ConjectureReport conjecture_probe(const GtmSequence& seq, unsigned n, unsigned workers = 1,
                                         ResultCache* cache = nullptr) {
  if (n == 0) throw InvalidInput("conjecture_probe: n must be positive");
  ConjectureReport report;
  report.q = seq.q();
  report.n = n;
  report.alternating.resize(n);
  for (unsigned i = 0; i < n; ++i) report.alternating[i] = i % 2;
  for (const Word& w : alternating_words(seq.base(), n)) {
    report.period_two.push_back(min_difference_cached(seq, w, cache));
  }
  const MaxIndexRow row =
      max_index_for_length(seq, n, workers, [&](const Word& u) { return min_difference_cached(seq, u, cache); });
  report.I = row.I;
  report.extremal_words = row.extremal_words;
  for (const auto& r : report.period_two) {
    if (r.index == row.I) report.alternating_attains_max = true;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Export

enum class Format { csv, json };

inline std::string to_csv(const TheoremReport& r) {
  std::ostringstream out;
  out << "q,n,d,L,witness_c\n";
  for (const auto& row : r.per_d) {
    out << r.q << ',' << r.n << ',' << row.d << ',' << row.length << ',' << row.witness_c << '\n';
  }
  out << "# expected=" << r.expected << " observed=" << r.observed_max << " argmax=[";
  for (std::size_t i = 0; i < r.argmax_differences.size(); ++i) {
    out << (i ? "," : "") << r.argmax_differences[i];
  }
  out << "] " << (r.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

inline std::string to_csv(const IndexTable& t) {
  std::ostringstream out;
  out << "q,n,I,lower,upper,extremal_count,alt_extremal\n";
  for (const auto& row : t.rows) {
    out << t.q << ',' << row.n << ',' << row.I << ',' << row.lower << ',' << row.upper << ',' << row.extremal_count
        << ',' << (row.alternating_is_extremal ? "true" : "false") << '\n';
  }
  return out.str();
}

inline std::string to_csv(const ConjectureReport& r) {
  const PrimeBase q(r.q);
  std::ostringstream out;
  out << "q,n,word,d_min,c,index,I,attains_max\n";
  for (const auto& p : r.period_two) {
    out << r.q << ',' << r.n << ',' << format_word(p.u, q) << ',' << p.d_min << ',' << p.occurrence.c << ','
        << p.index << ',' << r.I << ',' << (p.index == r.I ? "true" : "false") << '\n';
  }
  return out.str();
}

inline std::string to_csv(const EmbeddingResult& e, PrimeBase q) {
  std::ostringstream out;
  out << "q,word,n,d,c_u,d_u,d_u_length,upper_bound,verified\n";
  out << q.value() << ',' << format_word(e.u, q) << ',' << e.n << ',' << e.d << ',' << e.c_u.str() << ','
      << e.d_u.str() << ',' << expansion_length(e.d_u, q) << ',' << upper_bound_index(q, e.u.size()) << ','
      << (e.verified ? "true" : "false") << '\n';
  return out.str();
}

inline nlohmann::json words_json(const std::vector<Word>& words, PrimeBase q) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : words) arr.push_back(format_word(w, q));
  return arr;
}

inline nlohmann::json to_json(const TheoremReport& r) {
  nlohmann::json per_d = nlohmann::json::array();
  for (const auto& row : r.per_d) per_d.push_back({{"d", row.d}, {"L", row.length}, {"witness_c", row.witness_c}});
  return {{"q", r.q},
          {"n", r.n},
          {"expected", r.expected},
          {"observed_max", r.observed_max},
          {"argmax_differences", r.argmax_differences},
          {"per_d", per_d},
          {"pass", r.passed()}};
}

inline nlohmann::json to_json(const IndexTable& t) {
  const PrimeBase q(t.q);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"n", row.n},
                    {"I", row.I},
                    {"lower", row.lower},
                    {"upper", row.upper},
                    {"extremal_count", row.extremal_count},
                    {"alt_extremal", row.alternating_is_extremal},
                    {"extremal_words", words_json(row.extremal_words, q)}});
  }
  return {{"q", t.q}, {"C", t.C}, {"rows", rows}};
}

inline nlohmann::json to_json(const IndexReport& r, PrimeBase q) {
  return {{"word", format_word(r.u, q)}, {"d_min", r.d_min}, {"c", r.occurrence.c}, {"index", r.index}};
}

inline nlohmann::json to_json(const ConjectureReport& r) {
  const PrimeBase q(r.q);
  nlohmann::json period_two = nlohmann::json::array();
  for (const auto& p : r.period_two) period_two.push_back(to_json(p, q));
  return {{"q", r.q},
          {"n", r.n},
          {"alternating", format_word(r.alternating, q)},
          {"period_two", period_two},
          {"I", r.I},
          {"extremal_words", words_json(r.extremal_words, q)},
          {"alternating_attains_max", r.alternating_attains_max}};
}

inline nlohmann::json to_json(const EmbeddingResult& e, PrimeBase q) {
  std::vector<std::string> basis;
  for (const auto& b : e.basis) basis.push_back(format_word(b, q));
  return {{"q", q.value()},
          {"word", format_word(e.u, q)},
          {"n", e.n},
          {"d", e.d},
          {"base_c", e.base_c},
          {"betas", format_word(e.betas, q)},
          {"basis", basis},
          {"basis_starts", e.basis_starts},
          {"alphas", e.alphas},
          {"block_length", e.block_length},
          {"zero_fallback", e.zero_fallback},
          {"c_u", e.c_u.str()},
          {"d_u", e.d_u.str()},
          {"c_u_base_q", format_word(base_q_expansion(e.c_u, q).digits, q)},
          {"d_u_base_q", format_word(base_q_expansion(e.d_u, q).digits, q)},
          {"d_u_length", expansion_length(e.d_u, q)},
          {"upper_bound", upper_bound_index(q, e.u.size())},
          {"verified", e.verified}};
}

inline std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Writes atomically (temp file + rename) so a failed run never leaves a
/// partial file behind.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

template <typename Report>
void export_report(const Report& report, Format format, const std::filesystem::path& path) {
  write_text_file(path, format == Format::csv ? to_csv(report) : render_json(to_json(report)));
}

inline void save_cache(const ResultCache& cache, const std::filesystem::path& path) {
  write_text_file(path, cache.serialize());
}

}  // namespace gtm
