// Command-line driver for the generalized Thue-Morse toolkit.
//
// Exit codes: 0 success, 2 invalid input, 3 verification or theorem failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gtm/gtm.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitFailed = 3;

struct Options {
  std::uint32_t q = 2;
  unsigned n = 1;
  unsigned n_max = 1;
  std::size_t len = 1;
  std::string word;
  std::string word_csv;
  unsigned workers = 1;
  std::string out;
  std::string format = "csv";
  std::string cache;
  gtm::Index d = 1;
  gtm::Index c_budget = 1'000'000;
  std::optional<gtm::Index> z_cap;
  bool verify = false;
};

gtm::Word read_word(const Options& opt, gtm::PrimeBase q) {
  if (!opt.word.empty() && !opt.word_csv.empty()) throw gtm::InvalidInput("give --word or --word-csv, not both");
  if (!opt.word_csv.empty()) return gtm::parse_word_csv(opt.word_csv, q);
  if (opt.word.empty()) throw gtm::InvalidInput("a non-empty --word or --word-csv is required");
  return gtm::parse_word(opt.word, q);
}

gtm::Format read_format(const Options& opt) {
  return opt.format == "json" ? gtm::Format::json : gtm::Format::csv;
}

/// Writes to --out if given, stdout otherwise.
void emit(const Options& opt, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
  } else {
    gtm::write_text_file(opt.out, content);
  }
}

template <typename Report>
std::string render(const Options& opt, const Report& report) {
  return read_format(opt) == gtm::Format::csv ? gtm::to_csv(report) : gtm::render_json(gtm::to_json(report));
}

class CacheSession {
 public:
  explicit CacheSession(const std::string& path) : path_(path) {
    if (!path_.empty()) cache_ = gtm::ResultCache::load(path_);
  }
  gtm::ResultCache* get() { return path_.empty() ? nullptr : &cache_; }
  void save() const {
    if (!path_.empty()) gtm::save_cache(cache_, path_);
  }

 private:
  std::string path_;
  gtm::ResultCache cache_;
};

std::string join(const std::vector<gtm::Index>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s;
}

int cmd_gen(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  if (opt.len == 0) throw gtm::InvalidInput("--len must be positive");
  const gtm::GtmSequence seq(q);
  std::cout << gtm::format_word(seq.prefix(opt.len), q) << '\n';
  return 0;
}

int cmd_runs(const Options& opt) {
  const gtm::GtmSequence seq{gtm::PrimeBase(opt.q)};
  if (opt.n == 0) throw gtm::InvalidInput("--n must be positive");
  const gtm::TheoremReport report = gtm::verify_theorem(seq, opt.n, opt.workers);
  if (!opt.out.empty()) gtm::write_text_file(opt.out, render(opt, report));
  std::cout << "expected=" << report.expected << " observed=" << report.observed_max << " argmax=["
            << join(report.argmax_differences) << "] " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : kExitFailed;
}

int cmd_index(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  const gtm::GtmSequence seq(q);
  const gtm::Word u = read_word(opt, q);
  CacheSession cache(opt.cache);
  const gtm::IndexReport r = gtm::min_difference_cached(seq, u, cache.get());
  cache.save();
  std::cout << "d_min=" << r.d_min << " c=" << r.occurrence.c << " index=" << r.index << '\n';
  return 0;
}

int cmd_index_table(const Options& opt) {
  const gtm::GtmSequence seq{gtm::PrimeBase(opt.q)};
  if (opt.n_max == 0) throw gtm::InvalidInput("--n-max must be positive");
  CacheSession cache(opt.cache);
  const gtm::IndexTable table = gtm::index_table(seq, opt.n_max, opt.workers, cache.get());
  cache.save();
  emit(opt, render(opt, table));
  bool ok = true;
  for (const auto& row : table.rows) ok = ok && row.within_bounds();
  if (!opt.out.empty()) std::cout << "rows=" << table.rows.size() << " bounds=" << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : kExitFailed;
}

int cmd_embed(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  const gtm::GtmSequence seq(q);
  const gtm::Word u = read_word(opt, q);
  gtm::EmbeddingResult e;
  try {
    e = gtm::construct_embedding(seq, u, opt.z_cap);
  } catch (const gtm::VerificationFailure& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitFailed;
  }
  const unsigned length = gtm::expansion_length(e.d_u, q);
  const gtm::Index bound = gtm::upper_bound_index(q, u.size());
  std::cout << "c_u=" << e.c_u.str() << '\n'
            << "c_u_base" << q.value() << '=' << gtm::format_word(gtm::base_q_expansion(e.c_u, q).digits, q) << '\n'
            << "d_u=" << e.d_u.str() << '\n'
            << "d_u_base" << q.value() << '=' << gtm::format_word(gtm::base_q_expansion(e.d_u, q).digits, q) << '\n'
            << "index_bound: |S(d_u)|=" << length << " upper=" << bound << ' ' << (length <= bound ? "PASS" : "FAIL")
            << '\n';
  bool ok = length <= bound;
  if (opt.verify) {
    const bool slice_ok = seq.slice(e.c_u, e.d_u, u.size()) == u;
    std::cout << "verify=" << (slice_ok ? "PASS" : "FAIL") << '\n';
    ok = ok && slice_ok;
  }
  if (!opt.out.empty()) gtm::write_text_file(opt.out, read_format(opt) == gtm::Format::csv
                                                          ? gtm::to_csv(e, q)
                                                          : gtm::render_json(gtm::to_json(e, q)));
  return ok ? 0 : kExitFailed;
}

int cmd_conjecture(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  const gtm::GtmSequence seq(q);
  if (opt.n == 0) throw gtm::InvalidInput("--n must be positive");
  CacheSession cache(opt.cache);
  const gtm::ConjectureReport r = gtm::conjecture_probe(seq, opt.n, opt.workers, cache.get());
  cache.save();
  if (!opt.out.empty()) gtm::write_text_file(opt.out, render(opt, r));
  const auto& alt = r.period_two.front();
  std::cout << "alternating=" << gtm::format_word(alt.u, q) << " index=" << alt.index << " I=" << r.I
            << " extremal_count=" << r.extremal_words.size()
            << " attains_max=" << (r.alternating_attains_max ? "true" : "false") << '\n';
  return 0;
}

int cmd_witness(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  const gtm::RunWitness w = gtm::lemma2_witness(q, opt.n, opt.z_cap);
  const gtm::Index expected = gtm::theorem_max_run(q, opt.n);
  std::cout << "c=" << w.occurrence.c << " d=" << w.occurrence.d << " z=" << w.parts.z << " length=" << w.length
            << " expected=" << expected << ' ' << (w.length == expected ? "PASS" : "FAIL") << '\n';
  return w.length == expected ? 0 : kExitFailed;
}

int cmd_oracle(const Options& opt) {
  const gtm::PrimeBase q(opt.q);
  const gtm::GtmSequence seq(q);
  const gtm::Word u = read_word(opt, q);
  if (opt.d == 0) throw gtm::InvalidInput("--d must be positive");
  const auto exact = gtm::occurs_with_difference(seq, u, opt.d);
  const auto scanned = gtm::occurs_prefix_oracle(seq, u, opt.d, opt.c_budget);
  auto show = [](const std::optional<gtm::Occurrence>& o) { return o ? std::to_string(o->c) : std::string("none"); };
  const bool agree = exact.has_value() == scanned.has_value();
  std::cout << "complete=" << show(exact) << " scan=" << show(scanned) << ' ' << (agree ? "AGREE" : "DISAGREE")
            << '\n';
  return agree ? 0 : kExitFailed;
}

int cmd_complexity(const Options& opt) {
  const gtm::GtmSequence seq{gtm::PrimeBase(opt.q)};
  if (opt.n == 0) throw gtm::InvalidInput("--n must be positive");
  std::cout << "factor=" << gtm::factor_complexity(seq, opt.n)
            << " arithmetical=" << gtm::arithmetical_complexity(seq, opt.n, opt.workers) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic progressions and arithmetic index in the generalized Thue-Morse word"};
  app.require_subcommand(1);
  Options opt;

  auto add_q = [&](CLI::App* sub) { sub->add_option("--q", opt.q, "alphabet size (prime)")->required(); };
  auto add_word = [&](CLI::App* sub) {
    sub->add_option("--word", opt.word, "word as contiguous digits (q <= 10)");
    sub->add_option("--word-csv", opt.word_csv, "word as comma-separated symbols");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "output file");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  };
  auto add_cache = [&](CLI::App* sub) { sub->add_option("--cache", opt.cache, "result cache file"); };

  auto* gen = app.add_subcommand("gen", "print a prefix of the word");
  add_q(gen);
  gen->add_option("--len", opt.len, "prefix length")->required();

  auto* runs = app.add_subcommand("runs", "maximal progression lengths for every d < q^n");
  add_q(runs);
  runs->add_option("--n", opt.n)->required();
  add_output(runs);
  add_workers(runs);

  auto* index = app.add_subcommand("index", "minimal difference and arithmetic index of a word");
  add_q(index);
  add_word(index);
  add_cache(index);

  auto* table = app.add_subcommand("index-table", "I(n) with lower and upper bounds for n <= n-max");
  add_q(table);
  table->add_option("--n-max", opt.n_max)->required();
  add_output(table);
  add_workers(table);
  add_cache(table);

  auto* embed = app.add_subcommand("embed", "construct an explicit occurrence (c_u, d_u) of a word");
  add_q(embed);
  add_word(embed);
  embed->add_flag("--verify", opt.verify, "re-evaluate the slice at (c_u, d_u)");
  embed->add_option("--z-cap", opt.z_cap, "bound on the witness search");
  add_output(embed);

  auto* conj = app.add_subcommand("conjecture", "compare the alternating word with I(n)");
  add_q(conj);
  conj->add_option("--n", opt.n)->required();
  add_output(conj);
  add_workers(conj);
  add_cache(conj);

  auto* witness = app.add_subcommand("witness", "run of length q^n + 2q with difference q^n - 1 (q | n)");
  add_q(witness);
  witness->add_option("--n", opt.n)->required();
  witness->add_option("--z-cap", opt.z_cap, "bound on the witness search");

  auto* oracle = app.add_subcommand("oracle", "compare the complete procedure with a prefix scan");
  add_q(oracle);
  add_word(oracle);
  oracle->add_option("--d", opt.d)->required();
  oracle->add_option("--c-budget", opt.c_budget, "prefix scan limit");

  auto* complexity = app.add_subcommand("complexity", "factor and arithmetical complexity for one length");
  add_q(complexity);
  complexity->add_option("--n", opt.n)->required();
  add_workers(complexity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*gen) return cmd_gen(opt);
    if (*runs) return cmd_runs(opt);
    if (*index) return cmd_index(opt);
    if (*table) return cmd_index_table(opt);
    if (*embed) return cmd_embed(opt);
    if (*conj) return cmd_conjecture(opt);
    if (*witness) return cmd_witness(opt);
    if (*oracle) return cmd_oracle(opt);
    if (*complexity) return cmd_complexity(opt);
  } catch (const gtm::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const gtm::VerificationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const gtm::ConstructionFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const gtm::InternalInconsistency& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
