#pragma once

// Closed-form run lengths, explicit long runs with difference q^n - 1, the
// triangular-basis embedding of an arbitrary word, and the index bounds that
// follow from it.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "gtm/core.hpp"

namespace gtm {

using Rational = boost::rational<std::int64_t>;

/// Smallest k >= 0 with q^k >= m.
inline unsigned ceil_log(PrimeBase q, Index m) {
  unsigned k = 0;
  Index p = 1;
  while (p < m) {
    p = checked_mul(p, q.value());
    ++k;
  }
  return k;
}

/// Maximal homogeneous progression length over all differences d < q^n:
/// q^n + 2q when q divides n, q^n otherwise. Attained at d = q^n - 1.
inline Index theorem_max_run(PrimeBase q, unsigned n) {
  if (n == 0) throw InvalidInput("theorem_max_run: n must be positive");
  const Index qn = ipow(q.value(), n);
  return n % q.value() == 0 ? qn + 2 * Index{q.value()} : qn;
}

/// c = z*q^{2n} + y*q^n + x with x, y < q^n.
struct WitnessDecomposition {
  Index z = 0;
  Index y = 0;
  Index x = 0;
  unsigned n = 1;

  Index value(PrimeBase q) const {
    const Index qn = ipow(q.value(), n);
    return checked_add(checked_add(checked_mul(checked_mul(z, qn), qn), checked_mul(y, qn)), x);
  }
};

struct RunWitness {
  Occurrence occurrence;
  WitnessDecomposition parts;
  std::size_t length = 0;
};

inline Index default_z_cap(PrimeBase q) { return ipow(q.value(), q.value() + 2); }

/// Start of a run of length exactly q^n + 2q with difference q^n - 1, for q | n.
/// Uses y = q^n - (q-1), x = q-1 and the smallest z in [0, z_cap) that makes
/// the run reach that length.
inline RunWitness lemma2_witness(PrimeBase q, unsigned n, std::optional<Index> z_cap = std::nullopt) {
  if (n == 0 || n % q.value() != 0) {
    throw InvalidInput("lemma2_witness: n must be a positive multiple of q");
  }
  const GtmSequence seq(q);
  const Index qn = ipow(q.value(), n);
  const Index d = qn - 1;
  const Index target = theorem_max_run(q, n);
  const Index cap = z_cap.value_or(default_z_cap(q));
  for (Index z = 0; z < cap; ++z) {
    WitnessDecomposition parts{z, qn - (q.value() - 1), q.value() - 1, n};
    const Index c = parts.value(q);
    const std::size_t len = seq.run_length_at(c, d);
    if (len == target) return {Occurrence{c, d}, parts, len};
  }
  throw ConstructionFailure("lemma2_witness: no z below " + std::to_string(cap) + " gives a run of length " +
                            std::to_string(target));
}

/// A maximal constant-0 run with difference q^n - 1 and length >= q^n.
/// The symbol right after the run is nonzero.
struct ZeroRun {
  Occurrence occurrence;
  WitnessDecomposition parts;
  std::size_t length = 0;
  Symbol next = 0;
};

inline ZeroRun base_zero_run(const GtmSequence& seq, unsigned n, std::optional<Index> z_cap = std::nullopt) {
  if (n == 0) throw InvalidInput("base_zero_run: n must be positive");
  const PrimeBase q = seq.base();
  const Index qn = ipow(q.value(), n);
  const Index d = qn - 1;
  const Index cap = z_cap.value_or(default_z_cap(q));

  // Candidate shapes: y + x = q^n - 1 with x = q^n - 1 (run of q^n or more),
  // and the q | n shape used by lemma2_witness.
  std::vector<std::pair<Index, Index>> shapes{{0, qn - 1}};
  if (n % q.value() == 0) shapes.emplace_back(qn - (q.value() - 1), q.value() - 1);

  for (Index z = 0; z < cap; ++z) {
    for (auto [y, x] : shapes) {
      WitnessDecomposition parts{z, y, x, n};
      const Index c = parts.value(q);
      if (seq.symbol_at(c) != 0) continue;
      const std::size_t len = seq.run_length_at(c, d);
      if (len < qn) continue;
      const Symbol next = seq.symbol_at(checked_add(c, checked_mul(d, len)));
      return {Occurrence{c, d}, parts, len, next};
    }
  }
  throw ConstructionFailure("base_zero_run: no zero run of length q^n found below z cap " + std::to_string(cap));
}

/// n used for words of length m: smallest n >= 1 with q^n >= m.
inline unsigned embedding_exponent(PrimeBase q, std::size_t m) {
  return std::max(1u, ceil_log(q, static_cast<Index>(m)));
}

/// Arithmetic factors b_1..b_m with common difference d = q^n - 1 and
/// b_i = 0^{m-i} beta_1 ... beta_i.
struct Basis {
  unsigned n = 1;
  Index d = 1;
  Index base_c = 0;
  std::vector<Index> starts;
  std::vector<Word> vectors;
  Word betas;
  ZeroRun zero_run;
};

inline Basis build_basis(const GtmSequence& seq, std::size_t m, std::optional<Index> z_cap = std::nullopt) {
  if (m == 0) throw InvalidInput("build_basis: m must be positive");
  Basis basis;
  basis.n = embedding_exponent(seq.base(), m);
  basis.zero_run = base_zero_run(seq, basis.n, z_cap);
  const Index d = basis.zero_run.occurrence.d;
  basis.d = d;
  // Keep the last m-1 zeros of the run so the nonzero symbol lands at offset m-1.
  const Index skip = basis.zero_run.length - (m - 1);
  basis.base_c = checked_add(basis.zero_run.occurrence.c, checked_mul(skip, d));
  for (std::size_t i = 0; i < m; ++i) {
    const Index start = checked_add(basis.base_c, checked_mul(i, d));
    basis.starts.push_back(start);
    basis.vectors.push_back(seq.slice(start, d, m));
  }
  basis.betas = basis.vectors.back();

  for (std::size_t i = 0; i < m; ++i) {
    const Word& b = basis.vectors[i];
    const std::size_t zeros = m - 1 - i;
    for (std::size_t k = 0; k < m; ++k) {
      const Symbol expected = k < zeros ? 0 : basis.betas[k - zeros];
      if (b[k] != expected) throw ConstructionFailure("build_basis: basis is not triangular");
    }
  }
  if (basis.betas.front() == 0) throw ConstructionFailure("build_basis: leading beta is zero");
  return basis;
}

inline Symbol inverse_mod(Symbol a, PrimeBase q) {
  // a^{q-2} mod q
  std::uint64_t result = 1, b = a % q.value(), e = q.value() - 2;
  while (e) {
    if (e & 1) result = result * b % q.value();
    b = b * b % q.value();
    e >>= 1;
  }
  return static_cast<Symbol>(result);
}

/// Solves u = sum_i alpha_i * b_i (symbol-wise mod q) for a triangular basis.
inline std::vector<Symbol> solve_coefficients(const Word& u, const std::vector<Word>& basis, const Word& betas,
                                              PrimeBase q) {
  const std::size_t m = u.size();
  if (basis.size() != m || betas.size() != m) throw InvalidInput("solve_coefficients: size mismatch");
  if (m == 0) return {};
  if (betas.front() % q.value() == 0) throw InvalidInput("solve_coefficients: invalid basis (beta_1 = 0)");
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i].size() != m) throw InvalidInput("solve_coefficients: basis word has wrong length");
    const std::size_t zeros = m - 1 - i;
    for (std::size_t k = 0; k < m; ++k) {
      const Symbol expected = k < zeros ? 0 : betas[k - zeros];
      if (basis[i][k] != expected) throw InvalidInput("solve_coefficients: basis is not triangular");
    }
  }
  validate_word(u, q);

  const Symbol inv = inverse_mod(betas.front(), q);
  std::vector<Symbol> alpha(m, 0);
  // Position k is the first position where b_{m-1-k} is nonzero; sweep k upwards.
  for (std::size_t k = 0; k < m; ++k) {
    std::uint64_t acc = u[k];
    for (std::size_t i = m - k; i < m; ++i) {
      acc += std::uint64_t{q.value() - basis[i][k]} * alpha[i];
    }
    alpha[m - 1 - k] = static_cast<Symbol>(acc % q.value() * inv % q.value());
  }
  return alpha;
}

/// Symbol-wise combination sum_i alpha_i * b_i mod q.
inline Word combine(const std::vector<Symbol>& alpha, const std::vector<Word>& basis, PrimeBase q) {
  if (basis.empty()) return {};
  Word out(basis.front().size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = static_cast<Symbol>((out[k] + std::uint64_t{alpha[i]} * basis[i][k]) % q.value());
    }
  }
  return out;
}

struct EmbeddingResult {
  Word u;
  unsigned n = 1;
  Index d = 1;
  Index base_c = 0;
  Word betas;
  std::vector<Word> basis;
  std::vector<Index> basis_starts;
  std::vector<Symbol> alphas;
  Natural c_u;
  Natural d_u;
  unsigned block_length = 0;  // 0 for the constant-zero fallback
  bool zero_fallback = false;
  bool verified = false;
};

/// Upper bound (2*ceil(log_q m) + q) * (q-1) * m on the arithmetic index.
inline Index upper_bound_index(PrimeBase q, Index m) {
  if (m == 0) throw InvalidInput("upper_bound_index: m must be positive");
  return checked_mul(checked_mul(2 * Index{ceil_log(q, m)} + q.value(), q.value() - 1), m);
}

/// Builds (c_u, d_u) with arithmetic_slice(c_u, d_u, |u|) = u. Each basis
/// start c_i is written as a base-q block of fixed length B, repeated alpha_i
/// times; d_u repeats the block 0^{B-n}(q-1)^n. B is large enough that no
/// block overflows into its neighbour over |u| steps.
inline EmbeddingResult construct_embedding(const GtmSequence& seq, const Word& u,
                                           std::optional<Index> z_cap = std::nullopt) {
  if (u.empty()) throw InvalidInput("construct_embedding: empty word");
  const PrimeBase q = seq.base();
  validate_word(u, q);
  const std::size_t m = u.size();

  Basis basis = build_basis(seq, m, z_cap);
  EmbeddingResult r;
  r.u = u;
  r.n = basis.n;
  r.d = basis.d;
  r.base_c = basis.base_c;
  r.betas = basis.betas;
  r.basis = basis.vectors;
  r.basis_starts = basis.starts;
  r.alphas = solve_coefficients(u, basis.vectors, basis.betas, q);

  if (std::all_of(r.alphas.begin(), r.alphas.end(), [](Symbol a) { return a == 0; })) {
    r.zero_fallback = true;
    r.c_u = basis.zero_run.occurrence.c;
    r.d_u = basis.d;
    r.verified = seq.slice(r.c_u, r.d_u, m) == u;
    if (!r.verified) throw VerificationFailure("construct_embedding: zero-run fallback does not evaluate to u");
    return r;
  }

  const Index reach = checked_add(basis.starts.back(), checked_mul(basis.d, m - 1));
  unsigned block = std::max<unsigned>(2 * basis.n + q.value(), expansion_length(reach, q));

  for (int attempt = 0; attempt < 2; ++attempt, block += basis.n) {
    const Natural scale = npow(q.value(), block);
    Natural c_u = 0, d_u = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (Symbol rep = 0; rep < r.alphas[i]; ++rep) {
        c_u = c_u * scale + basis.starts[i];
        d_u = d_u * scale + basis.d;
      }
    }
    // A single symbol is read at c_u alone, so one copy of d suffices.
    if (m == 1) d_u = basis.d;
    if (seq.slice(c_u, d_u, m) == u) {
      r.c_u = std::move(c_u);
      r.d_u = std::move(d_u);
      r.block_length = block;
      r.verified = true;
      return r;
    }
  }
  throw VerificationFailure("construct_embedding: constructed slice differs from u after retry");
}

/// Exact ceil((1/2) * log_q(2 q^m / (C m))): the least integer k with
/// q^{2k} * C * m >= 2 q^m. May be zero or negative for tiny m.
inline std::int64_t lower_bound_index(PrimeBase q, Index m, Index C) {
  if (m == 0 || C == 0) throw InvalidInput("lower_bound_index: m and C must be positive");
  const Natural rhs = 2 * npow(q.value(), static_cast<unsigned>(m));
  const Natural cm = Natural(C) * m;
  // holds(k) <=> q^{2k} C m >= 2 q^m, monotone in k.
  auto holds = [&](std::int64_t k) {
    if (k >= 0) return npow(q.value(), static_cast<unsigned>(2 * k)) * cm >= rhs;
    return cm >= rhs * npow(q.value(), static_cast<unsigned>(-2 * k));
  };
  std::int64_t k = 0;
  if (holds(0)) {
    while (holds(k - 1)) --k;
  } else {
    while (!holds(k)) ++k;
  }
  return k;
}

/// (m - log2 m - 1) / 2 for the binary word with C = 4; log2 m is rounded up
/// when m is not a power of two, which only weakens the bound.
inline Rational lower_bound_tm(Index m) {
  if (m == 0) throw InvalidInput("lower_bound_tm: m must be positive");
  const auto lg = static_cast<std::int64_t>(ceil_log(PrimeBase(2), m));
  return Rational(static_cast<std::int64_t>(m) - lg - 1, 2);
}

/// ceil(max(0, x)).
inline std::int64_t ceil_nonnegative(const Rational& x) {
  if (x <= 0) return 0;
  const std::int64_t fl = x.numerator() / x.denominator();
  return Rational(fl) == x ? fl : fl + 1;
}

struct BoundsRow {
  Index m = 1;
  Index upper = 0;
  std::int64_t lower = 0;
  Index C = 1;
};

inline BoundsRow bounds_row(PrimeBase q, Index m, Index C) {
  return {m, upper_bound_index(q, m), lower_bound_index(q, m, C), C};
}

}  // namespace gtm
