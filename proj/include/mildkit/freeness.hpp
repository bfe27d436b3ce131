#pragma once

// Strong freeness of homogeneous sequences in F_p<X>: the combinatorial test
// on monomials, Anick's high-term criterion, and the Hilbert-series oracle
// that compares dim (A/R)_n with the extremal series degree by degree.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"
#include "mildkit/linalg.hpp"
#include "mildkit/orders.hpp"

namespace mildkit {

/// Why a monomial sequence fails to be combinatorially free.
struct CombinatorialWitness {
  enum class Kind { submonomial, overlap };
  Kind kind;
  std::size_t i = 0;  // rho_i is inside rho_j / prefix of rho_i ...
  std::size_t j = 0;  // ... equals suffix of rho_j
  std::size_t position = 0;  // submonomial: offset in rho_j; overlap: length
  std::string describe() const {
    if (kind == Kind::submonomial)
      return "rho" + std::to_string(i + 1) + " occurs in rho" + std::to_string(j + 1) + " at offset " +
             std::to_string(position);
    return "prefix of rho" + std::to_string(i + 1) + " equals suffix of rho" + std::to_string(j + 1) +
           " (length " + std::to_string(position) + ")";
  }
};

struct CombinatorialFreeness {
  bool free = true;
  std::optional<CombinatorialWitness> witness;
  explicit operator bool() const { return free; }
};

/// No rho_i is a factor of another rho_j, and no proper prefix of any rho_i
/// is a proper suffix of any rho_j (i = j included).
inline CombinatorialFreeness combinatorially_free(std::span<const Monomial> rhos) {
  for (const auto& r : rhos)
    if (r.is_one()) throw InputError("combinatorial freeness needs nonempty monomials");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const auto& a = rhos[i].word();
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      if (i == j) continue;
      const auto& b = rhos[j].word();
      auto it = std::search(b.begin(), b.end(), a.begin(), a.end());
      if (it != b.end())
        return {false, CombinatorialWitness{CombinatorialWitness::Kind::submonomial, i, j,
                                            static_cast<std::size_t>(it - b.begin())}};
    }
  }
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const auto& a = rhos[i].word();
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      const auto& b = rhos[j].word();
      std::size_t max_len = std::min(a.size(), b.size());
      for (std::size_t len = 1; len < max_len; ++len)
        if (std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len),
                       b.end() - static_cast<std::ptrdiff_t>(len)))
          return {false, CombinatorialWitness{CombinatorialWitness::Kind::overlap, i, j, len}};
    }
  }
  return {};
}

struct AnickCertificate {
  MonomialOrder order;
  std::vector<Monomial> high_terms;
};

struct FreenessVerdict {
  enum class Status { proven_strongly_free, refuted, consistent_to_degree };
  enum class Engine { anick, oracle };

  Status status = Status::consistent_to_degree;
  Engine engine = Engine::oracle;
  int degree = 0;            // refuted: defect degree; consistent: checked up to
  std::int64_t witness = 0;  // refuted: positive defect coefficient
  std::optional<AnickCertificate> certificate;
  std::optional<CombinatorialWitness> obstruction;  // inconclusive Anick run
  std::optional<IntSeries> actual;                  // oracle: dim (A/R)_n
  std::optional<IntSeries> target;                  // oracle: extremal series

  bool proven() const { return status == Status::proven_strongly_free; }
  bool refuted() const { return status == Status::refuted; }
  bool consistent() const { return status == Status::consistent_to_degree; }
};

inline std::string to_string(FreenessVerdict::Status s) {
  switch (s) {
    case FreenessVerdict::Status::proven_strongly_free: return "proven-strongly-free";
    case FreenessVerdict::Status::refuted: return "refuted";
    default: return "consistent-to-degree";
  }
}

namespace detail {
inline std::vector<int> homogeneous_degrees(std::span<const Poly> rhos) {
  std::vector<int> sigma;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (rhos[i].is_zero()) throw InputError("relation " + std::to_string(i + 1) + " is zero");
    if (!rhos[i].is_homogeneous())
      throw InputError("relation " + std::to_string(i + 1) + " is not homogeneous: " + rhos[i].to_string());
    int s = rhos[i].tau_valuation().value();
    if (s < 1) throw InputError("relation " + std::to_string(i + 1) + " has a constant term");
    sigma.push_back(s);
  }
  return sigma;
}

inline void require_context(const ContextPtr& ctx, std::span<const Poly> rhos) {
  for (const auto& r : rhos)
    if (!(*r.context() == *ctx)) throw std::invalid_argument("polynomial context mismatch");
}
}  // namespace detail

/// Anick's criterion: combinatorially free high terms prove strong freeness.
/// A failure is inconclusive, reported as consistent-to-degree(0).
inline FreenessVerdict anick_check(std::span<const Poly> rhos, const MonomialOrder& order) {
  detail::homogeneous_degrees(rhos);
  std::vector<Monomial> high;
  high.reserve(rhos.size());
  for (const auto& r : rhos) high.push_back(high_term(order, r));
  FreenessVerdict v;
  v.engine = FreenessVerdict::Engine::anick;
  auto cf = combinatorially_free(high);
  if (cf) {
    v.status = FreenessVerdict::Status::proven_strongly_free;
  } else {
    v.status = FreenessVerdict::Status::consistent_to_degree;
    v.degree = 0;
    v.obstruction = cf.witness;
  }
  v.certificate = AnickCertificate{order, std::move(high)};
  return v;
}

/// Spanning set of the degree-n part of the two-sided ideal (rho_1..rho_m):
/// all alpha * rho_i * beta, deduplicated, as rows over the length-lex word
/// basis of A_n.
struct GradedIdealSlice {
  int degree = 0;
  std::vector<Monomial> basis;
  std::vector<SparseVec> rows;

  std::size_t rank(const PrimeField& f, const Budget& budget = {}) const {
    budget.require(rows.size() * basis.size(), "ideal slice");
    DenseMatrix m(rows.size(), basis.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (auto [c, v] : rows[r]) m(r, c) = v;
    return mildkit::rank(std::move(m), f);
  }
};

inline GradedIdealSlice ideal_slice(const ContextPtr& ctx, std::span<const Poly> rhos, int n) {
  detail::require_context(ctx, rhos);
  auto sigma = detail::homogeneous_degrees(rhos);
  const auto& w = ctx->weights;
  const auto& f = ctx->field;
  GradedIdealSlice slice;
  slice.degree = n;
  slice.basis = enumerate_monomials(w, n);
  std::unordered_map<std::vector<Letter>, std::uint32_t, WordHash> column;
  for (std::size_t i = 0; i < slice.basis.size(); ++i)
    column.emplace(slice.basis[i].word(), static_cast<std::uint32_t>(i));
  std::vector<SparseVec> rows;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    int rest = n - sigma[i];
    for (int a = 0; a <= rest; ++a) {
      auto lefts = enumerate_monomials(w, a);
      auto rights = enumerate_monomials(w, rest - a);
      for (const auto& alpha : lefts)
        for (const auto& beta : rights) {
          SparseVec row;
          for (const auto& [m, c] : rhos[i].terms()) row.emplace_back(column.at((alpha * m * beta).word()), c);
          std::sort(row.begin(), row.end());
          rows.push_back(std::move(row));
        }
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  slice.rows = std::move(rows);
  (void)f;
  return slice;
}

/// dim (A/R)_n for n = 0..N by ranking each ideal slice directly. Exact but
/// exponential in N; the graded quotient below computes the same numbers.
inline IntSeries quotient_dimensions_by_slices(const ContextPtr& ctx, std::span<const Poly> rhos, int N,
                                               const Budget& budget = {}) {
  std::vector<std::int64_t> c;
  for (int n = 0; n <= N; ++n) {
    auto slice = ideal_slice(ctx, rhos, n);
    c.push_back(static_cast<std::int64_t>(slice.basis.size() - slice.rank(ctx->field, budget)));
  }
  return IntSeries(std::move(c));
}

/// Degree-by-degree normal forms in B = A/R.
///
/// With S_m a word basis of B_m, every word of degree m ending in X_l is
/// congruent modulo R_{m - tau_l} X_l to a combination of s X_l, s in
/// S_{m - tau_l}. Those "candidate" words span A_m modulo that part of R_m,
/// and the rest of R_m is spanned by s * rho_i with s in S_{m - sigma_i}.
/// Eliminating those rows over the candidates yields S_m and the reduction
/// of every candidate, which is all later degrees need.
class GradedQuotient {
 public:
  GradedQuotient(ContextPtr ctx, std::vector<Poly> rhos, Budget budget = {})
      : ctx_(std::move(ctx)), rhos_(std::move(rhos)), budget_(budget) {
    detail::require_context(ctx_, rhos_);
    sigma_ = detail::homogeneous_degrees(rhos_);
    Degree zero;
    zero.standard.push_back({});
    zero.index.emplace(std::vector<Letter>{}, 0);
    degrees_.push_back(std::move(zero));
  }

  int computed_degree() const { return static_cast<int>(degrees_.size()) - 1; }

  void extend_to(int n) {
    while (computed_degree() < n) build_next();
  }

  std::int64_t dimension(int n) {
    extend_to(n);
    return static_cast<std::int64_t>(degrees_[static_cast<std::size_t>(n)].standard.size());
  }

  IntSeries series(int N) {
    extend_to(N);
    std::vector<std::int64_t> c;
    for (int n = 0; n <= N; ++n) c.push_back(dimension(n));
    return IntSeries(std::move(c));
  }

  /// Words forming the basis of B_n.
  const std::vector<std::vector<Letter>>& standard_words(int n) {
    extend_to(n);
    return degrees_[static_cast<std::size_t>(n)].standard;
  }

  /// Normal form of a word of weighted degree n, over standard_words(n).
  SparseVec normal_form(const std::vector<Letter>& word) {
    int n = 0;
    for (Letter l : word) n += ctx_->weights[l];
    extend_to(n);
    return nf(word, n);
  }

 private:
  struct Degree {
    std::vector<std::vector<Letter>> standard;
    std::unordered_map<std::vector<Letter>, std::uint32_t, WordHash> index;
    std::vector<std::uint32_t> offset;  // first candidate column per letter
    std::vector<SparseVec> reduction;   // candidate column -> normal form
    std::unordered_map<std::vector<Letter>, SparseVec, WordHash> memo;
  };

  SparseVec nf(const std::vector<Letter>& word, int n) {
    auto& deg = degrees_[static_cast<std::size_t>(n)];
    if (auto it = deg.index.find(word); it != deg.index.end()) return {{it->second, 1}};
    if (auto it = deg.memo.find(word); it != deg.memo.end()) return it->second;
    if (word.empty()) throw InvariantViolation("empty word outside degree 0");
    Letter l = word.back();
    std::vector<Letter> prefix(word.begin(), word.end() - 1);
    SparseVec pre = nf(prefix, n - ctx_->weights[l]);
    auto& d = degrees_[static_cast<std::size_t>(n)];  // nf() above never grows degrees_
    const auto& f = ctx_->field;
    std::unordered_map<std::uint32_t, Coeff> acc;
    for (auto [s, c] : pre)
      for (auto [t, v] : d.reduction[d.offset[l] + s]) acc[t] = f.add(acc[t], f.mul(c, v));
    SparseVec out;
    for (auto [t, v] : acc)
      if (v) out.emplace_back(t, v);
    std::sort(out.begin(), out.end());
    memo_entries_ += out.size() + 1;
    budget_.require(memo_entries_, "normal-form cache");
    d.memo.emplace(word, out);
    return out;
  }

  void build_next() {
    const int m = computed_degree() + 1;
    const auto& w = ctx_->weights;
    const auto& f = ctx_->field;
    Degree deg;
    deg.offset.assign(w.size(), 0);
    std::uint32_t columns = 0;
    std::vector<std::vector<Letter>> candidate_words;
    for (Letter l = 0; l < w.size(); ++l) {
      deg.offset[l] = columns;
      if (w[l] > m) continue;
      for (const auto& s : degrees_[static_cast<std::size_t>(m - w[l])].standard) {
        auto word = s;
        word.push_back(l);
        candidate_words.push_back(std::move(word));
        ++columns;
      }
    }
    degrees_.push_back(std::move(deg));
    SparseEchelon ech(f, columns, budget_);
    for (std::size_t i = 0; i < rhos_.size(); ++i) {
      if (sigma_[i] > m) continue;
      const auto& left = degrees_[static_cast<std::size_t>(m - sigma_[i])].standard;
      for (std::size_t si = 0; si < left.size(); ++si) {
        std::unordered_map<std::uint32_t, Coeff> acc;
        for (const auto& [mono, c] : rhos_[i].terms()) {
          std::vector<Letter> word = left[si];
          word.insert(word.end(), mono.word().begin(), mono.word().end());
          Letter l = word.back();
          word.pop_back();
          auto pre = nf(word, m - w[l]);
          auto base = degrees_.back().offset[l];
          for (auto [t, v] : pre) acc[base + t] = f.add(acc[base + t], f.mul(c, v));
        }
        SparseVec row;
        for (auto [col, v] : acc)
          if (v) row.emplace_back(col, v);
        std::sort(row.begin(), row.end());
        ech.insert(row);
      }
    }
    ech.finalize();
    auto& cur = degrees_.back();
    std::vector<std::int64_t> std_index(columns, -1);
    for (std::uint32_t c = 0; c < columns; ++c) {
      if (ech.is_pivot(c)) continue;
      std_index[c] = static_cast<std::int64_t>(cur.standard.size());
      cur.index.emplace(candidate_words[c], static_cast<std::uint32_t>(cur.standard.size()));
      cur.standard.push_back(candidate_words[c]);
    }
    cur.reduction.resize(columns);
    for (std::uint32_t c = 0; c < columns; ++c) {
      if (!ech.is_pivot(c)) {
        cur.reduction[c] = {{static_cast<std::uint32_t>(std_index[c]), 1}};
        continue;
      }
      SparseVec red;
      for (auto [col, v] : ech.row_for_pivot(c)) {
        if (col == c) continue;
        red.emplace_back(static_cast<std::uint32_t>(std_index[col]), f.neg(v));
      }
      std::sort(red.begin(), red.end());
      cur.reduction[c] = std::move(red);
    }
  }

  ContextPtr ctx_;
  std::vector<Poly> rhos_;
  std::vector<int> sigma_;
  Budget budget_;
  std::vector<Degree> degrees_;
  std::size_t memo_entries_ = 0;
};

/// Poincare series of A/(rho_1..rho_m) to degree N.
inline IntSeries quotient_dimensions(const ContextPtr& ctx, std::span<const Poly> rhos, int N,
                                     const Budget& budget = {}) {
  GradedQuotient q(ctx, std::vector<Poly>(rhos.begin(), rhos.end()), budget);
  return q.series(N);
}

/// Compares dim (A/R)_n with 1/(1 - sum t^tau + sum t^sigma). A positive
/// coefficient of B(t)(1 - sum t^tau + sum t^sigma) - 1 refutes strong
/// freeness; none up to N is evidence only.
inline FreenessVerdict strongly_free_oracle(const ContextPtr& ctx, std::span<const Poly> rhos, int N,
                                            const Budget& budget = {}) {
  auto sigma = detail::homogeneous_degrees(rhos);
  auto actual = quotient_dimensions(ctx, rhos, N, budget);
  auto defect = series_mul(actual, relation_polynomial(ctx->weights, sigma, N));
  FreenessVerdict v;
  v.engine = FreenessVerdict::Engine::oracle;
  v.actual = actual;
  // The target may have negative coefficients; it is reported, not required.
  v.target = target_series(ctx->weights, sigma, N);
  if (defect[0] != 1) throw InvariantViolation("quotient series has constant term " + std::to_string(actual[0]));
  for (int n = 1; n <= N; ++n) {
    if (defect[n] < 0)
      throw InvariantViolation("Golod-Shafarevich positivity violated at degree " + std::to_string(n));
    if (defect[n] > 0) {
      v.status = FreenessVerdict::Status::refuted;
      v.degree = n;
      v.witness = defect[n];
      return v;
    }
  }
  v.status = FreenessVerdict::Status::consistent_to_degree;
  v.degree = N;
  return v;
}

struct Admissibility {
  bool admissible = true;
  int degree = 0;             // first negative coefficient, if any
  std::int64_t coefficient = 0;
  IntSeries series;
};

/// Looks for a negative coefficient in 1/(1 - sum t^tau + sum t^sigma) up
/// to N, which rules out any strongly free sequence with these degrees.
inline Admissibility series_admissibility(const Weights& tau, std::span<const int> sigmas, int N) {
  Admissibility a;
  a.series = target_series(tau, sigmas, N);
  for (int n = 0; n <= N; ++n)
    if (a.series[n] < 0) {
      a.admissible = false;
      a.degree = n;
      a.coefficient = a.series[n];
      break;
    }
  return a;
}

}  // namespace mildkit
