#pragma once

// Massey products of one-relator-style presentations read off from Magnus
// coefficients: the n-fold product on basis classes equals (-1)^(n-1) times
// the coefficient of X_I in the relator, for n = z(G). Everything here is
// built on that identity; no cochains are constructed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"
#include "mildkit/freeness.hpp"
#include "mildkit/lie.hpp"
#include "mildkit/linalg.hpp"
#include "mildkit/magnus.hpp"
#include "mildkit/orders.hpp"
#include "mildkit/presentation.hpp"

namespace mildkit {

/// min over relators of omega under the uniform grading.
inline FiltrationDegree zassenhaus_invariant(const Presentation& P, int cutoff) {
  if (cutoff < 1) throw InputError("cutoff must be >= 1");
  auto ctx = P.uniform_context();
  FiltrationDegree z{std::nullopt, cutoff};
  for (const auto& r : P.relators) {
    auto w = omega_tau(r.word, ctx, cutoff);
    if (!w.known()) continue;
    if (*w.value == 1)
      throw InputError("relator " + r.name + " has a degree-1 term; the presentation is not minimal");
    if (!z.known() || *w.value < *z.value) z.value = w.value;
  }
  return z;
}

/// Raw Magnus coefficients eps_I(r_j) for all |I| = n; the Massey sign is
/// applied by massey_value and bn_map only.
struct MasseyTensor {
  int n = 0;
  std::size_t d = 0;
  std::uint32_t p = 2;
  std::vector<std::vector<Coeff>> values;  // [relator][flat index]

  std::size_t m() const noexcept { return values.size(); }
  std::size_t entries() const noexcept {
    std::size_t s = 1;
    for (int i = 0; i < n; ++i) s *= d;
    return s;
  }
  std::size_t flat(std::span<const Letter> I) const {
    if (static_cast<int>(I.size()) != n) throw InputError("multi-index has the wrong length");
    std::size_t k = 0;
    for (Letter l : I) {
      if (l >= d) throw InputError("multi-index entry out of range");
      k = k * d + l;
    }
    return k;
  }
  std::vector<Letter> unflatten(std::size_t k) const {
    std::vector<Letter> I(static_cast<std::size_t>(n));
    for (int t = n - 1; t >= 0; --t) {
      I[static_cast<std::size_t>(t)] = static_cast<Letter>(k % d);
      k /= d;
    }
    return I;
  }
  Coeff at(std::size_t j, std::span<const Letter> I) const { return values.at(j)[flat(I)]; }
};

inline Coeff massey_sign(const PrimeField& f, int n, Coeff v) { return n % 2 == 0 ? f.neg(v) : v; }

inline MasseyTensor massey_tensor(const Presentation& P, int n, int cutoff, const Budget& budget = {}) {
  if (n < 1) throw InputError("Massey order must be >= 1");
  if (cutoff < n) throw InputError("cutoff must be at least the Massey order");
  auto z = zassenhaus_invariant(P, cutoff);
  if (z.known() && n > *z.value)
    throw InputError("the " + std::to_string(n) + "-fold Massey product is not uniquely defined: z(G) = " +
                     std::to_string(*z.value));
  MasseyTensor T;
  T.n = n;
  T.d = P.d();
  T.p = P.p;
  budget.require(T.entries() * std::max<std::size_t>(P.m(), 1), "Massey tensor");
  auto ctx = P.uniform_context();
  for (const auto& r : P.relators) {
    std::vector<Coeff> row(T.entries(), 0);
    Poly top = expand(r.word, ctx, n).series.homogeneous_component(n);
    for (const auto& [mono, c] : top.terms()) row[T.flat(mono.letters())] = c;
    T.values.push_back(std::move(row));
  }
  return T;
}

/// (-1)^(n-1) sum_I prod_k xs[k][i_k] T[j][I], one entry per relator.
inline std::vector<Coeff> massey_value(const MasseyTensor& T, const std::vector<std::vector<Coeff>>& xs) {
  if (static_cast<int>(xs.size()) != T.n) throw InputError("expected " + std::to_string(T.n) + " classes");
  for (const auto& x : xs)
    if (x.size() != T.d) throw InputError("class vectors must have length " + std::to_string(T.d));
  PrimeField f(T.p);
  std::vector<Coeff> out(T.m(), 0);
  const std::size_t N = T.entries();
  for (std::size_t k = 0; k < N; ++k) {
    bool any = false;
    for (std::size_t j = 0; j < T.m() && !any; ++j) any = T.values[j][k] != 0;
    if (!any) continue;
    auto I = T.unflatten(k);
    Coeff w = 1;
    for (int t = 0; t < T.n && w; ++t) w = f.mul(w, f.reduce(xs[static_cast<std::size_t>(t)][I[static_cast<std::size_t>(t)]]));
    if (!w) continue;
    for (std::size_t j = 0; j < T.m(); ++j) out[j] = f.add(out[j], f.mul(w, T.values[j][k]));
  }
  for (auto& v : out) v = massey_sign(f, T.n, v);
  return out;
}

inline std::vector<Coeff> basis_vector(std::size_t d, Letter i) {
  std::vector<Coeff> v(d, 0);
  v.at(i) = 1;
  return v;
}

struct ShuffleViolation {
  std::size_t relator = 0;
  std::vector<Letter> tuple;
  Coeff sum = 0;
};

struct ShuffleReport {
  int a = 0, b = 0;
  std::size_t tuples_checked = 0;
  bool sampled = false;
  std::vector<ShuffleViolation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {
inline void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

/// Sum over (a,b)-shuffles f of the product with xi_j placed in slot f(j);
/// every sum must vanish. Above sample_threshold work units a seeded random
/// sample of tuples is checked instead.
inline ShuffleReport check_shuffles(const MasseyTensor& T, int a, int b, std::size_t sample_threshold = 2'000'000,
                                    std::uint64_t seed = 1) {
  if (a < 1 || b < 1 || a + b != T.n) throw InputError("shuffle split must satisfy a, b >= 1 and a + b = n");
  PrimeField f(T.p);
  std::vector<std::vector<int>> slots_of_first;
  std::vector<int> cur;
  detail::combinations(T.n, a, 0, cur, slots_of_first);
  ShuffleReport rep;
  rep.a = a;
  rep.b = b;
  const std::size_t N = T.entries();
  auto check = [&](std::size_t flat_j) {
    auto J = T.unflatten(flat_j);
    std::vector<Coeff> sums(T.m(), 0);
    std::vector<Letter> K(J.size());
    for (const auto& first : slots_of_first) {
      std::vector<bool> taken(J.size(), false);
      for (int t = 0; t < a; ++t) {
        K[static_cast<std::size_t>(first[static_cast<std::size_t>(t)])] = J[static_cast<std::size_t>(t)];
        taken[static_cast<std::size_t>(first[static_cast<std::size_t>(t)])] = true;
      }
      std::size_t next = static_cast<std::size_t>(a);
      for (std::size_t s = 0; s < K.size(); ++s)
        if (!taken[s]) K[s] = J[next++];
      auto k = T.flat(K);
      for (std::size_t r = 0; r < T.m(); ++r) sums[r] = f.add(sums[r], T.values[r][k]);
    }
    ++rep.tuples_checked;
    for (std::size_t r = 0; r < T.m(); ++r)
      if (sums[r]) rep.violations.push_back({r, J, sums[r]});
  };
  if (N * slots_of_first.size() * std::max<std::size_t>(T.m(), 1) <= sample_threshold) {
    for (std::size_t k = 0; k < N; ++k) check(k);
  } else {
    rep.sampled = true;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    std::size_t samples = std::max<std::size_t>(1, sample_threshold / (slots_of_first.size() * std::max<std::size_t>(T.m(), 1)));
    for (std::size_t s = 0; s < samples; ++s) check(pick(rng));
  }
  return rep;
}

/// Matrix of chi -> <chi,...,chi>: column i is the value on (chi_i,...,chi_i).
inline DenseMatrix bn_map(const MasseyTensor& T) {
  PrimeField f(T.p);
  DenseMatrix B(T.m(), T.d);
  for (std::size_t i = 0; i < T.d; ++i) {
    std::vector<Letter> I(static_cast<std::size_t>(T.n), static_cast<Letter>(i));
    auto k = T.flat(I);
    for (std::size_t j = 0; j < T.m(); ++j) B(j, i) = massey_sign(f, T.n, T.values[j][k]);
  }
  return B;
}

/// Tensor in the basis whose k-th vector is row k of M (over the old basis).
inline MasseyTensor transform_tensor(const MasseyTensor& T, const DenseMatrix& M) {
  if (M.rows() != T.d || M.cols() != T.d) throw InputError("basis change must be a d x d matrix");
  PrimeField f(T.p);
  MasseyTensor out = T;
  const std::size_t N = T.entries();
  std::size_t stride = N;
  for (int t = 0; t < T.n; ++t) {
    stride /= T.d;  // weight of slot t in the flat index
    for (auto& vals : out.values) {
      std::vector<Coeff> next(N, 0);
      for (std::size_t k = 0; k < N; ++k) {
        if (!vals[k]) continue;
        std::size_t i = (k / stride) % T.d;
        std::size_t base = k - i * stride;
        for (std::size_t kk = 0; kk < T.d; ++kk) {
          Coeff c = M(kk, i);
          if (c) next[base + kk * stride] = f.add(next[base + kk * stride], f.mul(c, vals[k]));
        }
      }
      vals = std::move(next);
    }
  }
  return out;
}

inline DenseMatrix identity_matrix(std::size_t d) {
  DenseMatrix I(d, d);
  for (std::size_t i = 0; i < d; ++i) I(i, i) = 1;
  return I;
}

/// H^1 = U + V with U spanned by the first c rows of basis_change.
struct Decomposition {
  DenseMatrix basis_change;
  std::size_t c = 1;
  int e = 1;
};

struct MildCertificate {
  Decomposition decomposition;
  MonomialOrder order;
  std::vector<Poly> forms;  // initial forms in the new coordinates, row reduced
  std::vector<Monomial> high_terms;
  FreenessVerdict anick;
  std::optional<FreenessVerdict> oracle;
};

struct MildVerdict {
  enum class Status { mild, criterion_failed, not_applicable };
  Status status = Status::criterion_failed;
  std::string reason;
  int n = 0;
  std::optional<MildCertificate> certificate;
  std::optional<std::uint64_t> finite_order;
  std::size_t decompositions_tried = 0;

  bool mild() const { return status == Status::mild; }

  static MildVerdict not_applicable(std::string why) {
    MildVerdict v;
    v.status = Status::not_applicable;
    v.reason = std::move(why);
    return v;
  }
};

inline std::string to_string(MildVerdict::Status s) {
  switch (s) {
    case MildVerdict::Status::mild: return "mild";
    case MildVerdict::Status::criterion_failed: return "criterion-failed";
    default: return "not-applicable";
  }
}

struct MildOptions {
  int verify_degree = 8;  // oracle degree for the certificate; 0 skips the Hilbert-series check
  Budget budget;
};

namespace detail {

inline std::string tuple_string(const std::vector<Letter>& K) {
  std::string s = "(";
  for (std::size_t i = 0; i < K.size(); ++i) s += (i ? "," : "") + std::to_string(K[i] + 1);
  return s + ")";
}

inline MildVerdict check_decomposition(const MasseyTensor& T, const Decomposition& D, const MildOptions& opt) {
  const std::size_t d = T.d;
  const int n = T.n;
  PrimeField f(T.p);
  MildVerdict v;
  v.n = n;
  v.decompositions_tried = 1;
  if (D.c < 1 || D.c >= d) throw InputError("split c must satisfy 1 <= c < d");
  if (D.e < 1 || D.e > n - 1) throw InputError("e must satisfy 1 <= e <= n-1");
  if (rank(D.basis_change, f) != d) throw InputError("basis change is not invertible");
  auto Tp = transform_tensor(T, D.basis_change);
  const std::size_t N = Tp.entries();

  // Vanishing on tuples with at least n-e+1 entries from V.
  for (std::size_t k = 0; k < N; ++k) {
    auto K = Tp.unflatten(k);
    int in_v = static_cast<int>(std::count_if(K.begin(), K.end(), [&](Letter l) { return l >= D.c; }));
    if (in_v < n - D.e + 1) continue;
    for (std::size_t j = 0; j < Tp.m(); ++j)
      if (Tp.values[j][k]) {
        v.status = MildVerdict::Status::criterion_failed;
        v.reason = "Massey product of relator " + std::to_string(j + 1) + " is nonzero on " + tuple_string(K) +
                   ", which has " + std::to_string(in_v) + " entries from V";
        return v;
      }
  }

  // Surjectivity of U^e (x) V^(n-e) onto H^2.
  DenseMatrix S(Tp.m(), 0);
  {
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < N; ++k) {
      auto K = Tp.unflatten(k);
      bool ok = true;
      for (int t = 0; t < n && ok; ++t) ok = (t < D.e) == (K[static_cast<std::size_t>(t)] < D.c);
      if (ok) cols.push_back(k);
    }
    opt.budget.require(cols.size() * Tp.m(), "surjectivity rank");
    S = DenseMatrix(Tp.m(), cols.size());
    for (std::size_t j = 0; j < Tp.m(); ++j)
      for (std::size_t c = 0; c < cols.size(); ++c) S(j, c) = Tp.values[j][cols[c]];
  }
  if (rank(S, f) != Tp.m()) {
    v.status = MildVerdict::Status::criterion_failed;
    v.reason = "relators dependent or too deep: U^e V^(n-e) does not map onto H^2";
    return v;
  }

  // Certificate: the new-coordinate initial forms, row reduced so that their
  // U-order high terms are distinct, must be combinatorially free.
  auto ctx = make_context(T.p, d);
  std::vector<Letter> u;
  for (std::size_t i = 0; i < D.c; ++i) u.push_back(static_cast<Letter>(i));
  auto order = MonomialOrder::u_order(Weights::uniform(d), u);
  std::vector<std::size_t> cols(N);
  std::iota(cols.begin(), cols.end(), 0);
  auto mono = [&](std::size_t k) { return Monomial(Tp.unflatten(k), ctx->weights); };
  std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) { return order.less(mono(b), mono(a)); });
  opt.budget.require(N * Tp.m(), "certificate reduction");
  DenseMatrix R(Tp.m(), N);
  for (std::size_t j = 0; j < Tp.m(); ++j)
    for (std::size_t c = 0; c < N; ++c) R(j, c) = Tp.values[j][cols[c]];
  auto pivots = rref(R, f);
  if (pivots.size() != Tp.m()) throw InvariantViolation("initial forms dependent after passing the rank test");
  MildCertificate cert{D, order, {}, {}, {}, std::nullopt};
  for (std::size_t j = 0; j < Tp.m(); ++j) {
    Poly form(ctx);
    for (std::size_t c = 0; c < N; ++c)
      if (R(j, c)) form.add_term(mono(cols[c]), R(j, c));
    cert.high_terms.push_back(mono(cols[pivots[j]]));
    if (!(high_term(order, form) == cert.high_terms.back()))
      throw InvariantViolation("row reduction did not expose the high term");
    cert.forms.push_back(std::move(form));
  }
  cert.anick = anick_check(cert.forms, order);
  if (!cert.anick.proven())
    throw InvariantViolation("Massey conditions hold but the high terms are not combinatorially free");
  if (opt.verify_degree > 0) {
    cert.oracle = strongly_free_oracle(ctx, cert.forms, opt.verify_degree, opt.budget);
    if (cert.oracle->refuted()) throw InvariantViolation("certified forms refuted by the Hilbert-series oracle");
  }
  v.status = MildVerdict::Status::mild;
  v.reason = "Massey conditions hold; high terms under the U-order are combinatorially free";
  v.certificate = std::move(cert);
  return v;
}

inline int require_z(const Presentation& P, int cutoff) {
  auto z = zassenhaus_invariant(P, cutoff);
  if (!z.known())
    throw PrecisionError("every relator is trivial up to degree " + std::to_string(cutoff) +
                         "; raise the cutoff to find z(G)");
  return *z.value;
}

}  // namespace detail

inline MildVerdict check_mild(const Presentation& P, const Decomposition& D, int cutoff,
                              const MildOptions& opt = {}) {
  if (P.m() == 0) return MildVerdict::not_applicable("free pro-p group (no relators): cd <= 1");
  int n = detail::require_z(P, cutoff);
  auto T = massey_tensor(P, n, std::max(cutoff, n), opt.budget);
  return detail::check_decomposition(T, D, opt);
}

struct SearchOptions {
  std::vector<DenseMatrix> extra_bases;
  MildOptions mild;
};

/// Tries, for the identity basis and then each extra basis: c = 1..d-1,
/// coordinate subsets of size c in lexicographic order as U, and e = 1..n-1.
inline MildVerdict search_mild(const Presentation& P, int cutoff, const SearchOptions& opt = {}) {
  if (P.m() == 0) return MildVerdict::not_applicable("free pro-p group (no relators): cd <= 1");
  const std::size_t d = P.d();
  if (d < 2) return MildVerdict::not_applicable("one generator: no splitting H^1 = U + V exists");
  int n = detail::require_z(P, cutoff);
  auto T = massey_tensor(P, n, std::max(cutoff, n), opt.mild.budget);
  double subsets = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(d, 60)));
  double work = subsets * static_cast<double>(opt.extra_bases.size() + 1) * static_cast<double>(T.entries()) *
                static_cast<double>(T.m()) * (n - 1);
  if (work > static_cast<double>(opt.mild.budget.max_entries) * 50.0)
    throw BudgetError("decomposition search over 2^" + std::to_string(d) +
                      " subsets exceeds the budget; raise budget or pass an explicit decomposition");
  PrimeField f(P.p);
  std::vector<DenseMatrix> bases{identity_matrix(d)};
  for (const auto& b : opt.extra_bases) {
    if (b.rows() != d || b.cols() != d) throw InputError("basis change must be a d x d matrix");
    if (rank(b, f) != d) throw InputError("basis change is not invertible");
    bases.push_back(b);
  }
  std::size_t tried = 0;
  for (const auto& B : bases)
    for (std::size_t c = 1; c < d; ++c) {
      std::vector<std::vector<int>> subsets_c;
      std::vector<int> cur;
      detail::combinations(static_cast<int>(d), static_cast<int>(c), 0, cur, subsets_c);
      for (const auto& S : subsets_c) {
        std::vector<std::size_t> perm(S.begin(), S.end());
        for (std::size_t i = 0; i < d; ++i)
          if (std::find(S.begin(), S.end(), static_cast<int>(i)) == S.end()) perm.push_back(i);
        DenseMatrix M(d, d);
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t k = 0; k < d; ++k) M(r, k) = B(perm[r], k);
        for (int e = 1; e <= n - 1; ++e) {
          ++tried;
          auto v = detail::check_decomposition(T, Decomposition{M, c, e}, opt.mild);
          if (v.mild()) {
            v.decompositions_tried = tried;
            return v;
          }
        }
      }
    }
  MildVerdict v;
  v.status = MildVerdict::Status::criterion_failed;
  v.n = n;
  v.decompositions_tried = tried;
  v.reason = "no searched decomposition satisfies the Massey conditions (" + std::to_string(tried) +
             " tried; the search covers coordinate splits only)";
  return v;
}

struct DemuskinTypeReport {
  bool is_demuskin_type = false;
  int n = 0;
  std::optional<std::vector<Coeff>> failing_chi;
  std::size_t vectors_checked = 0;
};

namespace detail {

// Coefficients of the linear form psi -> <chi^(e-1), psi, chi^(n-e)> (up to
// the global sign), one per basis class psi = chi_i. Slot e is 1-based.
inline std::vector<Coeff> shifted_form(const MasseyTensor& T, std::size_t j, const std::vector<Coeff>& chi, int e) {
  PrimeField f(T.p);
  std::vector<Coeff> L(T.d, 0);
  const std::size_t N = T.entries();
  for (std::size_t k = 0; k < N; ++k) {
    Coeff t = T.values[j][k];
    if (!t) continue;
    auto I = T.unflatten(k);
    Coeff w = t;
    for (int s = 0; s < T.n && w; ++s)
      if (s != e - 1) w = f.mul(w, chi[I[static_cast<std::size_t>(s)]]);
    if (w) L[I[static_cast<std::size_t>(e - 1)]] = f.add(L[I[static_cast<std::size_t>(e - 1)]], w);
  }
  return L;
}

inline bool nonzero(const std::vector<Coeff>& v) {
  return std::any_of(v.begin(), v.end(), [](Coeff c) { return c != 0; });
}

inline void require_one_relator(const Presentation& P) {
  if (P.m() != 1) throw InputError("this analysis needs exactly one relator, found " + std::to_string(P.m()));
}

}  // namespace detail

/// Checks every nonzero chi (up to scalars, which only rescale the value by
/// a unit) for some e with a nonzero form psi -> <chi^(e-1), psi, chi^(n-e)>.
inline DemuskinTypeReport demuskin_type(const Presentation& P, int cutoff, const Budget& budget = {}) {
  detail::require_one_relator(P);
  int n = detail::require_z(P, cutoff);
  auto T = massey_tensor(P, n, std::max(cutoff, n), budget);
  double work = std::pow(static_cast<double>(P.p), static_cast<double>(P.d())) * n * static_cast<double>(T.entries());
  if (work > static_cast<double>(budget.max_entries) * 50.0)
    throw BudgetError("Demuskin-type check enumerates " + std::to_string(P.p) + "^" + std::to_string(P.d()) +
                      " classes; raise budget or lower d");
  DemuskinTypeReport rep;
  rep.n = n;
  std::vector<Coeff> chi(P.d(), 0);
  // Enumerate vectors whose first nonzero coordinate is 1.
  for (std::size_t lead = 0; lead < P.d(); ++lead) {
    std::fill(chi.begin(), chi.end(), 0);
    chi[lead] = 1;
    while (true) {
      ++rep.vectors_checked;
      bool found = false;
      for (int e = 1; e <= n && !found; ++e) found = detail::nonzero(detail::shifted_form(T, 0, chi, e));
      if (!found) {
        rep.is_demuskin_type = false;
        rep.failing_chi = chi;
        return rep;
      }
      std::size_t pos = P.d();
      while (pos-- > lead + 1) {
        if (++chi[pos] < P.p) break;
        chi[pos] = 0;
      }
      if (pos <= lead) break;
    }
  }
  rep.is_demuskin_type = true;
  return rep;
}

/// Builds V = span(chi) with chi in ker B_n and a class psi with
/// <psi, chi^(n-1)> != 0, then runs the Massey criterion with c = d-1, e = 1.
inline MildVerdict demuskin_mildness(const Presentation& P, int cutoff, const MildOptions& opt = {}) {
  detail::require_one_relator(P);
  auto type = demuskin_type(P, cutoff, opt.budget);
  if (!type.is_demuskin_type) {
    std::string chi;
    for (auto c : *type.failing_chi) chi += (chi.empty() ? "" : ",") + std::to_string(c);
    throw InputError("presentation is not of Demuskin type: every shifted Massey form vanishes at chi = (" + chi + ")");
  }
  const int n = type.n;
  PrimeField f(P.p);
  if (P.d() == 1) {
    std::uint64_t q = 1;
    while (q < static_cast<std::uint64_t>(n)) q *= P.p;
    if (q != static_cast<std::uint64_t>(n))
      throw InputError("one generator with z(G) = " + std::to_string(n) + ", which is not a power of p");
    MildVerdict v;
    v.status = MildVerdict::Status::not_applicable;
    v.n = n;
    v.finite_order = q;
    v.reason = "finite cyclic group of order " + std::to_string(q);
    return v;
  }
  auto T = massey_tensor(P, n, std::max(cutoff, n), opt.budget);
  auto kernel = nullspace(bn_map(T), f);
  if (kernel.empty()) throw InvariantViolation("B_n has trivial kernel with d >= 2 and one relator");
  const auto& chi = kernel.front();
  auto form = detail::shifted_form(T, 0, chi, 1);
  std::optional<std::size_t> psi;
  for (std::size_t i = 0; i < P.d() && !psi; ++i)
    if (form[i]) psi = i;
  if (!psi) throw InvariantViolation("no psi with <psi, chi^(n-1)> != 0 for chi in ker B_n");

  DenseMatrix M(P.d(), P.d());
  std::vector<std::vector<Coeff>> rows{basis_vector(P.d(), static_cast<Letter>(*psi))};
  auto rank_with = [&](const std::vector<std::vector<Coeff>>& rs) {
    DenseMatrix A(0, 0);
    for (const auto& r : rs) A.append_row(r);
    return rank(A, f);
  };
  for (std::size_t i = 0; i < P.d() && rows.size() < P.d() - 1; ++i) {
    auto cand = rows;
    cand.push_back(basis_vector(P.d(), static_cast<Letter>(i)));
    auto with_chi = cand;
    with_chi.push_back(chi);
    if (rank_with(with_chi) == with_chi.size()) rows = std::move(cand);
  }
  rows.push_back(chi);
  for (std::size_t r = 0; r < P.d(); ++r)
    for (std::size_t k = 0; k < P.d(); ++k) M(r, k) = rows[r][k];
  return detail::check_decomposition(T, Decomposition{M, P.d() - 1, 1}, opt);
}

struct LieCheck {
  Weights tau;
  FiltrationDegree omega;
  std::optional<Poly> form;
  bool member = false;
  std::vector<std::pair<HallElement, Coeff>> coordinates;
};

struct OneRelatorReport {
  enum class Verdict { mild_coprime, mild_lie, undecided };
  Verdict verdict = Verdict::undecided;
  std::string reason;
  int z = 0;
  std::uint32_t p = 2;
  bool coprime = false;
  bool finite_cyclic = false;
  Poly initial_form{nullptr};
  std::vector<LieCheck> lie_checks;
  std::optional<PowerCommutatorSplit> split;
  std::optional<Poly> split_residual;
  std::optional<std::vector<Coeff>> bp_row;
  std::vector<std::vector<Coeff>> bp_kernel;
  std::optional<LieCheck> refiltration;
  std::optional<Letter> power_letter;
  std::optional<DemuskinTypeReport> demuskin;

  bool mild() const { return verdict != Verdict::undecided; }
};

inline std::string to_string(OneRelatorReport::Verdict v) {
  switch (v) {
    case OneRelatorReport::Verdict::mild_coprime: return "mild (z(G) prime to p)";
    case OneRelatorReport::Verdict::mild_lie: return "mild (initial form is a Lie polynomial)";
    default: return "undecided";
  }
}

namespace detail {
inline LieCheck lie_check(const GroupWord& r, const Presentation& P, const Weights& tau, int cutoff,
                          const Budget& budget) {
  auto ctx = P.context(tau);
  int max_tau = *std::max_element(tau.values().begin(), tau.values().end());
  int c = cutoff * max_tau;
  LieCheck lc{tau, omega_tau(r, ctx, c), std::nullopt, false, {}};
  if (!lc.omega.known()) return lc;
  lc.form = initial_form(r, ctx, c);
  auto mem = lie_membership(*lc.form, *lc.omega.value, budget);
  lc.member = mem.member;
  lc.coordinates = std::move(mem.coordinates);
  return lc;
}
}  // namespace detail

/// Everything the one-relator theorems need: z(G) against p, Lie membership
/// of the initial form for each weight vector, the restricted-basis split,
/// and for z(G) = p the map B_p with a weighted re-filtration diagnostic.
inline OneRelatorReport one_relator_verdict(const Presentation& P, int cutoff,
                                            const std::vector<Weights>& extra_taus = {},
                                            const Budget& budget = {}) {
  detail::require_one_relator(P);
  OneRelatorReport rep;
  rep.p = P.p;
  rep.z = detail::require_z(P, cutoff);
  rep.coprime = std::gcd(static_cast<std::uint32_t>(rep.z), P.p) == 1;
  rep.finite_cyclic = P.d() == 1;
  const auto& r = P.relators.front().word;
  auto uctx = P.uniform_context();
  rep.initial_form = initial_form(r, uctx, std::max(cutoff, rep.z));

  std::vector<Weights> taus{Weights::uniform(P.d())};
  for (const auto& t : extra_taus) {
    if (t.size() != P.d()) throw InputError("weight vector length differs from generator count");
    if (!(t == taus.front())) taus.push_back(t);
  }
  for (const auto& t : taus) rep.lie_checks.push_back(detail::lie_check(r, P, t, std::max(cutoff, rep.z), budget));

  try {
    rep.split = p_power_commutator_split(rep.initial_form, rep.z, budget);
  } catch (const NotRestrictedLie& e) {
    rep.split_residual = e.residual();
  }

  if (rep.z == static_cast<int>(P.p) && P.d() >= 2) {
    auto T = massey_tensor(P, rep.z, std::max(cutoff, rep.z), budget);
    auto B = bn_map(T);
    rep.bp_row = B.row(0);
    rep.bp_kernel = nullspace(B, PrimeField(P.p));
    for (std::size_t i = 0; i < P.d() && !rep.power_letter; ++i)
      if ((*rep.bp_row)[i]) rep.power_letter = static_cast<Letter>(i);
    if (rep.power_letter) {
      std::vector<int> w(P.d(), static_cast<int>(P.p));
      w[*rep.power_letter] = static_cast<int>(P.p) + 1;
      rep.refiltration = detail::lie_check(r, P, Weights(w), std::max(cutoff, rep.z), budget);
    }
  }

  try {
    rep.demuskin = demuskin_type(P, cutoff, budget);
  } catch (const BudgetError&) {
    rep.demuskin.reset();
  }

  if (rep.coprime) {
    rep.verdict = OneRelatorReport::Verdict::mild_coprime;
    rep.reason = "z(G) = " + std::to_string(rep.z) + " is prime to p = " + std::to_string(P.p);
    return rep;
  }
  auto lie_hit = std::find_if(rep.lie_checks.begin(), rep.lie_checks.end(), [](const LieCheck& c) { return c.member; });
  if (lie_hit != rep.lie_checks.end() || (rep.refiltration && rep.refiltration->member)) {
    const auto& hit = lie_hit != rep.lie_checks.end() ? *lie_hit : *rep.refiltration;
    std::string tau;
    for (int t : hit.tau.values()) tau += (tau.empty() ? "" : ",") + std::to_string(t);
    rep.verdict = OneRelatorReport::Verdict::mild_lie;
    rep.reason = "initial form for tau = (" + tau + ") is a Lie polynomial";
    return rep;
  }
  rep.verdict = OneRelatorReport::Verdict::undecided;
  rep.reason = "z(G) is divisible by p and no tried initial form is a Lie polynomial";
  return rep;
}

}  // namespace mildkit
