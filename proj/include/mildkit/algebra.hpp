#pragma once

// Exact arithmetic kernel: the prime field F_p, weighted monomials, sparse
// noncommutative polynomials in F_p<X_1..X_d>, and integer power series in
// one variable with the "first differing coefficient" total order.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mildkit/errors.hpp"

namespace mildkit {

using Letter = std::uint16_t;  // zero-based generator index
using Coeff = std::uint32_t;   // reduced residue in [0, p)

inline constexpr std::uint32_t kMaxPrime = 1u << 16;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

/// The prime field F_p. Elements are plain residues; the field object does the
/// arithmetic so that coefficients stay machine integers.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p >= kMaxPrime) throw InputError("prime " + std::to_string(p) + " exceeds 2^16");
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
  }

  std::uint32_t prime() const noexcept { return p_; }

  Coeff reduce(std::int64_t v) const noexcept {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<Coeff>(r < 0 ? r + p_ : r);
  }
  Coeff add(Coeff a, Coeff b) const noexcept { return (a + b) % p_; }
  Coeff sub(Coeff a, Coeff b) const noexcept { return (a + p_ - b) % p_; }
  Coeff neg(Coeff a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Coeff mul(Coeff a, Coeff b) const noexcept {
    return static_cast<Coeff>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Coeff pow(Coeff a, std::uint64_t e) const noexcept {
    Coeff r = 1 % p_;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Coeff inv(Coeff a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    return pow(a, p_ - 2);
  }
  // Centered representative in (-p/2, p/2], used for printing.
  std::int64_t signed_value(Coeff a) const noexcept {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a;
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

/// An element of F_p carried together with its modulus.
struct Fp {
  Coeff value = 0;
  std::uint32_t modulus = 2;
  friend bool operator==(const Fp&, const Fp&) = default;
};

/// Generator weights tau_1..tau_d, all >= 1.
class Weights {
 public:
  Weights() = default;
  explicit Weights(std::vector<int> tau) : tau_(std::move(tau)) {
    for (int t : tau_)
      if (t < 1) throw InputError("weights must be >= 1");
  }
  static Weights uniform(std::size_t d) { return Weights(std::vector<int>(d, 1)); }

  std::size_t size() const noexcept { return tau_.size(); }
  int operator[](std::size_t i) const { return tau_.at(i); }
  const std::vector<int>& values() const noexcept { return tau_; }
  bool is_uniform() const {
    return std::all_of(tau_.begin(), tau_.end(), [](int t) { return t == 1; });
  }
  int min() const { return tau_.empty() ? 1 : *std::min_element(tau_.begin(), tau_.end()); }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  std::vector<int> tau_;
};

/// A word X_{i_1}...X_{i_k} with its cached weighted degree.
class Monomial {
 public:
  Monomial() = default;
  Monomial(std::vector<Letter> letters, const Weights& w) : letters_(std::move(letters)) {
    for (Letter l : letters_) {
      if (l >= w.size()) throw InputError("monomial letter out of range");
      degree_ += w[l];
    }
  }
  static Monomial one() { return {}; }

  std::span<const Letter> letters() const noexcept { return letters_; }
  const std::vector<Letter>& word() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool is_one() const noexcept { return letters_.empty(); }
  int degree() const noexcept { return degree_; }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    r.letters_.reserve(letters_.size() + o.letters_.size());
    r.letters_.insert(r.letters_.end(), letters_.begin(), letters_.end());
    r.letters_.insert(r.letters_.end(), o.letters_.begin(), o.letters_.end());
    r.degree_ = degree_ + o.degree_;
    return r;
  }

  // Contiguous piece [pos, pos+len).
  Monomial factor(std::size_t pos, std::size_t len, const Weights& w) const {
    return Monomial(std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + len), w);
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.letters_ == b.letters_; }

  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < letters_.size();) {
      std::size_t j = i;
      while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
      if (!s.empty()) s += '*';
      s += "X" + std::to_string(letters_[i] + 1);
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    return s;
  }

 private:
  std::vector<Letter> letters_;
  int degree_ = 0;
};

/// Container order only: weighted degree, then word. Semantic orders live in
/// orders.hpp.
struct StorageLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.word() < b.word();
  }
};

struct WordHash {
  std::size_t operator()(const std::vector<Letter>& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w) h = (h ^ l) * 1099511628211ull;
    return h;
  }
};

/// Valuation of a polynomial: a nonnegative integer or +infinity (zero poly).
class Valuation {
 public:
  static Valuation finite(int v) { return Valuation(v); }
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const noexcept { return !value_; }
  int value() const {
    if (!value_) throw std::logic_error("value() of an infinite valuation");
    return *value_;
  }

  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return finite(*a.value_ + *b.value_);
  }
  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() || b.is_infinite())
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    return *a.value_ <=> *b.value_;
  }
  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  Valuation() = default;
  explicit Valuation(int v) : value_(v) {}
  std::optional<int> value_;
};

/// The ambient algebra F_p<X_1..X_d> with grading deg X_i = tau_i.
struct Context {
  PrimeField field;
  Weights weights;

  std::size_t generators() const noexcept { return weights.size(); }
  std::uint32_t prime() const noexcept { return field.prime(); }
  friend bool operator==(const Context&, const Context&) = default;
};

using ContextPtr = std::shared_ptr<const Context>;

inline ContextPtr make_context(std::uint32_t p, Weights w) {
  return std::make_shared<const Context>(Context{PrimeField(p), std::move(w)});
}
inline ContextPtr make_context(std::uint32_t p, std::size_t d) {
  return make_context(p, Weights::uniform(d));
}

/// Sparse polynomial: monomial -> nonzero coefficient.
class Poly {
 public:
  using Terms = std::map<Monomial, Coeff, StorageLess>;

  explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Poly one(ContextPtr ctx) { return constant(std::move(ctx), 1); }
  static Poly constant(ContextPtr ctx, std::int64_t c) {
    Poly r(std::move(ctx));
    r.add_term(Monomial::one(), r.field().reduce(c));
    return r;
  }
  static Poly monomial(ContextPtr ctx, std::vector<Letter> letters, std::int64_t c = 1) {
    Poly r(ctx);
    r.add_term(Monomial(std::move(letters), ctx->weights), r.field().reduce(c));
    return r;
  }
  static Poly generator(ContextPtr ctx, Letter i) { return monomial(std::move(ctx), {i}); }

  const ContextPtr& context() const noexcept { return ctx_; }
  const PrimeField& field() const noexcept { return ctx_->field; }
  const Weights& weights() const noexcept { return ctx_->weights; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coeff coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }
  Coeff coefficient(const std::vector<Letter>& letters) const {
    return coefficient(Monomial(letters, weights()));
  }

  // Adds c*m in place, dropping the term if it cancels.
  void add_term(const Monomial& m, Coeff c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
      it->second = field().add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    require_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, field().neg(c));
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const { return scaled(field().neg(1 % field().prime())); }

  Poly scaled(Coeff c) const {
    Poly r(ctx_);
    if (c == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field().mul(v, c));
    return r;
  }

  /// Product keeping only terms of weighted degree <= max_degree.
  Poly mul_truncated(const Poly& o, int max_degree) const {
    require_same(o);
    Poly r(ctx_);
    for (const auto& [ma, ca] : terms_) {
      if (ma.degree() > max_degree) break;
      for (const auto& [mb, cb] : o.terms_) {
        if (ma.degree() + mb.degree() > max_degree) break;
        r.add_term(ma * mb, field().mul(ca, cb));
      }
    }
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.require_same(b);
    Poly r(a.ctx_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, a.field().mul(ca, cb));
    return r;
  }

  Poly truncated(int max_degree) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_) {
      if (m.degree() > max_degree) break;
      r.terms_.emplace_hint(r.terms_.end(), m, c);
    }
    return r;
  }

  Poly homogeneous_component(int n) const {
    Poly r(ctx_);
    for (const auto& [m, c] : terms_)
      if (m.degree() == n) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  /// Minimum weighted degree over the support; infinite for zero.
  Valuation tau_valuation() const {
    if (terms_.empty()) return Valuation::infinity();
    return Valuation::finite(terms_.begin()->first.degree());
  }

  int max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

  bool is_homogeneous() const {
    return !terms_.empty() && terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return *a.ctx_ == *b.ctx_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      auto v = field().signed_value(c);
      if (s.empty()) {
        if (v < 0) s += "-";
      } else {
        s += v < 0 ? " - " : " + ";
      }
      auto a = v < 0 ? -v : v;
      if (m.is_one()) {
        s += std::to_string(a);
      } else {
        if (a != 1) s += std::to_string(a) + "*";
        s += m.to_string();
      }
    }
    return s;
  }

 private:
  void require_same(const Poly& o) const {
    if (ctx_ != o.ctx_ && !(*ctx_ == *o.ctx_)) throw std::invalid_argument("polynomial context mismatch");
  }

  ContextPtr ctx_;
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Monomial& m) { return os << m.to_string(); }

/// Truncated power of a polynomial with constant term, by repeated squaring.
inline Poly pow_truncated(const Poly& base, std::uint64_t e, int max_degree) {
  Poly r = Poly::one(base.context()).truncated(max_degree);
  Poly b = base.truncated(max_degree);
  while (e) {
    if (e & 1) r = r.mul_truncated(b, max_degree);
    e >>= 1;
    if (e) b = b.mul_truncated(b, max_degree);
  }
  return r;
}

/// Inverse of a series with constant term 1, truncated at max_degree:
/// sum_k (1 - f)^k.
inline Poly inverse_truncated(const Poly& f, int max_degree) {
  const auto& one_m = Monomial::one();
  if (f.coefficient(one_m) != 1) throw std::domain_error("series inverse needs constant term 1");
  Poly q = Poly::one(f.context()) - f.truncated(max_degree);  // no constant term
  Poly r = Poly::one(f.context());
  Poly power = Poly::one(f.context());
  // q has valuation >= min weight >= 1, so at most max_degree rounds matter.
  for (int k = 1; k <= max_degree; ++k) {
    power = power.mul_truncated(q, max_degree);
    if (power.is_zero()) break;
    r += power;
  }
  return r;
}

/// Integer power series c_0 + c_1 t + ... + c_N t^N, known up to cutoff N.
class IntSeries {
 public:
  IntSeries() = default;
  explicit IntSeries(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  }
  static IntSeries one(int cutoff) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(cutoff) + 1, 0);
    c[0] = 1;
    return IntSeries(std::move(c));
  }

  int cutoff() const noexcept { return static_cast<int>(c_.size()) - 1; }
  std::int64_t operator[](std::size_t i) const { return c_.at(i); }
  const std::vector<std::int64_t>& coefficients() const noexcept { return c_; }

  friend bool operator==(const IntSeries&, const IntSeries&) = default;

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
    return os.str();
  }

 private:
  std::vector<std::int64_t> c_{1};
};

namespace detail {
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("series coefficient overflow");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("series coefficient overflow");
  return r;
}
}  // namespace detail

/// Cauchy product truncated at the smaller cutoff.
inline IntSeries series_mul(const IntSeries& a, const IntSeries& b) {
  int n = std::min(a.cutoff(), b.cutoff());
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j)
      c[i + j] = detail::checked_add(c[i + j], detail::checked_mul(a[i], b[j]));
  return IntSeries(std::move(c));
}

/// Multiplicative inverse over Z; needs c_0 = +-1.
inline IntSeries series_inverse(const IntSeries& a) {
  std::int64_t c0 = a[0];
  if (c0 != 1 && c0 != -1) throw std::domain_error("series not invertible over Z: constant term " + std::to_string(c0));
  int n = a.cutoff();
  std::vector<std::int64_t> b(static_cast<std::size_t>(n) + 1, 0);
  b[0] = c0;  // 1/c0 == c0 for c0 = +-1
  for (int k = 1; k <= n; ++k) {
    std::int64_t s = 0;
    for (int i = 1; i <= k; ++i) s = detail::checked_add(s, detail::checked_mul(a[i], b[k - i]));
    b[k] = detail::checked_mul(-s, c0);
  }
  return IntSeries(std::move(b));
}

enum class SeriesOrder { less, equal_to_cutoff, greater };

inline std::string to_string(SeriesOrder o) {
  switch (o) {
    case SeriesOrder::less: return "less";
    case SeriesOrder::greater: return "greater";
    default: return "equal-to-cutoff";
  }
}

/// f > g iff the first nonzero coefficient of f - g is positive.
inline SeriesOrder series_compare(const IntSeries& a, const IntSeries& b) {
  if (a.cutoff() != b.cutoff()) throw std::invalid_argument("series cutoff mismatch");
  for (int i = 0; i <= a.cutoff(); ++i) {
    if (a[i] < b[i]) return SeriesOrder::less;
    if (a[i] > b[i]) return SeriesOrder::greater;
  }
  return SeriesOrder::equal_to_cutoff;
}

/// The polynomial 1 - sum t^tau_i + sum t^sigma_j as a series to cutoff n.
inline IntSeries relation_polynomial(const Weights& tau, std::span<const int> sigmas, int cutoff) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(cutoff) + 1, 0);
  c[0] = 1;
  for (int t : tau.values())
    if (t <= cutoff) c[t] -= 1;
  for (int s : sigmas)
    if (s >= 0 && s <= cutoff) c[s] += 1;
  return IntSeries(std::move(c));
}

/// 1 / (1 - sum t^tau_i + sum t^sigma_j), the extremal Poincare series.
inline IntSeries target_series(const Weights& tau, std::span<const int> sigmas, int cutoff) {
  return series_inverse(relation_polynomial(tau, sigmas, cutoff));
}

/// All words of weighted degree exactly n, in length-lex order.
inline std::vector<Monomial> enumerate_monomials(const Weights& w, int n) {
  std::vector<Monomial> out;
  if (n < 0) return out;
  std::vector<Letter> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      out.emplace_back(cur, w);
      return;
    }
    for (std::size_t l = 0; l < w.size(); ++l) {
      if (w[l] > left) continue;
      cur.push_back(static_cast<Letter>(l));
      rec(left - w[l]);
      cur.pop_back();
    }
  };
  rec(n);
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.word() < b.word();
  });
  return out;
}

/// dim A_n for n = 0..cutoff: coefficients of 1/(1 - sum t^tau_i).
inline IntSeries free_algebra_series(const Weights& w, int cutoff) {
  return target_series(w, {}, cutoff);
}

}  // namespace mildkit
