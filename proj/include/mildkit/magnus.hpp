#pragma once

// Free-group words and their Magnus expansions x_i -> 1 + X_i in the
// truncated power-series algebra F_p<<X>>.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"

namespace mildkit {

/// Owning pointer with value semantics, for recursive variants.
template <class T>
class Box {
 public:
  Box(T value) : p_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *p_; }
  const T* operator->() const { return p_.get(); }
  friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

 private:
  std::unique_ptr<T> p_;
};

struct GroupWord;

struct Generator {
  Letter index = 0;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// [left, right] = left^-1 right^-1 left right.
struct Commutator {
  Box<GroupWord> left;
  Box<GroupWord> right;
  friend bool operator==(const Commutator&, const Commutator&) = default;
};

/// A parenthesized subword, so that (x1 x2)^-1 keeps its shape.
struct Subword {
  Box<GroupWord> inner;
  friend bool operator==(const Subword&, const Subword&) = default;
};

struct Factor {
  std::variant<Generator, Commutator, Subword> atom;
  std::int64_t exponent = 1;  // never zero
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// A product of factors; the empty product is the identity.
struct GroupWord {
  std::vector<Factor> factors;

  bool is_identity_word() const noexcept { return factors.empty(); }
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

namespace words {

inline GroupWord identity() { return {}; }

inline GroupWord gen(Letter i, std::int64_t exponent = 1) {
  if (exponent == 0) return identity();
  return GroupWord{{Factor{Generator{i}, exponent}}};
}

inline GroupWord commutator(GroupWord a, GroupWord b) {
  return GroupWord{{Factor{Commutator{std::move(a), std::move(b)}, 1}}};
}

inline GroupWord power(GroupWord w, std::int64_t exponent) {
  if (exponent == 0) return identity();
  return GroupWord{{Factor{Subword{std::move(w)}, exponent}}};
}

inline GroupWord product(GroupWord a, const GroupWord& b) {
  a.factors.insert(a.factors.end(), b.factors.begin(), b.factors.end());
  return a;
}

/// Structural inverse: reversed factors with negated exponents.
inline GroupWord inverse(const GroupWord& w) {
  GroupWord r;
  for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
    Factor f = *it;
    f.exponent = -f.exponent;
    r.factors.push_back(std::move(f));
  }
  return r;
}

/// Left-normed commutator [[..[w1,w2],..],wk].
inline GroupWord left_normed(const std::vector<GroupWord>& ws) {
  if (ws.empty()) return identity();
  GroupWord acc = ws.front();
  for (std::size_t i = 1; i < ws.size(); ++i) acc = commutator(std::move(acc), ws[i]);
  return acc;
}

}  // namespace words

/// Largest generator index used, plus one (0 for words without generators).
inline std::size_t letters_used(const GroupWord& w) {
  std::size_t n = 0;
  for (const auto& f : w.factors) {
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, Generator>) n = std::max<std::size_t>(n, a.index + 1u);
          else if constexpr (std::is_same_v<A, Commutator>)
            n = std::max({n, letters_used(*a.left), letters_used(*a.right)});
          else n = std::max(n, letters_used(*a.inner));
        },
        f.atom);
  }
  return n;
}

/// psi(w) with every term of tau-degree above the cutoff dropped.
struct MagnusExpansion {
  Poly series;
  int cutoff = 0;
};

namespace detail {

inline Poly raise(const Poly& base, std::int64_t e, int cutoff) {
  if (e >= 0) return pow_truncated(base, static_cast<std::uint64_t>(e), cutoff);
  // -e may not be representable for INT64_MIN; the parser never produces it.
  return pow_truncated(inverse_truncated(base, cutoff), static_cast<std::uint64_t>(-e), cutoff);
}

inline Poly expand_word(const GroupWord& w, const ContextPtr& ctx, int cutoff);

inline Poly expand_atom(const Factor& f, const ContextPtr& ctx, int cutoff) {
  return std::visit(
      [&](const auto& a) -> Poly {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, Generator>) {
          if (a.index >= ctx->generators()) throw InputError("generator index out of range");
          return (Poly::one(ctx) + Poly::generator(ctx, a.index)).truncated(cutoff);
        } else if constexpr (std::is_same_v<A, Commutator>) {
          Poly l = expand_word(*a.left, ctx, cutoff);
          Poly r = expand_word(*a.right, ctx, cutoff);
          Poly acc = inverse_truncated(l, cutoff).mul_truncated(inverse_truncated(r, cutoff), cutoff);
          return acc.mul_truncated(l, cutoff).mul_truncated(r, cutoff);
        } else {
          return expand_word(*a.inner, ctx, cutoff);
        }
      },
      f.atom);
}

inline Poly expand_word(const GroupWord& w, const ContextPtr& ctx, int cutoff) {
  Poly acc = Poly::one(ctx);
  for (const auto& f : w.factors) {
    if (f.exponent == 0) throw InputError("zero exponent in group word");
    acc = acc.mul_truncated(raise(expand_atom(f, ctx, cutoff), f.exponent, cutoff), cutoff);
  }
  return acc;
}

}  // namespace detail

inline MagnusExpansion expand(const GroupWord& w, const ContextPtr& ctx, int cutoff) {
  if (cutoff < 1) throw InputError("expansion cutoff must be >= 1");
  return {detail::expand_word(w, ctx, cutoff), cutoff};
}

/// Coefficient of X_I in psi(w) under the uniform grading.
inline Coeff epsilon(const GroupWord& w, std::span<const Letter> index, std::uint32_t p, std::size_t d) {
  for (Letter l : index)
    if (l >= d) throw InputError("multi-index entry out of range");
  auto ctx = make_context(p, d);
  int n = static_cast<int>(index.size());
  if (n == 0) return 1;
  auto e = expand(w, ctx, n);
  return e.series.coefficient(std::vector<Letter>(index.begin(), index.end()));
}

/// A filtration degree that may lie beyond the computed precision.
struct FiltrationDegree {
  std::optional<int> value;  // empty: deeper than cutoff, or trivial
  int cutoff = 0;

  bool known() const noexcept { return value.has_value(); }
  std::string to_string() const { return value ? std::to_string(*value) : ">" + std::to_string(cutoff); }
  friend bool operator==(const FiltrationDegree&, const FiltrationDegree&) = default;
};

inline FiltrationDegree omega_tau(const GroupWord& w, const ContextPtr& ctx, int cutoff) {
  auto e = expand(w, ctx, cutoff);
  Poly tail = e.series - Poly::one(ctx);
  auto v = tail.tau_valuation();
  if (v.is_infinite()) return {std::nullopt, cutoff};
  return {v.value(), cutoff};
}

/// Lowest homogeneous component of psi(w) - 1.
inline Poly initial_form(const GroupWord& w, const ContextPtr& ctx, int cutoff) {
  auto e = expand(w, ctx, cutoff);
  Poly tail = e.series - Poly::one(ctx);
  auto v = tail.tau_valuation();
  if (v.is_infinite())
    throw PrecisionError("word is trivial up to degree " + std::to_string(cutoff) +
                         "; increase precision to find its initial form");
  return tail.homogeneous_component(v.value());
}

/// Replaces every generator x_i by images[i], keeping exponents and brackets.
inline GroupWord substitute(const GroupWord& w, std::span<const GroupWord> images) {
  GroupWord out;
  for (const auto& f : w.factors) {
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, Generator>) {
            if (a.index >= images.size())
              throw InputError("substitution covers " + std::to_string(images.size()) +
                               " generators but the word uses generator " + std::to_string(a.index + 1));
            const auto& img = images[a.index];
            // Splice when no parentheses are needed, so identity
            // substitutions reproduce the word exactly.
            if (f.exponent == 1) {
              out.factors.insert(out.factors.end(), img.factors.begin(), img.factors.end());
            } else if (img.factors.size() == 1 && img.factors[0].exponent == 1) {
              Factor g = img.factors[0];
              g.exponent = f.exponent;
              out.factors.push_back(std::move(g));
            } else {
              out.factors.push_back(Factor{Subword{img}, f.exponent});
            }
          } else if constexpr (std::is_same_v<A, Commutator>) {
            out.factors.push_back(
                Factor{Commutator{substitute(*a.left, images), substitute(*a.right, images)}, f.exponent});
          } else {
            out.factors.push_back(Factor{Subword{substitute(*a.inner, images)}, f.exponent});
          }
        },
        f.atom);
  }
  return out;
}

}  // namespace mildkit
