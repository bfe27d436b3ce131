#pragma once

// Multiplicative total orders on monomials: weighted degree-lexicographic
// orders and the U-order, which ranks words by how many letters fall
// outside U and how far right those letters sit.

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"

namespace mildkit {

/// Statistics of a monomial relative to a subset U of the letters.
struct OrderStats {
  int outside_count = 0;  // letters not in U
  int outside_weight = 0;  // sum of prefix degrees ending at those letters
  friend bool operator==(const OrderStats&, const OrderStats&) = default;
};

class MonomialOrder {
 public:
  enum class Kind { deglex, u_order };

  /// letters_ascending lists every letter once, smallest first.
  static MonomialOrder deglex(Weights w, const std::vector<Letter>& letters_ascending) {
    return MonomialOrder(Kind::deglex, std::move(w), letters_ascending, {});
  }
  static MonomialOrder deglex(Weights w) {
    auto n = w.size();
    return deglex(std::move(w), natural(n));
  }
  static MonomialOrder u_order(Weights w, const std::vector<Letter>& u,
                               const std::vector<Letter>& letters_ascending) {
    return MonomialOrder(Kind::u_order, std::move(w), letters_ascending, u);
  }
  static MonomialOrder u_order(Weights w, const std::vector<Letter>& u) {
    auto n = w.size();
    return u_order(std::move(w), u, natural(n));
  }

  Kind kind() const noexcept { return kind_; }
  const Weights& weights() const noexcept { return weights_; }
  const std::vector<Letter>& letters_ascending() const noexcept { return ascending_; }
  bool in_u(Letter l) const { return in_u_.at(l); }

  OrderStats stats(const Monomial& m) const {
    OrderStats s;
    int prefix = 0;
    for (Letter l : m.letters()) {
      prefix += weights_[l];
      if (!in_u_[l]) {
        ++s.outside_count;
        s.outside_weight += prefix;
      }
    }
    return s;
  }

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    if (kind_ == Kind::u_order) {
      auto sa = stats(a), sb = stats(b);
      if (auto c = sa.outside_count <=> sb.outside_count; c != 0) return c;
      if (auto c = sa.outside_weight <=> sb.outside_weight; c != 0) return c;
    }
    return lex(a, b);
  }

  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  /// Order string in the CLI syntax, e.g. "deglex:x1<x3<x2<x4".
  std::string describe(const std::vector<std::string>& names) const {
    auto name = [&](Letter l) { return l < names.size() ? names[l] : "x" + std::to_string(l + 1); };
    std::string s = kind_ == Kind::deglex ? "deglex:" : "u-order:U=";
    if (kind_ == Kind::u_order) {
      bool first = true;
      for (Letter l = 0; l < in_u_.size(); ++l)
        if (in_u_[l]) {
          s += (first ? "" : ",") + name(l);
          first = false;
        }
      s += ";";
    }
    for (std::size_t i = 0; i < ascending_.size(); ++i) s += (i ? "<" : "") + name(ascending_[i]);
    return s;
  }

 private:
  MonomialOrder(Kind k, Weights w, const std::vector<Letter>& ascending, const std::vector<Letter>& u)
      : kind_(k), weights_(std::move(w)), ascending_(ascending), rank_(weights_.size(), -1),
        in_u_(weights_.size(), false) {
    if (ascending.size() != weights_.size()) throw InputError("letter order must list every generator once");
    for (std::size_t i = 0; i < ascending.size(); ++i) {
      Letter l = ascending[i];
      if (l >= rank_.size() || rank_[l] != -1) throw InputError("letter order is not a permutation");
      rank_[l] = static_cast<int>(i);
    }
    for (Letter l : u) {
      if (l >= in_u_.size()) throw InputError("U contains an unknown letter");
      in_u_[l] = true;
    }
  }

  static std::vector<Letter> natural(std::size_t n) {
    std::vector<Letter> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Letter>(i);
    return v;
  }

  // Equal weighted degree means neither word is a proper prefix of the
  // other, so the first differing position decides.
  std::strong_ordering lex(const Monomial& a, const Monomial& b) const {
    auto la = a.letters(), lb = b.letters();
    std::size_t n = std::min(la.size(), lb.size());
    for (std::size_t i = 0; i < n; ++i)
      if (la[i] != lb[i]) return rank_[la[i]] <=> rank_[lb[i]];
    if (la.size() != lb.size()) throw InvariantViolation("order tie between distinct words of equal degree");
    return std::strong_ordering::equal;
  }

  Kind kind_;
  Weights weights_;
  std::vector<Letter> ascending_;
  std::vector<int> rank_;
  std::vector<bool> in_u_;
};

/// The order-maximal monomial of a nonzero polynomial.
inline Monomial high_term(const MonomialOrder& order, const Poly& a) {
  if (a.is_zero()) throw InputError("high term of the zero polynomial");
  const Monomial* best = nullptr;
  for (const auto& [m, c] : a.terms())
    if (!best || order.less(*best, m)) best = &m;
  return *best;
}

/// A failed instance of 1 < a, or of a < a' => b a c < b a' c.
struct MultiplicativityCounterexample {
  Monomial a, a_prime, left, right;
  bool unit_clause = false;  // 1 < a failed
};

struct MultiplicativityReport {
  std::size_t trials = 0;
  std::optional<MultiplicativityCounterexample> counterexample;
  bool ok() const { return !counterexample; }
};

/// Randomized check of the two multiplicative-order axioms for any strict
/// "less" predicate on monomials over the given weights.
template <class Less>
MultiplicativityReport check_multiplicative(Less less, const Weights& w, std::size_t trials, std::size_t max_len,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, static_cast<int>(w.size()) - 1);
  auto random_word = [&](std::size_t min_len) {
    std::vector<Letter> v(std::max(min_len, len(rng)));
    for (auto& l : v) l = static_cast<Letter>(letter(rng));
    return Monomial(std::move(v), w);
  };
  MultiplicativityReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    ++rep.trials;
    Monomial a = random_word(1);
    if (!less(Monomial::one(), a)) {
      rep.counterexample = {a, a, Monomial::one(), Monomial::one(), true};
      return rep;
    }
    // Bias toward close pairs: half the time a' extends or perturbs a.
    Monomial b = random_word(0);
    if (t % 2) {
      auto v = a.word();
      if (!v.empty() && (t % 4 == 1)) v.back() = static_cast<Letter>(letter(rng));
      else v.push_back(static_cast<Letter>(letter(rng)));
      b = Monomial(std::move(v), w);
    }
    if (a == b) continue;
    Monomial lo = less(a, b) ? a : b, hi = less(a, b) ? b : a;
    Monomial l = random_word(0), r = random_word(0);
    if (!less(l * lo * r, l * hi * r)) {
      rep.counterexample = {lo, hi, l, r, false};
      return rep;
    }
  }
  return rep;
}

inline MultiplicativityReport check_multiplicative(const MonomialOrder& order, std::size_t trials, std::size_t max_len,
                                                   std::uint64_t seed) {
  return check_multiplicative([&](const Monomial& a, const Monomial& b) { return order.less(a, b); },
                              order.weights(), trials, max_len, seed);
}

namespace detail {
inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline Letter letter_by_name(const std::string& name, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Letter>(i);
  throw InputError("unknown generator '" + name + "' in order string");
}
}  // namespace detail

/// Parses "deglex", "deglex:x1<x3<x2<x4", "u-order:U=x1,x2" or
/// "u-order:U=x1,x2;x1<x2<x3".
inline MonomialOrder parse_order(std::string_view text, const std::vector<std::string>& names, const Weights& w) {
  auto colon = text.find(':');
  std::string kind = detail::trim(text.substr(0, colon));
  std::string rest = colon == std::string_view::npos ? "" : detail::trim(text.substr(colon + 1));
  auto parse_chain = [&](const std::string& chain) {
    std::vector<Letter> asc;
    if (chain.empty()) {
      for (std::size_t i = 0; i < names.size(); ++i) asc.push_back(static_cast<Letter>(i));
      return asc;
    }
    for (const auto& n : detail::split(chain, '<')) asc.push_back(detail::letter_by_name(n, names));
    return asc;
  };
  if (kind == "deglex") return MonomialOrder::deglex(w, parse_chain(rest));
  if (kind == "u-order") {
    auto parts = detail::split(rest, ';');
    if (parts.empty() || parts[0].rfind("U=", 0) != 0) throw InputError("u-order needs 'U=...'");
    std::vector<Letter> u;
    std::string members = detail::trim(parts[0].substr(2));
    if (!members.empty())
      for (const auto& n : detail::split(members, ',')) u.push_back(detail::letter_by_name(n, names));
    return MonomialOrder::u_order(w, u, parse_chain(parts.size() > 1 ? parts[1] : ""));
  }
  throw InputError("unknown order kind '" + kind + "' (expected deglex or u-order)");
}

}  // namespace mildkit
