#pragma once

// Hall commutators and the restricted Hall basis, their images in the free
// associative algebra, and coordinate solves against those bases.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"
#include "mildkit/linalg.hpp"

namespace mildkit {

/// A Hall commutator: a leaf X_i or a bracket of two earlier Hall elements.
/// Elements produced by one HallBasis share subtrees and carry their rank in
/// the Hall order, so comparisons are integer comparisons.
class HallElement {
 public:
  bool is_leaf() const { return node_->left == nullptr; }
  Letter letter() const { return node_->letter; }
  HallElement left() const { return HallElement(node_->left); }
  HallElement right() const { return HallElement(node_->right); }
  int weight() const { return node_->weight; }
  std::size_t rank() const { return node_->rank; }

  int tau_degree(const Weights& w) const {
    if (is_leaf()) return w[letter()];
    return left().tau_degree(w) + right().tau_degree(w);
  }

  /// Number of leaves equal to the given letter.
  int letter_count(Letter l) const {
    if (is_leaf()) return letter() == l ? 1 : 0;
    return left().letter_count(l) + right().letter_count(l);
  }

  std::string to_string() const {
    if (is_leaf()) return "X" + std::to_string(letter() + 1);
    return "[" + left().to_string() + "," + right().to_string() + "]";
  }

  friend bool operator==(const HallElement& a, const HallElement& b) { return a.node_ == b.node_; }
  friend auto operator<=>(const HallElement& a, const HallElement& b) { return a.rank() <=> b.rank(); }

 private:
  friend class HallBasis;
  struct Node {
    Letter letter = 0;
    std::shared_ptr<const Node> left, right;
    int weight = 1;
    std::size_t rank = 0;
  };
  explicit HallElement(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Hall commutators on d letters, generated weight by weight on demand.
/// Leaves are ordered X_1 > ... > X_d; lower weight is smaller; within a
/// weight, [c1,c2] < [c1',c2'] lexicographically.
class HallBasis {
 public:
  explicit HallBasis(std::size_t d) : d_(d) {
    if (d == 0) throw InputError("Hall basis needs at least one generator");
    std::vector<HallElement> c1;
    for (std::size_t i = d; i-- > 0;) {
      auto n = std::make_shared<HallElement::Node>();
      n->letter = static_cast<Letter>(i);
      n->rank = d - 1 - i;
      c1.push_back(HallElement(n));
    }
    layers_.push_back({});
    layers_.push_back(std::move(c1));  // ascending: X_d, ..., X_1
    next_rank_ = d;
  }

  std::size_t generators() const noexcept { return d_; }

  /// C_n in ascending Hall order.
  const std::vector<HallElement>& weight(int n) {
    if (n < 1) throw InputError("Hall weight must be >= 1");
    while (static_cast<int>(layers_.size()) <= n) build(static_cast<int>(layers_.size()));
    return layers_[static_cast<std::size_t>(n)];
  }

 private:
  void build(int n) {
    struct Candidate {
      std::size_t r1, r2;
      HallElement a, b;
    };
    std::vector<Candidate> out;
    for (int n1 = n - 1; n1 >= 1; --n1) {
      int n2 = n - n1;
      for (const auto& c1 : layers_[static_cast<std::size_t>(n1)])
        for (const auto& c2 : layers_[static_cast<std::size_t>(n2)]) {
          if (!(c1.rank() > c2.rank())) continue;
          if (!c1.is_leaf() && c2.rank() < c1.right().rank()) continue;
          out.push_back({c1.rank(), c2.rank(), c1, c2});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return std::tie(x.r1, x.r2) < std::tie(y.r1, y.r2); });
    std::vector<HallElement> layer;
    for (auto& c : out) {
      auto node = std::make_shared<HallElement::Node>();
      node->left = c.a.node_;
      node->right = c.b.node_;
      node->weight = n;
      node->rank = next_rank_++;
      layer.push_back(HallElement(node));
    }
    layers_.push_back(std::move(layer));
  }

  std::size_t d_;
  std::vector<std::vector<HallElement>> layers_;
  std::size_t next_rank_ = 0;
};

inline std::vector<HallElement> hall_basis(std::size_t d, int n) { return HallBasis(d).weight(n); }

/// Hall commutators of tau-degree n, in ascending Hall order.
inline std::vector<HallElement> hall_basis_weighted(HallBasis& basis, const Weights& w, int n) {
  if (w.size() != basis.generators()) throw InputError("weights do not match the generator count");
  std::vector<HallElement> out;
  for (int k = 1; k * w.min() <= n; ++k)
    for (const auto& c : basis.weight(k))
      if (c.tau_degree(w) == n) out.push_back(c);
  return out;
}

/// (c)^{p^j}: a Hall commutator raised to a p-power in the restricted algebra.
struct RestrictedBasisElement {
  HallElement base;
  int p_power = 0;  // j

  std::uint64_t exponent(std::uint32_t p) const {
    std::uint64_t e = 1;
    for (int i = 0; i < p_power; ++i) e *= p;
    return e;
  }
  std::string to_string(std::uint32_t p) const {
    if (p_power == 0) return base.to_string();
    auto b = base.to_string();
    if (!base.is_leaf()) b = "(" + b + ")";
    return b + "^" + std::to_string(exponent(p));
  }
  friend bool operator==(const RestrictedBasisElement&, const RestrictedBasisElement&) = default;
};

/// All (c)^{p^j} with tau-degree(c) * p^j = n; j = 0 entries first.
inline std::vector<RestrictedBasisElement> restricted_basis(HallBasis& basis, const Weights& w, int n,
                                                           std::uint32_t p) {
  std::vector<RestrictedBasisElement> out;
  std::int64_t q = 1;
  for (int j = 0; q <= n; ++j, q *= p) {
    if (n % q) continue;
    for (const auto& c : hall_basis_weighted(basis, w, static_cast<int>(n / q))) out.push_back({c, j});
  }
  return out;
}

inline std::vector<RestrictedBasisElement> restricted_basis(std::size_t d, int n, std::uint32_t p,
                                                           const Weights& w) {
  HallBasis basis(d);
  return restricted_basis(basis, w, n, p);
}

/// Image in the free associative algebra: [a,b] -> ab - ba.
inline Poly expand_to_assoc(const HallElement& e, const ContextPtr& ctx) {
  if (e.is_leaf()) return Poly::generator(ctx, e.letter());
  Poly a = expand_to_assoc(e.left(), ctx);
  Poly b = expand_to_assoc(e.right(), ctx);
  return a * b - b * a;
}

inline Poly expand_to_assoc(const RestrictedBasisElement& e, const ContextPtr& ctx) {
  Poly base = expand_to_assoc(e.base, ctx);
  Poly r = Poly::one(ctx);
  for (std::uint64_t k = 0; k < e.exponent(ctx->prime()); ++k) r = r * base;
  return r;
}

namespace detail {

struct CoordinateSolve {
  std::optional<std::vector<Coeff>> coordinates;
  Poly residual;
};

// Solves f = sum x_k images[k] over the words that occur anywhere.
inline CoordinateSolve solve_in_span(const Poly& f, const std::vector<Poly>& images, const Budget& budget) {
  const auto& ctx = f.context();
  std::map<Monomial, std::size_t, StorageLess> row_of;
  for (const auto& [m, c] : f.terms()) row_of.emplace(m, 0);
  for (const auto& img : images)
    for (const auto& [m, c] : img.terms()) row_of.emplace(m, 0);
  std::vector<Monomial> words;
  for (auto& [m, idx] : row_of) {
    idx = words.size();
    words.push_back(m);
  }
  budget.require(words.size() * (images.size() + 1), "Lie coordinate solve");
  std::vector<std::vector<Coeff>> cols(images.size(), std::vector<Coeff>(words.size(), 0));
  for (std::size_t k = 0; k < images.size(); ++k)
    for (const auto& [m, c] : images[k].terms()) cols[k][row_of.at(m)] = c;
  std::vector<Coeff> target(words.size(), 0);
  for (const auto& [m, c] : f.terms()) target[row_of.at(m)] = c;
  std::vector<Coeff> residual;
  auto x = solve_columns(cols, target, ctx->field, &residual);
  Poly res(ctx);
  for (std::size_t i = 0; i < residual.size(); ++i)
    if (residual[i]) res.add_term(words[i], residual[i]);
  return {std::move(x), std::move(res)};
}

inline void require_homogeneous(const Poly& f, int n) {
  if (f.is_zero()) return;
  if (!f.is_homogeneous() || f.tau_valuation().value() != n)
    throw InputError("expected a polynomial homogeneous of degree " + std::to_string(n) + ", got " + f.to_string());
}

}  // namespace detail

struct LieMembership {
  bool member = false;
  std::vector<std::pair<HallElement, Coeff>> coordinates;  // nonzero only
  Poly residual;  // f reduced modulo the span; zero iff member
};

/// Is f, homogeneous of tau-degree n, a Lie polynomial? Solves against the
/// images of the Hall commutators of tau-degree n.
inline LieMembership lie_membership(const Poly& f, int n, const Budget& budget = {}) {
  detail::require_homogeneous(f, n);
  const auto& ctx = f.context();
  HallBasis basis(ctx->generators());
  auto hall = hall_basis_weighted(basis, ctx->weights, n);
  std::vector<Poly> images;
  for (const auto& c : hall) images.push_back(expand_to_assoc(c, ctx));
  auto solve = detail::solve_in_span(f, images, budget);
  LieMembership r{false, {}, std::move(solve.residual)};
  if (solve.coordinates) {
    r.member = true;
    for (std::size_t k = 0; k < hall.size(); ++k)
      if ((*solve.coordinates)[k]) r.coordinates.emplace_back(hall[k], (*solve.coordinates)[k]);
  }
  return r;
}

/// Raised when a polynomial lies outside the restricted Lie algebra; such a
/// polynomial cannot be the initial form of a group element.
class NotRestrictedLie : public InputError {
 public:
  explicit NotRestrictedLie(Poly residual)
      : InputError("polynomial is not in the restricted Lie algebra; residual " + residual.to_string()),
        residual_(std::move(residual)) {}
  const Poly& residual() const noexcept { return residual_; }

 private:
  Poly residual_;
};

struct PowerCommutatorSplit {
  std::vector<std::pair<RestrictedBasisElement, Coeff>> power_part;  // j >= 1
  std::vector<std::pair<RestrictedBasisElement, Coeff>> lie_part;    // j = 0
  bool is_lie() const { return power_part.empty(); }
};

/// Coordinates of f over the restricted Hall basis of degree n, split into
/// genuine p-powers and plain commutators.
inline PowerCommutatorSplit p_power_commutator_split(const Poly& f, int n, const Budget& budget = {}) {
  detail::require_homogeneous(f, n);
  const auto& ctx = f.context();
  auto basis = restricted_basis(ctx->generators(), n, ctx->prime(), ctx->weights);
  std::vector<Poly> images;
  for (const auto& b : basis) images.push_back(expand_to_assoc(b, ctx));
  auto solve = detail::solve_in_span(f, images, budget);
  if (!solve.coordinates) throw NotRestrictedLie(std::move(solve.residual));
  PowerCommutatorSplit s;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Coeff c = (*solve.coordinates)[k];
    if (!c) continue;
    (basis[k].p_power ? s.power_part : s.lie_part).emplace_back(basis[k], c);
  }
  return s;
}

}  // namespace mildkit
