#include <gtest/gtest.h>

#include <random>

#include "mildkit/orders.hpp"

using namespace mildkit;

namespace {
Monomial mono(std::vector<Letter> w, const Weights& tau) { return Monomial(std::move(w), tau); }
}  // namespace

TEST(UOrder, FewerPrefixWeightAtOutsideLettersIsSmaller) {
  Weights tau = Weights::uniform(2);
  auto order = MonomialOrder::u_order(tau, {0});
  // X2 sits outside U at prefix degree 1 in X2X1 and 2 in X1X2.
  EXPECT_TRUE(order.compare(mono({1, 0}, tau), mono({0, 1}, tau)) < 0);
  EXPECT_EQ(order.stats(mono({1, 0}, tau)).outside_weight, 1);
  EXPECT_EQ(order.stats(mono({0, 1}, tau)).outside_weight, 2);
}

TEST(UOrder, MoreOutsideLettersIsLarger) {
  Weights tau = Weights::uniform(3);
  auto order = MonomialOrder::u_order(tau, {0, 1});
  EXPECT_TRUE(order.less(mono({0, 0, 0}, tau), mono({0, 2, 2}, tau)));
  EXPECT_TRUE(order.less(mono({1, 1, 1}, tau), mono({2, 0, 2}, tau)));
}

TEST(UOrder, ExampleFormHighTermIsX1X3Squared) {
  Weights tau = Weights::uniform(3);
  auto ctx = make_context(3, tau);
  Poly f(ctx);
  for (std::vector<Letter> w : {std::vector<Letter>{0, 0, 0}, {1, 1, 1}, {0, 2, 2}, {2, 0, 2}, {2, 2, 0}})
    f += Poly::monomial(ctx, w);
  // Two outside letters beat none; X1X3^2 has the largest prefix sum 2+3.
  EXPECT_EQ(high_term(MonomialOrder::u_order(tau, {0, 1}), f).word(), (std::vector<Letter>{0, 2, 2}));
}

TEST(Deglex, DegreeDominates) {
  Weights tau = Weights::uniform(2);
  auto order = MonomialOrder::deglex(tau);
  EXPECT_TRUE(order.compare(mono({0}, tau), mono({0, 1}, tau)) < 0);
  EXPECT_TRUE(order.compare(mono({1, 1}, tau), mono({0, 0, 0}, tau)) < 0);
}

TEST(Deglex, ComparisonIsReflexive) {
  Weights tau = Weights::uniform(3);
  for (const auto& order : {MonomialOrder::deglex(tau), MonomialOrder::u_order(tau, {1})}) {
    Monomial a = mono({2, 0, 1}, tau);
    EXPECT_EQ(order.compare(a, a), std::strong_ordering::equal);
  }
}

TEST(Deglex, WeightsChangeTheDegree) {
  Weights tau({2, 1});
  auto order = MonomialOrder::deglex(tau);
  EXPECT_TRUE(order.less(mono({0}, tau), mono({1, 1, 1}, tau)));
}

TEST(HighTerm, CircuitRelatorUnderPermutedLetters) {
  Weights tau = Weights::uniform(4);
  auto ctx = make_context(3, tau);
  auto order = MonomialOrder::deglex(tau, {0, 2, 1, 3});
  Poly rho = Poly::monomial(ctx, {1, 0}) - Poly::monomial(ctx, {0, 1});
  EXPECT_EQ(high_term(order, rho).word(), (std::vector<Letter>{1, 0}));
}

TEST(HighTerm, SingleMonomialIsItself) {
  Weights tau = Weights::uniform(2);
  auto ctx = make_context(2, tau);
  auto order = MonomialOrder::deglex(tau);
  EXPECT_EQ(high_term(order, Poly::monomial(ctx, {1, 0, 1})).word(), (std::vector<Letter>{1, 0, 1}));
  EXPECT_THROW(high_term(order, Poly(ctx)), InputError);
}

TEST(Multiplicative, DeglexAndUOrderPassRandomTrials) {
  for (const auto& tau : {Weights::uniform(3), Weights({2, 1, 3})}) {
    EXPECT_TRUE(check_multiplicative(MonomialOrder::deglex(tau), 10000, 6, 1).ok());
    EXPECT_TRUE(check_multiplicative(MonomialOrder::u_order(tau, {0}), 10000, 6, 2).ok());
    EXPECT_TRUE(check_multiplicative(MonomialOrder::u_order(tau, {0, 2}, {2, 1, 0}), 10000, 6, 3).ok());
  }
}

TEST(Multiplicative, PlainLexIsCaught) {
  auto lex = [](const Monomial& a, const Monomial& b) { return a.word() < b.word(); };
  Weights tau = Weights::uniform(2);
  auto rep = check_multiplicative(lex, tau, 10000, 4, 5);
  ASSERT_FALSE(rep.ok());
  const auto& cx = *rep.counterexample;
  EXPECT_TRUE(lex(cx.a, cx.a_prime));
  EXPECT_FALSE(lex(cx.left * cx.a * cx.right, cx.left * cx.a_prime * cx.right));
}

TEST(Multiplicative, ConcreteLexFailingTriple) {
  // X1 < X1X1 in plain lex, but right multiplication by X2 flips it:
  // X1X1X2 < X1X2.
  Weights tau = Weights::uniform(2);
  auto lex = [](const Monomial& a, const Monomial& b) { return a.word() < b.word(); };
  Monomial a = mono({0}, tau), a2 = mono({0, 0}, tau), x2 = mono({1}, tau);
  ASSERT_TRUE(lex(a, a2));
  EXPECT_TRUE(lex(a2 * x2, a * x2));
  auto deglex = MonomialOrder::deglex(tau);
  EXPECT_TRUE(deglex.less(a * x2, a2 * x2));
}

TEST(ParseOrder, ReadsDeglexAndUOrder) {
  std::vector<std::string> names{"x1", "x2", "x3", "x4"};
  Weights tau = Weights::uniform(4);
  auto o = parse_order("deglex:x1<x3<x2<x4", names, tau);
  EXPECT_EQ(o.describe(names), "deglex:x1<x3<x2<x4");
  auto u = parse_order("u-order:U=x1,x2", names, tau);
  EXPECT_EQ(u.kind(), MonomialOrder::Kind::u_order);
  EXPECT_TRUE(u.in_u(0));
  EXPECT_FALSE(u.in_u(2));
  EXPECT_EQ(parse_order(u.describe(names), names, tau).describe(names), u.describe(names));
}

TEST(ParseOrder, RejectsMalformedOrderStrings) {
  std::vector<std::string> names{"x1", "x2"};
  Weights tau = Weights::uniform(2);
  EXPECT_THROW(parse_order("lex", names, tau), InputError);
  EXPECT_THROW(parse_order("deglex:x1<x1", names, tau), InputError);
  EXPECT_THROW(parse_order("deglex:x1", names, tau), InputError);
  EXPECT_THROW(parse_order("deglex:x1<y", names, tau), InputError);
  EXPECT_THROW(parse_order("u-order:x1", names, tau), InputError);
}

// Total order property: exactly one of a<b, a=b, a>b, and transitivity on
// random triples.
TEST(OrderProperty, TotalAndTransitive) {
  std::mt19937_64 rng(21);
  Weights tau({1, 2, 1});
  std::uniform_int_distribution<int> len(0, 5), letter(0, 2);
  auto rnd = [&] {
    std::vector<Letter> w(static_cast<std::size_t>(len(rng)));
    for (auto& l : w) l = static_cast<Letter>(letter(rng));
    return Monomial(w, tau);
  };
  for (const auto& order : {MonomialOrder::deglex(tau), MonomialOrder::u_order(tau, {1})}) {
    for (int t = 0; t < 3000; ++t) {
      Monomial a = rnd(), b = rnd(), c = rnd();
      EXPECT_EQ(order.compare(a, b) == 0, a == b);
      EXPECT_EQ(order.less(a, b), order.compare(b, a) > 0);
      if (order.less(a, b) && order.less(b, c)) {
        EXPECT_TRUE(order.less(a, c));
      }
    }
  }
}

// The high term of a product is the product of the high terms.
TEST(OrderProperty, HighTermIsMultiplicative) {
  std::mt19937_64 rng(22);
  Weights tau = Weights::uniform(3);
  auto ctx = make_context(5, tau);
  std::uniform_int_distribution<int> len(1, 3), letter(0, 2), coeff(1, 4);
  auto rnd = [&] {
    Poly f(ctx);
    while (f.is_zero())
      for (int t = 0; t < 3; ++t) {
        std::vector<Letter> w(static_cast<std::size_t>(len(rng)));
        for (auto& l : w) l = static_cast<Letter>(letter(rng));
        f += Poly::monomial(ctx, w, coeff(rng));
      }
    return f;
  };
  for (const auto& order : {MonomialOrder::deglex(tau, {2, 0, 1}), MonomialOrder::u_order(tau, {0, 1})}) {
    for (int t = 0; t < 200; ++t) {
      Poly a = rnd(), b = rnd();
      EXPECT_EQ(high_term(order, a * b), high_term(order, a) * high_term(order, b));
    }
  }
}
