#include <gtest/gtest.h>

#include <random>

#include "mildkit/freeness.hpp"
#include "oracles.hpp"

using namespace mildkit;

namespace {

std::vector<Monomial> monos(std::initializer_list<std::vector<Letter>> ws, const Weights& tau) {
  std::vector<Monomial> v;
  for (const auto& w : ws) v.emplace_back(w, tau);
  return v;
}

Poly commutator_form(const ContextPtr& ctx, Letter a, Letter b) {
  return Poly::monomial(ctx, {a, b}) - Poly::monomial(ctx, {b, a});
}

std::vector<Poly> circuit(const ContextPtr& ctx) {
  return {commutator_form(ctx, 0, 1), commutator_form(ctx, 1, 2), commutator_form(ctx, 2, 3),
          commutator_form(ctx, 3, 0)};
}

std::vector<Poly> triangle(const ContextPtr& ctx) {
  return {commutator_form(ctx, 0, 1), commutator_form(ctx, 1, 2), commutator_form(ctx, 2, 0)};
}

std::vector<std::int64_t> coeffs(const IntSeries& s) { return s.coefficients(); }

// Random homogeneous polynomial of uniform degree n with k terms.
Poly random_form(const ContextPtr& ctx, std::mt19937_64& rng, int n, int k) {
  std::uniform_int_distribution<int> letter(0, static_cast<int>(ctx->generators()) - 1);
  std::uniform_int_distribution<std::int64_t> coeff(1, ctx->prime() - 1);
  Poly f(ctx);
  while (f.is_zero())
    for (int t = 0; t < k; ++t) {
      std::vector<Letter> w(static_cast<std::size_t>(n));
      for (auto& l : w) l = static_cast<Letter>(letter(rng));
      f += Poly::monomial(ctx, w, coeff(rng));
    }
  return f;
}

}  // namespace

TEST(CombinatorialFreeness, CircuitHighTermsAreFree) {
  Weights tau = Weights::uniform(4);
  EXPECT_TRUE(combinatorially_free(monos({{1, 0}, {1, 2}, {3, 2}, {3, 0}}, tau)).free);
}

TEST(CombinatorialFreeness, RepeatedLetterIsNotFree) {
  Weights tau = Weights::uniform(1);
  auto r = combinatorially_free(monos({{0}, {0}}, tau));
  ASSERT_FALSE(r.free);
  EXPECT_EQ(r.witness->kind, CombinatorialWitness::Kind::submonomial);
}

TEST(CombinatorialFreeness, SelfOverlapIsNotFree) {
  Weights tau = Weights::uniform(2);
  auto r = combinatorially_free(monos({{0, 1, 0}}, tau));
  ASSERT_FALSE(r.free);
  EXPECT_EQ(r.witness->kind, CombinatorialWitness::Kind::overlap);
  EXPECT_EQ(r.witness->i, 0u);
  EXPECT_EQ(r.witness->j, 0u);
  EXPECT_EQ(r.witness->position, 1u);
  EXPECT_NE(r.witness->describe().find("prefix"), std::string::npos);
}

TEST(CombinatorialFreeness, EmptyMonomialIsAnInputError) {
  Weights tau = Weights::uniform(2);
  EXPECT_THROW(combinatorially_free(monos({{}}, tau)), InputError);
  EXPECT_TRUE(combinatorially_free(std::vector<Monomial>{}).free);
}

TEST(CombinatorialFreeness, AgreesWithStringOracle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(1, 4), len(1, 4), letter(0, 2);
  Weights tau = Weights::uniform(3);
  for (int t = 0; t < 2000; ++t) {
    std::vector<oracle::Word> ws(static_cast<std::size_t>(count(rng)));
    std::vector<Monomial> ms;
    for (auto& w : ws) {
      w.resize(static_cast<std::size_t>(len(rng)));
      for (auto& l : w) l = letter(rng);
      ms.emplace_back(std::vector<Letter>(w.begin(), w.end()), tau);
    }
    EXPECT_EQ(combinatorially_free(ms).free, oracle::combinatorially_free(ws));
  }
}

TEST(Anick, CircuitIsProvenUnderPermutedDeglex) {
  auto ctx = make_context(3, 4);
  auto v = anick_check(circuit(ctx), MonomialOrder::deglex(ctx->weights, {0, 2, 1, 3}));
  ASSERT_TRUE(v.proven());
  EXPECT_EQ(v.engine, FreenessVerdict::Engine::anick);
  std::vector<std::vector<Letter>> hts;
  for (const auto& m : v.certificate->high_terms) hts.push_back(m.word());
  EXPECT_EQ(hts, (std::vector<std::vector<Letter>>{{1, 0}, {1, 2}, {3, 2}, {3, 0}}));
}

TEST(Anick, SquaresPlusFourthPowerIsInconclusive) {
  auto ctx = make_context(2, Weights({2, 1}));
  std::vector<Poly> rho{Poly::monomial(ctx, {0, 0}) + Poly::monomial(ctx, {1, 1, 1, 1})};
  for (const auto& order : {MonomialOrder::deglex(ctx->weights), MonomialOrder::deglex(ctx->weights, {1, 0}),
                            MonomialOrder::u_order(ctx->weights, {0}), MonomialOrder::u_order(ctx->weights, {1})}) {
    auto v = anick_check(rho, order);
    EXPECT_TRUE(v.consistent());
    EXPECT_EQ(v.degree, 0);
    ASSERT_TRUE(v.obstruction.has_value());
    EXPECT_EQ(v.obstruction->kind, CombinatorialWitness::Kind::overlap);
  }
}

TEST(Anick, SingleLetterIsProven) {
  auto ctx = make_context(2, 1);
  EXPECT_TRUE(anick_check(std::vector<Poly>{Poly::generator(ctx, 0)}, MonomialOrder::deglex(ctx->weights)).proven());
}

TEST(Anick, RejectsNonHomogeneousAndConstantInput) {
  auto ctx = make_context(3, 2);
  auto order = MonomialOrder::deglex(ctx->weights);
  EXPECT_THROW(anick_check(std::vector<Poly>{Poly::generator(ctx, 0) + Poly::monomial(ctx, {0, 1})}, order),
               InputError);
  EXPECT_THROW(anick_check(std::vector<Poly>{Poly::one(ctx)}, order), InputError);
  EXPECT_THROW(anick_check(std::vector<Poly>{Poly(ctx)}, order), InputError);
}

TEST(IdealSlice, SquareInDegreeThree) {
  auto ctx = make_context(3, 2);
  std::vector<Poly> rho{Poly::monomial(ctx, {0, 0})};
  auto s = ideal_slice(ctx, rho, 3);
  EXPECT_EQ(s.basis.size(), 8u);
  EXPECT_EQ(s.rows.size(), 3u);  // X1X1X1 arises twice and is stored once
  EXPECT_EQ(s.rank(ctx->field), 3u);
}

TEST(IdealSlice, EmptySequenceAndDegreeOne) {
  auto ctx = make_context(3, 2);
  EXPECT_TRUE(ideal_slice(ctx, std::vector<Poly>{}, 3).rows.empty());
  std::vector<Poly> rho{Poly::generator(ctx, 0) + Poly::generator(ctx, 1)};
  EXPECT_EQ(ideal_slice(ctx, rho, 1).rank(ctx->field), 1u);
}

TEST(Quotient, SquareGivesFibonacci) {
  auto ctx = make_context(2, 2);
  std::vector<Poly> rho{Poly::monomial(ctx, {0, 0})};
  EXPECT_EQ(coeffs(quotient_dimensions(ctx, rho, 4)), (std::vector<std::int64_t>{1, 2, 3, 5, 8}));
  EXPECT_EQ(coeffs(quotient_dimensions(ctx, rho, 10)), oracle::avoiding_counts(2, {{0, 0}}, 10));
}

TEST(Quotient, EmptySequenceGivesFreeAlgebra) {
  auto ctx = make_context(5, 3);
  EXPECT_EQ(coeffs(quotient_dimensions(ctx, std::vector<Poly>{}, 5)),
            (std::vector<std::int64_t>{1, 3, 9, 27, 81, 243}));
}

TEST(Quotient, CircuitMatchesExtremalSeries) {
  auto ctx = make_context(3, 4);
  auto actual = quotient_dimensions(ctx, circuit(ctx), 8);
  EXPECT_EQ(coeffs(actual), oracle::invert_series({1, -4, 4}, 8));
}

TEST(Quotient, NormalFormsKillTheIdeal) {
  auto ctx = make_context(3, 3);
  auto rhos = triangle(ctx);
  GradedQuotient q(ctx, rhos);
  const int n = 4;
  for (const auto& rho : rhos)
    for (const auto& alpha : enumerate_monomials(ctx->weights, 1))
      for (const auto& beta : enumerate_monomials(ctx->weights, 1)) {
        std::map<std::uint32_t, Coeff> sum;
        for (const auto& [m, c] : rho.terms())
          for (auto [col, v] : q.normal_form((alpha * m * beta).word()))
            sum[col] = ctx->field.add(sum[col], ctx->field.mul(c, v));
        for (const auto& [col, v] : sum) EXPECT_EQ(v, 0u) << "column " << col << " in degree " << n;
      }
}

TEST(Quotient, StandardWordsReduceToThemselves) {
  auto ctx = make_context(5, 3);
  GradedQuotient q(ctx, triangle(ctx));
  const auto& std4 = q.standard_words(4);
  ASSERT_EQ(static_cast<std::int64_t>(std4.size()), q.dimension(4));
  for (std::size_t i = 0; i < std4.size(); ++i) {
    auto nf = q.normal_form(std4[i]);
    ASSERT_EQ(nf.size(), 1u);
    EXPECT_EQ(nf[0].first, i);
    EXPECT_EQ(nf[0].second, 1u);
  }
}

TEST(Quotient, BudgetIsEnforced) {
  auto ctx = make_context(3, 3);
  Budget tiny{10};
  EXPECT_THROW(quotient_dimensions_by_slices(ctx, triangle(ctx), 4, tiny), BudgetError);
  EXPECT_THROW(quotient_dimensions(ctx, triangle(ctx), 6, tiny), BudgetError);
}

TEST(Oracle, WeightedFormIsConsistentToTwelve) {
  auto ctx = make_context(2, Weights({2, 1}));
  std::vector<Poly> rho{Poly::monomial(ctx, {0, 0}) + Poly::monomial(ctx, {1, 1, 1, 1})};
  auto v = strongly_free_oracle(ctx, rho, 12);
  EXPECT_TRUE(v.consistent());
  EXPECT_EQ(v.degree, 12);
  EXPECT_EQ(*v.actual, *v.target);
}

TEST(Oracle, SquareIsRefutedByDegreeFive) {
  auto ctx = make_context(2, 2);
  std::vector<Poly> rho{Poly::monomial(ctx, {0, 0})};
  auto v = strongly_free_oracle(ctx, rho, 5);
  ASSERT_TRUE(v.refuted());
  EXPECT_LE(v.degree, 5);
  // Fibonacci against n + 1: 5 vs 4 at degree 3, 8 vs 5 at degree 4.
  EXPECT_EQ((*v.actual)[3], 5);
  EXPECT_EQ((*v.target)[3], 4);
  EXPECT_EQ((*v.actual)[4], 8);
  EXPECT_EQ((*v.target)[4], 5);
  EXPECT_EQ(v.degree, 3);
  EXPECT_EQ(v.witness, 1);
}

TEST(Oracle, TriangleIsRefutedBySix) {
  auto ctx = make_context(3, 3);
  auto v = strongly_free_oracle(ctx, triangle(ctx), 6);
  ASSERT_TRUE(v.refuted());
  EXPECT_LE(v.degree, 6);
  EXPECT_GT(v.witness, 0);
}

TEST(Oracle, CircuitIsConsistent) {
  auto ctx = make_context(3, 4);
  EXPECT_TRUE(strongly_free_oracle(ctx, circuit(ctx), 8).consistent());
}

TEST(Admissibility, TriangleDegreesAreInadmissibleAtSix) {
  std::vector<int> sigma{2, 2, 2};
  auto a = series_admissibility(Weights::uniform(3), sigma, 6);
  EXPECT_FALSE(a.admissible);
  EXPECT_EQ(a.degree, 6);
  EXPECT_EQ(a.coefficient, -27);
}

TEST(Admissibility, CircuitDegreesAreAdmissible) {
  std::vector<int> sigma{2, 2, 2, 2};
  auto a = series_admissibility(Weights::uniform(4), sigma, 10);
  EXPECT_TRUE(a.admissible);
  EXPECT_EQ(a.series.coefficients(), oracle::invert_series({1, -4, 4}, 10));
}

TEST(Admissibility, OneGeneratorNoRelationsIsGeometric) {
  auto a = series_admissibility(Weights::uniform(1), std::vector<int>{}, 7);
  EXPECT_TRUE(a.admissible);
  EXPECT_EQ(a.series.coefficients(), std::vector<std::int64_t>(8, 1));
}

// Both quotient engines agree, every oracle run satisfies the series
// inequality, and monomial ideals match brute-force word counting.
TEST(FreenessProperty, EnginesAgreeOnRandomForms) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> m(1, 3), deg(2, 3), terms(1, 3);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int t = 0; t < 15; ++t) {
      auto ctx = make_context(p, 3);
      std::vector<Poly> rhos;
      int k = m(rng);
      for (int i = 0; i < k; ++i) rhos.push_back(random_form(ctx, rng, deg(rng), terms(rng)));
      auto fast = quotient_dimensions(ctx, rhos, 5);
      EXPECT_EQ(fast, quotient_dimensions_by_slices(ctx, rhos, 5));
      EXPECT_NO_THROW(strongly_free_oracle(ctx, rhos, 5));
    }
  }
}

TEST(FreenessProperty, MonomialIdealsMatchWordCounting) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> m(1, 3), len(1, 3), letter(0, 1);
  auto ctx = make_context(2, 2);
  for (int t = 0; t < 40; ++t) {
    std::vector<oracle::Word> ws(static_cast<std::size_t>(m(rng)));
    std::vector<Poly> rhos;
    for (auto& w : ws) {
      w.resize(static_cast<std::size_t>(len(rng)));
      for (auto& l : w) l = letter(rng);
      rhos.push_back(Poly::monomial(ctx, std::vector<Letter>(w.begin(), w.end())));
    }
    EXPECT_EQ(coeffs(quotient_dimensions(ctx, rhos, 8)), oracle::avoiding_counts(2, ws, 8));
  }
}

// P(t) (1 - sum t^tau + sum t^sigma) - 1 has no negative coefficient for any
// quotient by homogeneous forms.
TEST(FreenessProperty, GolodShafarevichProductIsNonnegative) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> m(1, 4), deg(2, 4), terms(1, 4);
  const int N = 6;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int t = 0; t < 15; ++t) {
      auto ctx = make_context(p, 3);
      std::vector<Poly> rhos;
      std::vector<std::int64_t> g(N + 1, 0);
      g[0] = 1;
      g[1] = -3;
      int k = m(rng);
      for (int i = 0; i < k; ++i) {
        int n = deg(rng);
        rhos.push_back(random_form(ctx, rng, n, terms(rng)));
        if (n <= N) g[static_cast<std::size_t>(n)] += 1;
      }
      auto prod = series_mul(quotient_dimensions(ctx, rhos, N), IntSeries(g));
      EXPECT_EQ(prod[0], 1);
      for (int n = 1; n <= N; ++n) EXPECT_GE(prod[static_cast<std::size_t>(n)], 0) << "n=" << n;
    }
  }
}
