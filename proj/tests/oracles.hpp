#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// the library's algorithms; words are plain integer vectors and polynomials
// are maps from words to residues.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Word = std::vector<int>;

inline bool contains_factor(const Word& w, const Word& f) {
  if (f.size() > w.size()) return false;
  for (std::size_t i = 0; i + f.size() <= w.size(); ++i)
    if (std::equal(f.begin(), f.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  return false;
}

/// Calls fn on every word of the given length over d letters.
inline void for_each_word(int d, int length, const std::function<void(const Word&)>& fn) {
  Word w(static_cast<std::size_t>(length), 0);
  while (true) {
    fn(w);
    int i = length - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == d - 1) w[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
    ++w[static_cast<std::size_t>(i)];
  }
}

/// Number of words of each length 0..N that avoid every forbidden factor.
/// For a monomial ideal this is the Hilbert series of the quotient.
inline std::vector<std::int64_t> avoiding_counts(int d, const std::vector<Word>& forbidden, int N) {
  std::vector<std::int64_t> out;
  for (int n = 0; n <= N; ++n) {
    std::int64_t c = 0;
    for_each_word(d, n, [&](const Word& w) {
      for (const auto& f : forbidden)
        if (contains_factor(w, f)) return;
      ++c;
    });
    out.push_back(c);
  }
  return out;
}

/// Reading of the definition of combinatorial freeness on strings.
inline bool combinatorially_free(const std::vector<Word>& rhos) {
  auto str = [](const Word& w) {
    std::string s;
    for (int l : w) s += static_cast<char>('a' + l);
    return s;
  };
  for (std::size_t i = 0; i < rhos.size(); ++i)
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      std::string a = str(rhos[i]), b = str(rhos[j]);
      if (i != j && b.find(a) != std::string::npos) return false;
      for (std::size_t len = 1; len < std::min(a.size(), b.size()); ++len)
        if (a.substr(0, len) == b.substr(b.size() - len)) return false;
    }
  return true;
}

inline int mobius(int n) {
  int r = 1;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Dimension of the degree-n part of the free Lie algebra on d generators.
inline std::int64_t witt(int d, int n) {
  std::int64_t s = 0;
  for (int k = 1; k <= n; ++k)
    if (n % k == 0) s += mobius(k) * ipow(d, n / k);
  return s / n;
}

/// Weighted free Lie algebra dimensions, read off the product formula
/// prod_n (1 - t^n)^{-L_n} = 1 / (1 - sum t^tau_i) by peeling factors.
inline std::vector<std::int64_t> weighted_lie_dims(const std::vector<int>& tau, int N) {
  std::vector<std::int64_t> target(static_cast<std::size_t>(N) + 1, 0), cur(static_cast<std::size_t>(N) + 1, 0);
  target[0] = 1;
  for (int n = 1; n <= N; ++n)
    for (int t : tau)
      if (t <= n) target[static_cast<std::size_t>(n)] += target[static_cast<std::size_t>(n - t)];
  cur[0] = 1;
  std::vector<std::int64_t> L(static_cast<std::size_t>(N) + 1, 0);
  for (int n = 1; n <= N; ++n) {
    L[static_cast<std::size_t>(n)] = target[static_cast<std::size_t>(n)] - cur[static_cast<std::size_t>(n)];
    // multiply cur by (1 - t^n)^{-L_n}, one geometric factor at a time
    for (std::int64_t k = 0; k < L[static_cast<std::size_t>(n)]; ++k)
      for (int i = n; i <= N; ++i) cur[static_cast<std::size_t>(i)] += cur[static_cast<std::size_t>(i - n)];
  }
  return L;
}

/// Power-series long division 1/f over Z up to degree N.
inline std::vector<std::int64_t> invert_series(const std::vector<std::int64_t>& f, int N) {
  std::vector<std::int64_t> g(static_cast<std::size_t>(N) + 1, 0);
  g[0] = 1;  // f[0] == 1 in every use
  for (int n = 1; n <= N; ++n) {
    std::int64_t s = 0;
    for (int i = 1; i <= n && i < static_cast<int>(f.size()); ++i) s += f[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(n - i)];
    g[static_cast<std::size_t>(n)] = -s;
  }
  return g;
}

/// Truncated noncommutative polynomial over F_p keyed by letter words.
struct Series {
  int p = 2;
  int cutoff = 0;
  std::map<Word, std::int64_t> c;

  void add(const Word& w, std::int64_t v) {
    if (static_cast<int>(w.size()) > cutoff) return;
    auto& x = c[w];
    x = ((x + v) % p + p) % p;
    if (x == 0) c.erase(w);
  }
  std::int64_t at(const Word& w) const {
    auto it = c.find(w);
    return it == c.end() ? 0 : it->second;
  }
  Series operator*(const Series& o) const {
    Series r{p, cutoff, {}};
    for (const auto& [a, x] : c)
      for (const auto& [b, y] : o.c) {
        if (static_cast<int>(a.size() + b.size()) > cutoff) continue;
        Word w = a;
        w.insert(w.end(), b.begin(), b.end());
        r.add(w, x * y);
      }
    return r;
  }
};

inline Series one(int p, int cutoff) {
  Series s{p, cutoff, {}};
  s.add({}, 1);
  return s;
}

/// 1 + X_i, or its inverse 1 - X_i + X_i^2 - ... for sign = -1.
inline Series letter_series(int p, int cutoff, int i, int sign) {
  Series s = one(p, cutoff);
  Word w;
  for (int k = 1; k <= cutoff; ++k) {
    w.push_back(i);
    s.add(w, sign > 0 ? (k == 1 ? 1 : 0) : (k % 2 ? -1 : 1));
  }
  return s;
}

/// A free-group word as a list of (letter, +1/-1) syllables.
using Syllables = std::vector<std::pair<int, int>>;

inline Syllables inverse(const Syllables& w) {
  Syllables r(w.rbegin(), w.rend());
  for (auto& s : r) s.second = -s.second;
  return r;
}

inline Syllables concat(std::initializer_list<Syllables> parts) {
  Syllables r;
  for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
  return r;
}

/// a^-1 b^-1 a b, letter by letter.
inline Syllables commutator(const Syllables& a, const Syllables& b) { return concat({inverse(a), inverse(b), a, b}); }

inline Syllables power(const Syllables& a, int e) {
  Syllables r;
  const Syllables base = e >= 0 ? a : inverse(a);
  for (int k = 0; k < std::abs(e); ++k) r.insert(r.end(), base.begin(), base.end());
  return r;
}

/// Magnus expansion by multiplying one letter series at a time.
inline Series magnus(const Syllables& w, int p, int cutoff) {
  Series s = one(p, cutoff);
  for (auto [l, sign] : w) s = s * letter_series(p, cutoff, l, sign);
  return s;
}

/// Lowest degree with a nonzero non-constant coefficient, 0 if none.
inline int valuation(const Series& s) {
  int best = 0;
  for (const auto& [w, x] : s.c)
    if (!w.empty() && (best == 0 || static_cast<int>(w.size()) < best)) best = static_cast<int>(w.size());
  return best;
}

/// Rank over F_p by plain Gaussian elimination on dense rows.
inline std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows, int p) {
  std::size_t r = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  auto inv = [&](std::int64_t a) {
    std::int64_t res = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) res = res * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return res;
  };
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    std::int64_t iv = inv(rows[r][c]);
    for (auto& x : rows[r]) x = x * iv % p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] % p == 0) continue;
      std::int64_t f = rows[i][c];
      for (std::size_t k = 0; k < cols; ++k) rows[i][k] = ((rows[i][k] - f * rows[r][k]) % p + p) % p;
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
