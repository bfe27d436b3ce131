#pragma once

// Text front-end: the group-word grammar, a printer that round-trips through
// it, and presentation files.
//
//   word := term+          term := atom ('^' signed-int)?
//   atom := name | '1' | '(' word ')' | '[' word ',' word ']'
//
// Whitespace between terms is optional and '*' may separate them. Names are
// matched greedily against the declared generators, so "x1x2" reads as two
// letters when x1 and x2 are declared.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"
#include "mildkit/magnus.hpp"
#include "mildkit/orders.hpp"

namespace mildkit {

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, const std::vector<std::string>& names, std::size_t line, std::size_t column0)
      : s_(text), names_(names), line_(line), col0_(column0) {}

  GroupWord parse_all() {
    std::size_t terms = 0;
    GroupWord w = parse_word(terms);
    skip_space();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    if (terms == 0) fail("empty word");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '*')) ++pos_;
  }

  bool at_term_start() {
    skip_space();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || c == '[' || c == '1' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  GroupWord parse_word(std::size_t& terms) {
    GroupWord w;
    terms = 0;
    while (at_term_start()) {
      parse_term(w);
      ++terms;
    }
    return w;
  }

  GroupWord parse_nonempty(const char* what) {
    skip_space();
    std::size_t at = pos_, terms = 0;
    GroupWord w = parse_word(terms);
    if (terms == 0) {
      pos_ = at;
      fail(what);
    }
    return w;
  }

  void parse_term(GroupWord& w) {
    char c = s_[pos_];
    std::optional<Factor> f;
    if (c == '1') {
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("unexpected number");
    } else if (c == '(') {
      ++pos_;
      GroupWord inner = parse_nonempty("empty parentheses");
      skip_space();
      expect(')');
      f = Factor{Subword{std::move(inner)}, 1};
    } else if (c == '[') {
      ++pos_;
      GroupWord left = parse_nonempty("empty commutator entry");
      skip_space();
      expect(',');
      GroupWord right = parse_nonempty("empty commutator entry");
      skip_space();
      expect(']');
      f = Factor{Commutator{std::move(left), std::move(right)}, 1};
    } else {
      f = Factor{Generator{parse_name()}, 1};
    }
    std::int64_t e = 1;
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      e = parse_exponent();
    }
    if (!f) return;  // the identity, to any power
    f->exponent = e;
    w.factors.push_back(std::move(*f));
  }

  void expect(char c) {
    if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' before end of input");
    if (s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Letter parse_name() {
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) ++end;
    std::string_view ident = s_.substr(pos_, end - pos_);
    std::size_t best = 0;
    Letter best_letter = 0;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.size() > best && ident.substr(0, n.size()) == n) {
        best = n.size();
        best_letter = static_cast<Letter>(i);
      }
    }
    if (best == 0) fail("unknown generator '" + std::string(ident) + "'");
    pos_ += best;
    return best_letter;
  }

  std::int64_t parse_exponent() {
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    std::size_t digits_at = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      int dgt = s_[pos_] - '0';
      if (v > (std::numeric_limits<std::int64_t>::max() - dgt) / 10) {
        pos_ = digits_at;
        fail("exponent out of range");
      }
      v = v * 10 + dgt;
      ++pos_;
    }
    if (pos_ == digits_at) fail("expected an integer exponent");
    if (v == 0) {
      pos_ = digits_at;
      fail("exponent must be nonzero");
    }
    return neg ? -v : v;
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

inline void print_word(const GroupWord& w, const std::vector<std::string>& names, std::string& out);

inline void print_factor(const Factor& f, const std::vector<std::string>& names, std::string& out) {
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, Generator>) {
          out += a.index < names.size() ? names[a.index] : "x" + std::to_string(a.index + 1);
        } else if constexpr (std::is_same_v<A, Commutator>) {
          out += '[';
          print_word(*a.left, names, out);
          out += ',';
          print_word(*a.right, names, out);
          out += ']';
        } else {
          out += '(';
          print_word(*a.inner, names, out);
          out += ')';
        }
      },
      f.atom);
  if (f.exponent != 1) out += "^" + std::to_string(f.exponent);
}

inline void print_word(const GroupWord& w, const std::vector<std::string>& names, std::string& out) {
  if (w.factors.empty()) {
    out += '1';
    return;
  }
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    if (i) out += ' ';
    print_factor(w.factors[i], names, out);
  }
}

}  // namespace detail

inline GroupWord parse_word(std::string_view text, const std::vector<std::string>& names, std::size_t line = 1,
                            std::size_t column = 1) {
  return detail::WordParser(text, names, line, column).parse_all();
}

inline std::string format_word(const GroupWord& w, const std::vector<std::string>& names) {
  std::string s;
  detail::print_word(w, names, s);
  return s;
}

/// Default generator names x1..xd.
inline std::vector<std::string> default_names(std::size_t d) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < d; ++i) v.push_back("x" + std::to_string(i + 1));
  return v;
}

struct NamedRelator {
  std::string name;
  GroupWord word;
  friend bool operator==(const NamedRelator&, const NamedRelator&) = default;
};

/// G = <x_1..x_d | r_1..r_m> over F_p with generator weights.
struct Presentation {
  std::uint32_t p = 2;
  std::vector<std::string> names;
  Weights weights;
  std::vector<NamedRelator> relators;

  std::size_t d() const noexcept { return names.size(); }
  std::size_t m() const noexcept { return relators.size(); }
  ContextPtr context() const { return make_context(p, weights); }
  ContextPtr uniform_context() const { return make_context(p, d()); }
  ContextPtr context(const Weights& w) const {
    if (w.size() != d()) throw InputError("weight vector length differs from generator count");
    return make_context(p, w);
  }
  std::vector<GroupWord> words() const {
    std::vector<GroupWord> v;
    for (const auto& r : relators) v.push_back(r.word);
    return v;
  }

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.p == b.p && a.names == b.names && a.weights == b.weights && a.relators == b.relators;
  }
};

/// Rejects presentations whose relators have a nonzero degree-one part.
inline void check_minimal(const Presentation& P) {
  auto ctx = P.uniform_context();
  for (const auto& r : P.relators) {
    auto w = omega_tau(r.word, ctx, 1);
    if (w.known() && *w.value == 1)
      throw InputError("relator " + r.name +
                       " is not in the Frattini subgroup (its expansion has a degree-1 term); "
                       "the presentation is not minimal");
  }
}

inline void validate_presentation(const Presentation& P) {
  if (!is_prime(P.p) || P.p >= kMaxPrime) throw InputError("p must be a prime below 65536");
  if (P.names.empty()) throw InputError("at least one generator is required");
  if (P.weights.size() != P.names.size()) throw InputError("weights must list one value per generator");
  std::set<std::string> seen;
  for (const auto& n : P.names)
    if (!seen.insert(n).second) throw InputError("duplicate generator name '" + n + "'");
  std::set<std::string> rel;
  for (const auto& r : P.relators) {
    if (!rel.insert(r.name).second) throw InputError("duplicate relator name '" + r.name + "'");
    if (letters_used(r.word) > P.d()) throw InputError("relator " + r.name + " uses an unknown generator");
  }
  check_minimal(P);
}

/// Parses the presentation file format:
///
///   # comment
///   p: 3
///   generators: x1 x2 x3
///   weights: 1 1 1          (optional)
///   relators:
///     r1: x1^3 x2^3 [[x1,x3],x3]
inline Presentation parse_presentation(std::string_view text) {
  Presentation P;
  bool have_p = false, have_gens = false, in_relators = false;
  std::optional<std::vector<int>> weights;
  std::size_t weights_line = 0;
  std::set<std::string> relator_names;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line(raw);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto colon = line.find(':');
    std::size_t key_col = line.find_first_not_of(" \t");
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", line_no, key_col + 1);
    std::string key = detail::trim(std::string_view(line).substr(0, colon));
    std::string_view value_view = std::string_view(line).substr(colon + 1);
    std::size_t value_col = colon + 2;

    if (in_relators && key != "p" && key != "generators" && key != "weights" && key != "relators") {
      if (key.empty()) throw ParseError("relator name missing", line_no, key_col + 1);
      for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
          throw ParseError("invalid relator name '" + key + "'", line_no, key_col + 1);
      if (!relator_names.insert(key).second)
        throw ParseError("duplicate relator name '" + key + "'", line_no, key_col + 1);
      P.relators.push_back({key, parse_word(value_view, P.names, line_no, value_col)});
      continue;
    }
    std::string value = detail::trim(value_view);
    if (auto first = value_view.find_first_not_of(" \t"); first != std::string_view::npos) value_col += first;
    if (key == "p") {
      if (have_p) throw ParseError("duplicate key 'p'", line_no, key_col + 1);
      std::uint64_t v = 0;
      if (value.empty() || value.size() > 9 || value.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("p must be a positive integer", line_no, value_col);
      v = std::stoull(value);
      if (!is_prime(v) || v >= kMaxPrime) throw ParseError("p must be a prime below 65536", line_no, value_col);
      P.p = static_cast<std::uint32_t>(v);
      have_p = true;
    } else if (key == "generators") {
      if (have_gens) throw ParseError("duplicate key 'generators'", line_no, key_col + 1);
      std::istringstream is(value);
      std::string n;
      std::set<std::string> seen;
      while (is >> n) {
        bool ok = std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_';
        for (char c : n) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        if (!ok) throw ParseError("invalid generator name '" + n + "'", line_no, value_col);
        if (!seen.insert(n).second) throw ParseError("duplicate generator '" + n + "'", line_no, value_col);
        P.names.push_back(n);
      }
      if (P.names.empty()) throw ParseError("no generators listed", line_no, value_col);
      have_gens = true;
    } else if (key == "weights") {
      if (weights) throw ParseError("duplicate key 'weights'", line_no, key_col + 1);
      std::istringstream is(value);
      std::vector<int> w;
      std::string tok;
      while (is >> tok) {
        if (tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 6)
          throw ParseError("weights must be positive integers", line_no, value_col);
        int v = std::stoi(tok);
        if (v < 1) throw ParseError("weights must be >= 1", line_no, value_col);
        w.push_back(v);
      }
      weights = std::move(w);
      weights_line = line_no;
    } else if (key == "relators") {
      if (!have_gens) throw ParseError("'generators' must precede 'relators'", line_no, key_col + 1);
      if (in_relators) throw ParseError("duplicate key 'relators'", line_no, key_col + 1);
      if (!value.empty()) throw ParseError("list relators on the following lines", line_no, value_col);
      in_relators = true;
    } else {
      throw ParseError("unknown key '" + key + "'", line_no, key_col + 1);
    }
  }
  if (!have_p) throw ParseError("missing key 'p'", 1, 1);
  if (!have_gens) throw ParseError("missing key 'generators'", 1, 1);
  if (weights) {
    if (weights->size() != P.names.size())
      throw ParseError("expected " + std::to_string(P.names.size()) + " weights", weights_line, 1);
    P.weights = Weights(*weights);
  } else {
    P.weights = Weights::uniform(P.names.size());
  }
  validate_presentation(P);
  return P;
}

inline Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_presentation(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2) + " in " + path, e.line(),
                     e.column());
  }
}

/// Presentation file text that parses back to the same presentation.
inline std::string format_presentation(const Presentation& P) {
  std::string s = "p: " + std::to_string(P.p) + "\ngenerators:";
  for (const auto& n : P.names) s += " " + n;
  s += "\nweights:";
  for (int w : P.weights.values()) s += " " + std::to_string(w);
  s += "\nrelators:\n";
  for (const auto& r : P.relators) s += "  " + r.name + ": " + format_word(r.word, P.names) + "\n";
  return s;
}

}  // namespace mildkit
