#pragma once

// Command layer behind the mildkit executable. Each command turns options
// into an Outcome holding a JSON payload and a text rendering; run_command
// wraps it in the output envelope and maps failures to exit codes.
//
// Exit codes: 0 computed, 1 negative verdict under --strict, 2 input error,
// 3 budget or precision exhausted, 4 internal invariant violated.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mildkit/mildkit.hpp"

namespace mildkit::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kNegative = 1, kInput = 2, kResource = 3, kInternal = 4 };

struct Options {
  std::string file;
  std::optional<int> degree;
  std::optional<int> cutoff;
  std::vector<int> tau;
  std::string order;
  std::optional<int> e;
  std::string subset;
  bool search = false;
  std::vector<std::string> bases;
  int verify_degree = 8;
  std::string tuple;
  std::optional<int> massey_order;
  std::string relator;
  int d = 0;
  int n = 0;
  std::optional<std::uint32_t> p;
  std::vector<int> sigma;
  std::vector<std::string> extra_taus;
  bool json = false;
  bool strict = false;
  Budget budget;
};

struct Outcome {
  json inputs = json::object();
  json result = json::object();
  json certificate = nullptr;
  std::ostringstream text;
  bool negative = false;
  // Set by verdict-bearing commands: the verdict reads the relators only
  // through their initial forms, so any representative with the same
  // initial forms gets the same verdict.
  bool initial_form_only = false;
};

// ---------------------------------------------------------------- helpers

inline json poly_json(const Poly& f) {
  json terms = json::array();
  for (const auto& [m, c] : f.terms()) {
    json word = json::array();
    for (Letter l : m.letters()) word.push_back(l + 1);
    terms.push_back({{"word", word}, {"monomial", m.to_string()}, {"coefficient", f.field().signed_value(c)}});
  }
  return {{"text", f.to_string()}, {"terms", terms}};
}

inline json series_json(const IntSeries& s) { return json(s.coefficients()); }

inline json tau_json(const Weights& w) { return json(w.values()); }

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline std::string tau_text(const Weights& w) {
  std::vector<std::string> v;
  for (int t : w.values()) v.push_back(std::to_string(t));
  return "(" + join(v, ",") + ")";
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> v;
  for (const auto& tok : split_list(s)) {
    try {
      std::size_t used = 0;
      int x = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      v.push_back(x);
    } catch (const std::logic_error&) {
      throw InputError(std::string("invalid integer '") + tok + "' in " + what);
    }
  }
  return v;
}

/// "1 0 0; 0 1 0; 0 0 1" -> d x d matrix over F_p.
inline DenseMatrix parse_matrix(const std::string& s, std::size_t d, const PrimeField& f) {
  std::vector<std::string> rows;
  std::string cur;
  for (char c : s) {
    if (c == ';') {
      rows.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  rows.push_back(cur);
  if (rows.size() != d) throw InputError("basis matrix needs " + std::to_string(d) + " rows separated by ';'");
  DenseMatrix M(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    auto v = parse_ints(rows[r], "basis matrix");
    if (v.size() != d) throw InputError("basis matrix row " + std::to_string(r + 1) + " needs " + std::to_string(d) + " entries");
    for (std::size_t c = 0; c < d; ++c) M(r, c) = f.reduce(v[c]);
  }
  return M;
}

inline json matrix_json(const DenseMatrix& M, const PrimeField& f) {
  json rows = json::array();
  for (std::size_t r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < M.cols(); ++c) row.push_back(f.signed_value(M(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline std::string vector_text(const std::vector<Coeff>& v) {
  std::vector<std::string> s;
  for (auto c : v) s.push_back(std::to_string(c));
  return "(" + join(s, ",") + ")";
}

inline Presentation load(const Options& o) {
  if (o.file.empty()) throw InputError("a presentation file is required");
  return load_presentation(o.file);
}

inline Weights weights_for(const Presentation& P, const Options& o) {
  if (o.tau.empty()) return P.weights;
  if (o.tau.size() != P.d())
    throw InputError("--tau needs " + std::to_string(P.d()) + " entries, got " + std::to_string(o.tau.size()));
  return Weights(o.tau);
}

/// max(8, 2 z). z is probed at degrees 8, 16, 32, 64 while d^degree stays
/// below 2^20, since expansions are dense in the worst case.
inline int default_cutoff(const Presentation& P) {
  if (P.m() == 0) return 8;
  for (int probe = 8; probe <= 64; probe *= 2) {
    if (probe > 8 && std::pow(static_cast<double>(P.d()), probe) > 1048576.0) break;
    auto z = zassenhaus_invariant(P, probe);
    if (z.known()) return std::max(8, 2 * *z.value);
  }
  return 8;
}

inline void echo_presentation(Outcome& out, const Presentation& P, const Options& o, const Weights& tau, int cutoff) {
  json rel = json::array();
  for (const auto& r : P.relators) rel.push_back({{"name", r.name}, {"word", format_word(r.word, P.names)}});
  out.inputs = {{"file", o.file}, {"p", P.p},           {"d", P.d()},
                {"generators", P.names}, {"tau", tau_json(tau)}, {"cutoff", cutoff},
                {"relators", rel}};
  out.text << "presentation: " << o.file << "  p = " << P.p << ", d = " << P.d() << ", tau = " << tau_text(tau)
           << ", cutoff N = " << cutoff << "\n";
}

inline int pick_cutoff(const Presentation& P, const Options& o, const Weights& tau) {
  if (o.cutoff) {
    if (*o.cutoff < 1) throw InputError("--cutoff must be >= 1");
    return *o.cutoff;
  }
  return default_cutoff(P) * *std::max_element(tau.values().begin(), tau.values().end());
}

inline std::vector<Poly> initial_forms(const Presentation& P, const Weights& tau, int cutoff) {
  auto ctx = P.context(tau);
  std::vector<Poly> forms;
  for (const auto& r : P.relators) forms.push_back(initial_form(r.word, ctx, cutoff));
  return forms;
}

inline json freeness_json(const FreenessVerdict& v, const std::vector<std::string>& names) {
  json j = {{"status", to_string(v.status)},
            {"engine", v.engine == FreenessVerdict::Engine::anick ? "anick" : "oracle"}};
  if (v.refuted()) {
    j["degree"] = v.degree;
    j["witness"] = v.witness;
  } else if (v.consistent()) {
    j["degree"] = v.degree;
  }
  if (v.certificate) {
    json hts = json::array();
    for (const auto& m : v.certificate->high_terms) hts.push_back(m.to_string());
    j["order"] = v.certificate->order.describe(names);
    j["high_terms"] = hts;
  }
  if (v.obstruction) j["obstruction"] = v.obstruction->describe();
  if (v.actual) j["actual"] = series_json(*v.actual);
  if (v.target) j["target"] = series_json(*v.target);
  return j;
}

inline std::string freeness_text(const FreenessVerdict& v) {
  switch (v.status) {
    case FreenessVerdict::Status::proven_strongly_free: return "proven strongly free";
    case FreenessVerdict::Status::refuted:
      return "refuted at degree " + std::to_string(v.degree) + " (defect coefficient " + std::to_string(v.witness) + ")";
    default:
      if (v.engine == FreenessVerdict::Engine::anick) return "inconclusive for this order";
      return "consistent to degree " + std::to_string(v.degree) + " (evidence, not proof)";
  }
}

inline json mild_json(const MildVerdict& v) {
  json j = {{"status", to_string(v.status)}, {"reason", v.reason}, {"n", v.n},
            {"decompositions_tried", v.decompositions_tried}};
  if (v.finite_order) j["finite_order"] = *v.finite_order;
  return j;
}

inline json mild_certificate_json(const MildVerdict& v, const PrimeField& f, const std::vector<std::string>& names) {
  if (!v.certificate) return nullptr;
  const auto& c = *v.certificate;
  json forms = json::array();
  for (const auto& p : c.forms) forms.push_back(poly_json(p));
  json hts = json::array();
  for (const auto& m : c.high_terms) hts.push_back(m.to_string());
  json j = {{"basis_change", matrix_json(c.decomposition.basis_change, f)},
            {"c", c.decomposition.c},
            {"e", c.decomposition.e},
            {"order", c.order.describe(default_names(names.size()))},
            {"forms", forms},
            {"high_terms", hts},
            {"combinatorially_free", c.anick.proven()}};
  if (c.oracle) j["oracle"] = freeness_json(*c.oracle, names);
  return j;
}

inline void mild_text(std::ostream& os, const MildVerdict& v, const PrimeField& f) {
  os << "verdict: " << to_string(v.status) << "\n";
  os << "reason: " << v.reason << "\n";
  if (v.finite_order) os << "finite order: " << *v.finite_order << "\n";
  if (!v.certificate) return;
  const auto& c = *v.certificate;
  os << "decomposition: c = " << c.decomposition.c << ", e = " << c.decomposition.e << ", basis rows";
  for (std::size_t r = 0; r < c.decomposition.basis_change.rows(); ++r) {
    std::vector<Coeff> row = c.decomposition.basis_change.row(r);
    os << " " << vector_text(row);
  }
  os << "\n";
  os << "certificate (new coordinates X1..Xd, U = first c):\n";
  for (std::size_t i = 0; i < c.forms.size(); ++i)
    os << "  form " << i + 1 << ": " << c.forms[i].to_string() << "   high term " << c.high_terms[i].to_string()
       << "\n";
  os << "  high terms combinatorially free: " << (c.anick.proven() ? "yes" : "no") << "\n";
  if (c.oracle) os << "  Hilbert-series oracle: " << freeness_text(*c.oracle) << "\n";
  (void)f;
}

// ---------------------------------------------------------------- commands

inline void cmd_format(const Options& o, Outcome& out) {
  auto P = load(o);
  echo_presentation(out, P, o, P.weights, default_cutoff(P));
  auto text = format_presentation(P);
  out.result = {{"presentation", text}};
  out.text << text;
}

inline void cmd_expand(const Options& o, Outcome& out) {
  auto P = load(o);
  auto tau = weights_for(P, o);
  int N = o.degree.value_or(4);
  if (N < 1) throw InputError("--degree must be >= 1");
  echo_presentation(out, P, o, tau, N);
  auto ctx = P.context(tau);
  json list = json::array();
  for (const auto& r : P.relators) {
    if (!o.relator.empty() && r.name != o.relator) continue;
    auto e = expand(r.word, ctx, N);
    list.push_back({{"name", r.name}, {"expansion", poly_json(e.series)}});
    out.text << r.name << " = " << e.series.to_string() << " + O(deg > " << N << ")\n";
  }
  if (!o.relator.empty() && list.empty()) throw InputError("no relator named '" + o.relator + "'");
  out.result = {{"degree", N}, {"relators", list}};
}

inline void cmd_zassenhaus(const Options& o, Outcome& out) {
  auto P = load(o);
  int cutoff = o.cutoff.value_or(8);
  echo_presentation(out, P, o, Weights::uniform(P.d()), cutoff);
  auto z = zassenhaus_invariant(P, cutoff);
  auto ctx = P.uniform_context();
  json per = json::array();
  for (const auto& r : P.relators) {
    auto w = omega_tau(r.word, ctx, cutoff);
    per.push_back({{"name", r.name}, {"omega", w.to_string()}});
  }
  out.result = {{"z", z.known() ? json(*z.value) : json(nullptr)}, {"z_text", z.to_string()}, {"relators", per}};
  out.text << "z(G) = " << z.to_string() << "\n";
  if (!z.known())
    out.text << "every relator expands to 1 up to degree " << cutoff
             << "; raise --cutoff (a relator trivial in F is also reported this way)\n";
}

inline void cmd_initial_forms(const Options& o, Outcome& out) {
  auto P = load(o);
  auto tau = weights_for(P, o);
  int cutoff = pick_cutoff(P, o, tau);
  echo_presentation(out, P, o, tau, cutoff);
  auto ctx = P.context(tau);
  json list = json::array();
  for (const auto& r : P.relators) {
    auto w = omega_tau(r.word, ctx, cutoff);
    auto f = initial_form(r.word, ctx, cutoff);
    list.push_back({{"name", r.name}, {"omega", *w.value}, {"form", poly_json(f)}});
    out.text << r.name << ": omega = " << *w.value << ", initial form " << f.to_string() << "\n";
  }
  out.result = {{"initial_forms", list}};
}

inline void cmd_anick(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  auto tau = weights_for(P, o);
  int cutoff = pick_cutoff(P, o, tau);
  echo_presentation(out, P, o, tau, cutoff);
  auto order = parse_order(o.order.empty() ? "deglex" : o.order, P.names, tau);
  auto forms = initial_forms(P, tau, cutoff);
  auto v = anick_check(forms, order);
  out.result = {{"verdict", freeness_json(v, P.names)}};
  out.certificate = out.result["verdict"];
  out.negative = !v.proven();
  out.text << "order: " << order.describe(P.names) << "\n";
  for (std::size_t i = 0; i < forms.size(); ++i)
    out.text << "  " << P.relators[i].name << ": high term " << v.certificate->high_terms[i].to_string() << " of "
             << forms[i].to_string() << "\n";
  out.text << "verdict: " << to_string(v.status);
  if (!v.proven()) out.text << " (" << freeness_text(v) << ")";
  out.text << "\n";
  if (v.obstruction) out.text << "obstruction: " << v.obstruction->describe() << "\n";
}

inline void cmd_hilbert(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  auto tau = weights_for(P, o);
  int cutoff = pick_cutoff(P, o, tau);
  int N = o.degree.value_or(default_cutoff(P));
  if (N < 1) throw InputError("--degree must be >= 1");
  echo_presentation(out, P, o, tau, cutoff);
  auto ctx = P.context(tau);
  auto forms = initial_forms(P, tau, cutoff);
  auto actual = quotient_dimensions(ctx, forms, N, o.budget);
  std::vector<int> sigma;
  for (const auto& f : forms) sigma.push_back(f.tau_valuation().value());
  auto target = target_series(tau, sigma, N);
  auto cmp = series_compare(actual, target);
  out.result = {{"degree", N}, {"actual", series_json(actual)}, {"target", series_json(target)},
                {"comparison", to_string(cmp)}};
  out.negative = cmp != SeriesOrder::equal_to_cutoff;
  out.text << "dim (A/R)_n, n = 0.." << N << ": " << actual.to_string() << "\n";
  out.text << "target series:       " << target.to_string() << "\n";
  out.text << "actual vs target: " << to_string(cmp) << " (to degree " << N << ")\n";
}

inline void cmd_strongly_free(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  auto tau = weights_for(P, o);
  int cutoff = pick_cutoff(P, o, tau);
  int N = o.degree.value_or(default_cutoff(P));
  echo_presentation(out, P, o, tau, cutoff);
  auto ctx = P.context(tau);
  auto forms = initial_forms(P, tau, cutoff);
  auto order = parse_order(o.order.empty() ? "deglex" : o.order, P.names, tau);
  auto anick = anick_check(forms, order);
  auto oracle = strongly_free_oracle(ctx, forms, N, o.budget);
  if (anick.proven() && oracle.refuted()) throw InvariantViolation("Anick proof contradicted by the oracle");
  const auto& final = anick.proven() ? anick : oracle;
  out.result = {{"verdict", to_string(final.status)}, {"anick", freeness_json(anick, P.names)},
                {"oracle", freeness_json(oracle, P.names)}};
  out.certificate = freeness_json(final, P.names);
  out.negative = final.refuted();
  for (std::size_t i = 0; i < forms.size(); ++i)
    out.text << "  " << P.relators[i].name << ": " << forms[i].to_string() << "\n";
  out.text << "Anick (" << order.describe(P.names) << "): " << freeness_text(anick) << "\n";
  out.text << "oracle to degree " << N << ": " << freeness_text(oracle) << "\n";
  if (oracle.actual) out.text << "  actual: " << oracle.actual->to_string() << "\n  target: " << oracle.target->to_string() << "\n";
  out.text << "verdict: " << to_string(final.status);
  if (final.consistent()) out.text << " (N = " << final.degree << ")";
  out.text << "\n";
}

inline void cmd_mild(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  int cutoff = o.cutoff.value_or(default_cutoff(P));
  echo_presentation(out, P, o, Weights::uniform(P.d()), cutoff);
  PrimeField f(P.p);
  MildOptions mo{o.verify_degree, o.budget};
  MildVerdict v;
  if (o.search || o.subset.empty()) {
    SearchOptions so{{}, mo};
    for (const auto& b : o.bases) so.extra_bases.push_back(parse_matrix(b, P.d(), f));
    v = search_mild(P, cutoff, so);
    out.inputs["mode"] = "search";
  } else {
    DenseMatrix B = o.bases.empty() ? identity_matrix(P.d()) : parse_matrix(o.bases.front(), P.d(), f);
    if (o.bases.size() > 1) throw InputError("an explicit decomposition takes at most one --basis");
    std::vector<std::size_t> u;
    for (const auto& name : split_list(o.subset)) u.push_back(detail::letter_by_name(name, P.names));
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    std::vector<std::size_t> perm = u;
    for (std::size_t i = 0; i < P.d(); ++i)
      if (std::find(u.begin(), u.end(), i) == u.end()) perm.push_back(i);
    DenseMatrix M(P.d(), P.d());
    for (std::size_t r = 0; r < P.d(); ++r)
      for (std::size_t k = 0; k < P.d(); ++k) M(r, k) = B(perm[r], k);
    if (P.m() == 0) {
      v = MildVerdict::not_applicable("free pro-p group (no relators): cd <= 1");
    } else {
      v = check_mild(P, Decomposition{M, u.size(), o.e.value_or(1)}, cutoff, mo);
    }
    out.inputs["mode"] = "explicit";
    out.inputs["subset"] = o.subset;
    out.inputs["e"] = o.e.value_or(1);
  }
  out.result = {{"verdict", mild_json(v)}};
  out.certificate = mild_certificate_json(v, f, P.names);
  out.negative = v.status == MildVerdict::Status::criterion_failed;
  mild_text(out.text, v, f);
}

inline void cmd_massey(const Options& o, Outcome& out) {
  auto P = load(o);
  int cutoff = o.cutoff.value_or(default_cutoff(P));
  echo_presentation(out, P, o, Weights::uniform(P.d()), cutoff);
  if (P.m() == 0) throw InputError("no relators: H^2 vanishes");
  int n = o.massey_order ? *o.massey_order : detail::require_z(P, cutoff);
  auto T = massey_tensor(P, n, std::max(cutoff, n), o.budget);
  PrimeField f(P.p);
  out.result["n"] = n;
  out.text << "Massey order n = " << n << " (values carry the sign (-1)^(n-1))\n";
  if (!o.tuple.empty()) {
    auto names = split_list(o.tuple);
    if (static_cast<int>(names.size()) != n) throw InputError("--tuple needs " + std::to_string(n) + " generators");
    std::vector<std::vector<Coeff>> xs;
    for (const auto& nm : names) xs.push_back(basis_vector(P.d(), detail::letter_by_name(nm, P.names)));
    auto val = massey_value(T, xs);
    json vj = json::array();
    for (std::size_t j = 0; j < val.size(); ++j) {
      vj.push_back({{"relator", P.relators[j].name}, {"value", f.signed_value(val[j])}});
      out.text << "<" << join(names, ",") << "> paired with " << P.relators[j].name << " = " << f.signed_value(val[j])
               << "\n";
    }
    out.result["tuple"] = names;
    out.result["values"] = vj;
  }
  json entries = json::array();
  for (std::size_t j = 0; j < T.m(); ++j)
    for (std::size_t k = 0; k < T.entries(); ++k) {
      if (!T.values[j][k]) continue;
      auto I = T.unflatten(k);
      json idx = json::array();
      for (auto l : I) idx.push_back(l + 1);
      entries.push_back({{"relator", P.relators[j].name}, {"index", idx},
                         {"value", f.signed_value(massey_sign(f, n, T.values[j][k]))}});
    }
  out.result["nonzero_values"] = entries;
  if (o.tuple.empty()) {
    out.text << "nonzero values on basis tuples:\n";
    for (const auto& en : entries) {
      std::vector<std::string> idx;
      for (const auto& i : en["index"]) idx.push_back(P.names[i.get<std::size_t>() - 1]);
      out.text << "  " << en["relator"].get<std::string>() << " <" << join(idx, ",") << "> = " << en["value"].get<long long>() << "\n";
    }
  }
  json shuffles = json::array();
  bool all_ok = true;
  for (int a = 1; a < n; ++a) {
    auto rep = check_shuffles(T, a, n - a);
    all_ok = all_ok && rep.ok();
    shuffles.push_back({{"a", a}, {"b", n - a}, {"tuples_checked", rep.tuples_checked}, {"sampled", rep.sampled},
                        {"violations", rep.violations.size()}});
  }
  out.result["shuffles"] = shuffles;
  out.text << "shuffle identities: " << (all_ok ? "hold" : "VIOLATED") << " for all splits\n";
  auto B = bn_map(T);
  out.result["bn_map"] = matrix_json(B, f);
  out.text << "B_n columns (chi_i -> <chi_i,...,chi_i>):";
  for (std::size_t r = 0; r < B.rows(); ++r) out.text << " " << vector_text(B.row(r));
  out.text << "\n";
  if (!all_ok) throw InvariantViolation("shuffle identity violated by a computed Massey tensor");
}

inline void cmd_demuskin(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  int cutoff = o.cutoff.value_or(default_cutoff(P));
  echo_presentation(out, P, o, Weights::uniform(P.d()), cutoff);
  auto t = demuskin_type(P, cutoff, o.budget);
  PrimeField f(P.p);
  out.result = {{"n", t.n}, {"is_demuskin_type", t.is_demuskin_type}, {"classes_checked", t.vectors_checked}};
  out.text << "n = z(G) = " << t.n << "\n";
  if (!t.is_demuskin_type) {
    out.result["failing_chi"] = *t.failing_chi;
    out.certificate = {{"failing_chi", *t.failing_chi}};
    out.negative = true;
    out.text << "Demuskin type: no (every shifted Massey form vanishes at chi = " << vector_text(*t.failing_chi)
             << ")\n";
    return;
  }
  out.text << "Demuskin type: yes (" << t.vectors_checked << " classes up to scalars)\n";
  auto v = demuskin_mildness(P, cutoff, MildOptions{o.verify_degree, o.budget});
  out.result["mildness"] = mild_json(v);
  out.certificate = mild_certificate_json(v, f, P.names);
  out.negative = v.status == MildVerdict::Status::criterion_failed;
  mild_text(out.text, v, f);
}

inline void cmd_hall(const Options& o, Outcome& out) {
  if (o.d < 1 || o.n < 1) throw InputError("hall needs --d >= 1 and --n >= 1");
  Weights w = o.tau.empty() ? Weights::uniform(static_cast<std::size_t>(o.d)) : Weights(o.tau);
  if (w.size() != static_cast<std::size_t>(o.d)) throw InputError("--weights needs --d entries");
  out.inputs = {{"d", o.d}, {"n", o.n}, {"tau", tau_json(w)}};
  HallBasis basis(static_cast<std::size_t>(o.d));
  json list = json::array();
  if (o.p) {
    if (!is_prime(*o.p) || *o.p >= kMaxPrime) throw InputError("--p must be a prime below 65536");
    out.inputs["p"] = *o.p;
    for (const auto& e : restricted_basis(basis, w, o.n, *o.p)) {
      list.push_back({{"element", e.to_string(*o.p)}, {"p_power", e.p_power}});
      out.text << e.to_string(*o.p) << "\n";
    }
  } else {
    for (const auto& c : hall_basis_weighted(basis, w, o.n)) {
      list.push_back({{"element", c.to_string()}, {"weight", c.weight()}});
      out.text << c.to_string() << "\n";
    }
  }
  out.result = {{"size", list.size()}, {"basis", list}};
  out.text << "size: " << list.size() << "\n";
}

inline void cmd_series_admissible(const Options& o, Outcome& out) {
  if (o.tau.empty()) throw InputError("--tau is required");
  Weights tau(o.tau);
  int N = o.degree.value_or(8);
  if (N < 0) throw InputError("--degree must be >= 0");
  for (int s : o.sigma)
    if (s < 1) throw InputError("--sigma entries must be >= 1");
  out.inputs = {{"tau", tau_json(tau)}, {"sigma", o.sigma}, {"cutoff", N}};
  auto a = series_admissibility(tau, o.sigma, N);
  out.result = {{"admissible", a.admissible}, {"series", series_json(a.series)}};
  out.text << "series: " << a.series.to_string() << "\n";
  if (a.admissible) {
    out.text << "verdict: admissible to degree " << N << "\n";
  } else {
    out.result["degree"] = a.degree;
    out.result["coefficient"] = a.coefficient;
    out.certificate = {{"degree", a.degree}, {"coefficient", a.coefficient}};
    out.negative = true;
    out.text << "verdict: inadmissible at degree " << a.degree << " (coefficient " << a.coefficient << ")\n";
  }
}

inline void cmd_one_relator(const Options& o, Outcome& out) {
  auto P = load(o);
  out.initial_form_only = true;
  int cutoff = o.cutoff.value_or(default_cutoff(P));
  echo_presentation(out, P, o, Weights::uniform(P.d()), cutoff);
  std::vector<Weights> taus;
  for (const auto& t : o.extra_taus) taus.emplace_back(parse_ints(t, "--tau-try"));
  auto rep = one_relator_verdict(P, cutoff, taus, o.budget);
  PrimeField f(P.p);
  auto check_json = [&](const LieCheck& c) {
    json j = {{"tau", tau_json(c.tau)}, {"omega", c.omega.to_string()}, {"lie_polynomial", c.member}};
    if (c.form) j["form"] = poly_json(*c.form);
    json coords = json::array();
    for (const auto& [h, v] : c.coordinates) coords.push_back({{"element", h.to_string()}, {"coefficient", f.signed_value(v)}});
    j["coordinates"] = coords;
    return j;
  };
  json checks = json::array();
  for (const auto& c : rep.lie_checks) checks.push_back(check_json(c));
  out.result = {{"verdict", to_string(rep.verdict)}, {"mild", rep.mild()}, {"reason", rep.reason},
                {"z", rep.z}, {"z_prime_to_p", rep.coprime}, {"finite_cyclic", rep.finite_cyclic},
                {"initial_form", poly_json(rep.initial_form)}, {"lie_checks", checks}};
  out.text << "z(G) = " << rep.z << (rep.coprime ? " (prime to p)" : " (divisible by p)") << "\n";
  if (rep.finite_cyclic) out.text << "one generator: G is finite cyclic of order " << rep.z << "\n";
  out.text << "initial form: " << rep.initial_form.to_string() << "\n";
  for (const auto& c : rep.lie_checks)
    out.text << "  tau " << tau_text(c.tau) << ": omega " << c.omega.to_string() << ", Lie polynomial: "
             << (c.member ? "yes" : "no") << "\n";
  if (rep.split) {
    json pw = json::array(), lp = json::array();
    for (const auto& [e, c] : rep.split->power_part) pw.push_back({{"element", e.to_string(P.p)}, {"coefficient", f.signed_value(c)}});
    for (const auto& [e, c] : rep.split->lie_part) lp.push_back({{"element", e.to_string(P.p)}, {"coefficient", f.signed_value(c)}});
    out.result["split"] = {{"power_part", pw}, {"lie_part", lp}};
    out.text << "restricted Hall split: powers " << pw.size() << " term(s), commutators " << lp.size() << " term(s)\n";
    for (const auto& t : pw) out.text << "  power " << t["element"].get<std::string>() << " * " << t["coefficient"].get<long long>() << "\n";
    for (const auto& t : lp) out.text << "  commutator " << t["element"].get<std::string>() << " * " << t["coefficient"].get<long long>() << "\n";
  } else if (rep.split_residual) {
    throw InvariantViolation("initial form outside the restricted Lie algebra: " + rep.split_residual->to_string());
  }
  if (rep.bp_row) {
    json ker = json::array();
    for (const auto& k : rep.bp_kernel) ker.push_back(k);
    out.result["bp_map"] = *rep.bp_row;
    out.result["bp_kernel"] = ker;
    out.text << "B_p row: " << vector_text(*rep.bp_row) << ", kernel dimension " << rep.bp_kernel.size() << "\n";
  }
  if (rep.refiltration) {
    out.result["refiltration"] = check_json(*rep.refiltration);
    out.text << "re-filtration tau " << tau_text(rep.refiltration->tau) << ": Lie polynomial: "
             << (rep.refiltration->member ? "yes" : "no") << "\n";
  }
  if (rep.demuskin) {
    out.result["demuskin_type"] = rep.demuskin->is_demuskin_type;
    out.text << "Demuskin type: " << (rep.demuskin->is_demuskin_type ? "yes" : "no") << "\n";
  }
  out.certificate = {{"reason", rep.reason}};
  out.negative = !rep.mild();
  out.text << "verdict: " << to_string(rep.verdict) << "\n";
}

// ---------------------------------------------------------------- dispatch

using CommandFn = std::function<void(const Options&, Outcome&)>;

inline const std::map<std::string, CommandFn>& command_table() {
  static const std::map<std::string, CommandFn> table = {
      {"format", cmd_format},           {"expand", cmd_expand},
      {"zassenhaus", cmd_zassenhaus},   {"initial-forms", cmd_initial_forms},
      {"anick", cmd_anick},             {"hilbert", cmd_hilbert},
      {"strongly-free", cmd_strongly_free}, {"mild", cmd_mild},
      {"massey", cmd_massey},           {"demuskin", cmd_demuskin},
      {"hall", cmd_hall},               {"series-admissible", cmd_series_admissible},
      {"one-relator", cmd_one_relator},
  };
  return table;
}

inline json conventions() {
  return {{"commutator", "[a,b] = a^-1 b^-1 a b"},
          {"massey_sign", "<chi_I> paired with r equals (-1)^(n-1) eps_I(r)"},
          {"indices", "generators and monomial letters are 1-based"},
          {"coefficients", "integers in (-p/2, p/2]"}};
}

/// Runs one command, writes the envelope or text to os (text-mode errors go
/// to es), and returns the exit code.
inline int run_command(const std::string& name, const Options& o, std::ostream& os, std::ostream& es) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  json err = nullptr;
  int code = kOk;
  try {
    auto it = command_table().find(name);
    if (it == command_table().end()) throw InputError("unknown command '" + name + "'");
    it->second(o, out);
    if (o.strict && out.negative) code = kNegative;
  } catch (const ParseError& e) {
    err = {{"kind", "input"}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}};
    code = kInput;
  } catch (const InputError& e) {
    err = {{"kind", "input"}, {"message", e.what()}};
    code = kInput;
  } catch (const BudgetError& e) {
    err = {{"kind", "budget"}, {"message", e.what()}};
    code = kResource;
  } catch (const PrecisionError& e) {
    err = {{"kind", "precision"}, {"message", e.what()}};
    code = kResource;
  } catch (const InvariantViolation& e) {
    err = {{"kind", "internal"}, {"message", e.what()}};
    code = kInternal;
  } catch (const std::invalid_argument& e) {
    err = {{"kind", "input"}, {"message", e.what()}};
    code = kInput;
  } catch (const Error& e) {
    err = {{"kind", "precision"}, {"message", e.what()}};
    code = kResource;
  } catch (const std::exception& e) {
    err = {{"kind", "internal"}, {"message", e.what()}};
    code = kInternal;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.json) {
    json env = {{"tool", "mildkit"}, {"command", name}, {"status", err.is_null() ? "ok" : "error"},
                {"exit_code", code}, {"inputs", out.inputs}};
    if (err.is_null()) {
      env["result"] = out.result;
      env["certificate"] = out.certificate;
      env["negative"] = out.negative;
      env["initial_form_only"] = out.initial_form_only;
    } else {
      env["error"] = err;
    }
    env["conventions"] = conventions();
    env["timing"] = {{"seconds", seconds}};
    os << env.dump(2) << "\n";
  } else if (err.is_null()) {
    os << out.text.str();
    if (out.initial_form_only) os << "note: this verdict depends only on the initial forms of the relators\n";
    os << "time: " << seconds << " s\n";
  } else {
    es << "error (" << err["kind"].get<std::string>() << "): " << err["message"].get<std::string>() << "\n";
  }
  return code;
}

}  // namespace mildkit::cli
