// Command-line front end: argument parsing only; the work happens in
// mildkit/commands.hpp.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mildkit/commands.hpp"

namespace {

using mildkit::cli::Options;

void add_common(CLI::App* sub, Options& o, bool needs_file) {
  if (needs_file) sub->add_option("file", o.file, "presentation file")->required()->check(CLI::ExistingFile);
  sub->add_flag("--json", o.json, "emit one JSON document");
  sub->add_flag("--strict", o.strict, "exit 1 on a negative verdict");
}

void add_cutoff(CLI::App* sub, Options& o) {
  sub->add_option("--cutoff", o.cutoff, "truncation degree of Magnus expansions (default max(8, 2 z))");
}

void add_tau(CLI::App* sub, Options& o) {
  sub->add_option("--tau", o.tau, "generator weights, overriding the file")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mildkit: Magnus expansions, Massey products and mildness of pro-p presentations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mildkit 1.0"));
  Options o;

  auto* fmt = app.add_subcommand("format", "parse a presentation file and print it normalized");
  add_common(fmt, o, true);

  auto* expand = app.add_subcommand("expand", "Magnus expansion of each relator");
  add_common(expand, o, true);
  expand->add_option("--degree", o.degree, "truncation degree (default 4)");
  expand->add_option("--relator", o.relator, "only this relator");
  add_tau(expand, o);

  auto* zass = app.add_subcommand("zassenhaus", "Zassenhaus invariant z(G)");
  add_common(zass, o, true);
  zass->add_option("--cutoff", o.cutoff, "truncation degree (default 8)");

  auto* init = app.add_subcommand("initial-forms", "weighted initial forms of the relators");
  add_common(init, o, true);
  add_cutoff(init, o);
  add_tau(init, o);

  auto* anick = app.add_subcommand("anick", "Anick's high-term criterion");
  add_common(anick, o, true);
  add_cutoff(anick, o);
  add_tau(anick, o);
  anick->add_option("--order", o.order, "deglex[:x1<x3<..] or u-order:U=x1,x2[;x1<x2<..]");

  auto* hilbert = app.add_subcommand("hilbert", "Poincare series of A/(initial forms) against the target");
  add_common(hilbert, o, true);
  add_cutoff(hilbert, o);
  add_tau(hilbert, o);
  hilbert->add_option("--degree", o.degree, "series degree N");

  auto* sf = app.add_subcommand("strongly-free", "Anick criterion plus Hilbert-series oracle");
  add_common(sf, o, true);
  add_cutoff(sf, o);
  add_tau(sf, o);
  sf->add_option("--degree", o.degree, "oracle degree N");
  sf->add_option("--order", o.order, "monomial order for the Anick check");

  auto* mild = app.add_subcommand("mild", "Massey-product mildness criterion");
  add_common(mild, o, true);
  add_cutoff(mild, o);
  mild->add_flag("--search", o.search, "search coordinate decompositions (default without --subset)");
  mild->add_option("--subset", o.subset, "generators spanning U, e.g. x1,x2");
  mild->add_option("--e", o.e, "number of leading U slots (default 1)");
  mild->add_option("--basis", o.bases, "basis change rows, e.g. \"1 0;1 1\" (repeatable with --search)");
  mild->add_option("--verify-degree", o.verify_degree, "oracle degree for the certificate (0 skips)");

  auto* massey = app.add_subcommand("massey", "Massey product tensor, shuffle identities and B_n");
  add_common(massey, o, true);
  add_cutoff(massey, o);
  massey->add_option("--tuple", o.tuple, "basis tuple, e.g. x1,x3,x3");
  massey->add_option("--order", o.massey_order, "tuple length n (default z(G))");

  auto* dem = app.add_subcommand("demuskin", "Demuskin-type test and the resulting mildness verdict");
  add_common(dem, o, true);
  add_cutoff(dem, o);
  dem->add_option("--verify-degree", o.verify_degree, "oracle degree for the certificate (0 skips)");

  auto* hall = app.add_subcommand("hall", "Hall commutator basis");
  add_common(hall, o, false);
  hall->add_option("--d", o.d, "number of generators")->required();
  hall->add_option("--n", o.n, "degree")->required();
  hall->add_option("--p", o.p, "prime: list the restricted basis instead");
  hall->add_option("--weights", o.tau, "generator weights")->delimiter(',');

  auto* adm = app.add_subcommand("series-admissible", "look for negative coefficients in the target series");
  add_common(adm, o, false);
  adm->add_option("--tau", o.tau, "generator weights")->delimiter(',')->required();
  adm->add_option("--sigma", o.sigma, "relator degrees")->delimiter(',');
  adm->add_option("--degree", o.degree, "series degree N (default 8)");

  auto* one = app.add_subcommand("one-relator", "one-relator mildness report");
  add_common(one, o, true);
  add_cutoff(one, o);
  one->add_option("--tau-try", o.extra_taus, "extra weight vector to test, e.g. 2,1 (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : mildkit::cli::kInput;
  }

  try {
    o.budget = mildkit::Budget::from_env();
  } catch (const mildkit::InputError& e) {
    std::cerr << "error (input): " << e.what() << "\n";
    return mildkit::cli::kInput;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return mildkit::cli::run_command(name, o, std::cout, std::cerr);
}
