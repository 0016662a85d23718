#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "superhedge_cli/commands.hpp"

int main(int argc, char** argv) {
  using superhedge::RunConfig;
  CLI::App app{"Super-replication prices and convex-duality checks on finite markets"};
  app.require_subcommand(1);
  app.allow_extras(false);

  RunConfig cfg;
  std::string output;
  double tol = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Verification tolerance (overrides SUPERHEDGE_TOL)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Seed for generated samples")->default_val(42);
    sub->add_option("--output,-o", output, "Write the report here instead of stdout");
    sub->add_flag("--text", cfg.text, "Render the report as key: value lines");
  };
  const auto market = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--market", cfg.market, "Market JSON")->check(CLI::ExistingFile);
    if (required) o->required();
  };
  const auto claim = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--claim", cfg.claim, "Claim JSON")->check(CLI::ExistingFile);
    if (required) o->required();
  };

  auto* price = app.add_subcommand("price", "Primal and dual super-replication price of a claim");
  market(price, true);
  claim(price, true);
  price->add_option("--cone-choice", cfg.cone_choice, "C_U, K_U or K_adm")
      ->check(CLI::IsMember({"C_U", "K_U", "K_adm"}));
  price->add_option("--bound", cfg.bound, "Admissibility bound L for K_adm");

  auto* dual = app.add_subcommand("dual", "Supremum of E_Q[X] over separating measures");
  market(dual, true);
  claim(dual, true);

  auto* duality = app.add_subcommand("verify-duality", "Check the polar-cone identities");
  market(duality, true);

  auto* repr = app.add_subcommand("verify-representation",
                                  "Compare C_U membership with the sampled-measure test");
  market(repr, true);
  claim(repr, false);
  repr->add_option("--samples", cfg.samples, "Number of random claims")->default_val(100);

  auto* util = app.add_subcommand("utility-check", "Inada, elasticity, conjugate and growth report");
  util->add_option("--utility", cfg.utility, "Utility JSON or CSV")->required()->check(CLI::ExistingFile);
  util->add_option("--alpha", cfg.alpha, "Growth factor alpha > 1")->default_val(2.0);

  auto* entropy = app.add_subcommand("entropy-classify", "Loss entropy and entropy of a measure");
  entropy->add_option("--measure", cfg.measure, "Measure JSON")->required()->check(CLI::ExistingFile);
  entropy->add_option("--utility", cfg.utility, "Utility JSON or CSV")->required()->check(CLI::ExistingFile);
  market(entropy, false);
  entropy->add_option("--b", cfg.b, "Loss threshold b > 0")->default_val(1.0);

  auto* pol = app.add_subcommand("polar", "Polar cone and bipolar check");
  pol->add_option("--cone", cfg.cone, "Cone JSON")->required()->check(CLI::ExistingFile);

  auto* gap = app.add_subcommand("gap-study", "Truncated countable market: admissible price vs dual");
  gap->add_option("--levels", cfg.levels, "Truncation levels")->delimiter(',');
  gap->add_option("--bound", cfg.bound, "Admissibility bound L (default 1)");
  gap->add_option("--claim-kind", cfg.claim_kind, "unbounded or call")
      ->check(CLI::IsMember({"unbounded", "call"}));
  gap->add_option("--r", cfg.r, "Geometric weight ratio")->default_val(0.9);
  gap->add_option("--s0", cfg.s0, "Initial asset price")->default_val(2.0);

  auto* val = app.add_subcommand("validate", "Check files against the shipped schemas");
  val->add_option("inputs", cfg.inputs, "Files to validate")->required();
  market(val, false);

  for (auto* s : {price, dual, duality, repr, util, entropy, pol, gap, val}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : superhedge::kExitInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (tol > 0.0) cfg.tol = tol;

  const superhedge::RunResult r = superhedge::run(cfg);
  if (output.empty()) {
    std::cout << r.output;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return superhedge::kExitInputError;
    }
    out << r.output;
  }
  return r.exit_code;
}
