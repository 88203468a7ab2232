#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using dyadic::cli::CommandConfig;

template <class T>
void optional_flag(CLI::App* app, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

const std::map<std::string, std::string> kDescriptions = {
    {"omega", "inverse of H_p at b"},
    {"bellman", "two-variable value, or three-variable with --L"},
    {"extremal-g", "power-law extremal for (p, f, F, L)"},
    {"verify-lemma41", "v-u identity on a CSV or fuzzed step functions"},
    {"verify-weaktype", "weak type (1,1) bound on the fuzz corpus"},
    {"verify-doob", "Doob bound on the corpus, or ratios on extremals"},
    {"bruteforce", "supremum over atom assignments on a uniform tree"},
    {"extremizer-sweep", "extremizer lower bounds against the rhs integral"},
    {"sharpness", "sequence approaching the upper branch"},
};

// Flags are shared by all subcommands; each subcommand reads the ones it needs.
void add_common(CLI::App* sub, CommandConfig& c) {
  optional_flag(sub, "--p", c.p, "exponent p > 1");
  optional_flag(sub, "--f", c.f, "integral of phi");
  optional_flag(sub, "--F", c.F, "integral of phi^p");
  optional_flag(sub, "--L", c.L, "level L");
  optional_flag(sub, "--b", c.b, "argument of omega_p, in [0, 1]");
  optional_flag(sub, "--a", c.a, "extremizer parameter in (0, 1)");
  optional_flag(sub, "--k", c.k, "measure of the subset, in (0, 1]");
  optional_flag(sub, "--depth", c.depth, "tree depth or extremizer truncation");
  optional_flag(sub, "--arity", c.arity, "arity of a uniform tree");
  optional_flag(sub, "--n", c.n, "number of sequence terms");
  optional_flag(sub, "--count", c.count, "number of fuzzed instances");
  optional_flag(sub, "--tol", c.tolerance, "override the default tolerance");
  optional_flag(sub, "--tail-tol", c.tail_tolerance, "extremizer tail tolerance");
  optional_flag(sub, "--min-ratio", c.min_ratio, "verify-doob: required lower bound on the ratio");
  sub->add_option("--L-list", c.L_values, "explicit levels L");
  sub->add_option("--L-factor", c.L_factors, "levels as multiples of f");
  sub->add_option("--p-list", c.p_values, "exponents p");
  sub->add_option("--a-list", c.a_values, "extremizer parameters");
  sub->add_option("--g", c.g_path, "step function CSV (length,value)");
  sub->add_option("--phi", c.phi_path, "atom function CSV (leaf_index,measure,value)");
  sub->add_option("--write-g", c.write_g, "extremal-g: write the discretized g here");
  sub->add_option("--outer", c.outer, "outer function: power:Q, maxpow:Q:L, identity, const:C")
      ->capture_default_str();
  sub->add_option("--inner", c.inner, "inner function, same forms as --outer")
      ->capture_default_str();
  sub->add_flag("--extremal", c.extremal, "verify-doob: use discretized extremals");
}

}  // namespace

int main(int argc, char** argv) {
  CommandConfig config;
  config.seed = dyadic::default_seed();

  CLI::App app{"Tree maximal operator and Bellman function toolkit"};
  app.require_subcommand(1);
  std::string format = "json";
  std::string output;
  app.add_option("--format", format, "json (JSON lines) or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", config.seed, "fuzz seed (default: DYADIC_SEED or 42)");
  app.add_option("--jobs", config.jobs, "worker threads, 0 = available parallelism");
  app.add_option("--output", output, "write records to this file instead of stdout");

  for (const auto& name : dyadic::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->fallthrough();
    add_common(sub, config);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dyadic::cli::kExitUsage;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  config.format = format == "csv" ? dyadic::cli::OutputFormat::Csv
                                  : dyadic::cli::OutputFormat::JsonLines;
  if (output.empty()) return dyadic::cli::run(config, std::cout, std::cerr);
  std::ofstream file(output);
  if (!file) {
    std::cerr << "error: cannot open '" << output << "' for writing\n";
    return dyadic::cli::kExitUsage;
  }
  return dyadic::cli::run(config, file, std::cerr);
}
