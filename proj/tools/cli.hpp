#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/fuzz.hpp"

namespace dyadic::cli {

enum class OutputFormat { JsonLines, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

struct CommandConfig {
  std::string subcommand;

  std::optional<double> p, f, F, L, b, a, k;
  std::vector<double> L_values;        ///< explicit levels (verify-lemma41)
  std::vector<double> L_factors;       ///< levels as multiples of f
  std::vector<double> p_values;        ///< verify-doob, verify-lemma41 sweeps
  std::vector<double> a_values;        ///< extremizer-sweep
  std::optional<std::size_t> depth, arity, n, count;
  std::uint64_t seed = kDefaultSeed;

  std::string g_path;      ///< step function CSV (length,value)
  std::string phi_path;    ///< atom function CSV on a uniform tree
  std::string write_g;     ///< extremal-g: where to write the discretized g
  std::string outer = "power:2";
  std::string inner = "const:1";

  bool extremal = false;   ///< verify-doob on discretized extremals
  std::optional<double> min_ratio;
  std::optional<double> tail_tolerance;
  std::optional<double> tolerance;

  OutputFormat format = OutputFormat::JsonLines;
  unsigned jobs = 0;  ///< 0 = available parallelism
};

/// Names of the supported subcommands.
const std::vector<std::string>& subcommands();

/// Run one command, writing records to `out` and diagnostics to `err`.
/// Returns 0 when every record passed, 1 when an invariant failed and 2 on
/// usage or precondition errors.
int run(const CommandConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dyadic::cli
