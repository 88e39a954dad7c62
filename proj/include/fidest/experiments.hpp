#ifndef FIDEST_EXPERIMENTS_HPP
#define FIDEST_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fidest/noise.hpp"

// Experiment drivers: each produces the underlying data series of one of
// the reference plots/tables as a flat table, deterministically for a
// fixed seed. No plotting here; render the emitted CSV/JSON externally.

namespace fidest {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Numbers are always written with 12 significant digits, so re-reading an
// emitted file and re-writing it reproduces it byte for byte.
std::string format_number(double value);
void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

struct ExperimentConfig {
  std::string id;                // fig1..fig7 or table2
  long long n_trials = 0;        // 0 = experiment default
  std::uint64_t seed = 1;
  std::map<std::string, std::string> overrides;
};

std::vector<std::string> experiment_ids();

// Runs one experiment. Unknown ids, unknown override keys and override
// values of the wrong type raise ConfigError; conditional experiments
// raise InsufficientDataError when too few trials match.
Table run_experiment(const ExperimentConfig& config);

}  // namespace fidest

#endif  // FIDEST_EXPERIMENTS_HPP
