#include "fidest/noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fidest {

namespace {

constexpr double kRelationTol = 1e-12;

// N*q with a tolerance for q values that are decimal but not binary
// round (0.81 * 10000 must give 8100, not 8101); otherwise ceil.
long long block_count(long long n_total, double fraction) {
  const double x = fraction * static_cast<double>(n_total);
  const double r = std::nearbyint(x);
  if (std::fabs(x - r) <= 1e-6 * std::fmax(1.0, std::fabs(x))) {
    return static_cast<long long>(r);
  }
  return static_cast<long long>(std::ceil(x));
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0) || !(v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
  }
}

}  // namespace

PairState::PairState(double fidelity_, double match_x, double match_y,
                     double match_z)
    : fidelity(fidelity_), match_prob{match_x, match_y, match_z} {
  check_unit(fidelity, "fidelity");
  check_unit(match_x, "match_prob");
  check_unit(match_y, "match_prob");
  check_unit(match_z, "match_prob");
  const double want = (2.0 / 3.0) * (1.0 - fidelity);
  if (std::fabs(mean_match_prob() - want) > kRelationTol) {
    throw std::invalid_argument(
        "PairState: mean match probability must equal (2/3)(1 - fidelity)");
  }
}

PairState werner_state(double p) {
  check_unit(p, "werner error probability");
  return PairState(1.0 - 0.75 * p, 0.5 * p, 0.5 * p, 0.5 * p);
}

PairState psi_minus_state() { return PairState(1.0, 0.0, 0.0, 0.0); }

PairState zero_zero_state() { return PairState(0.0, 0.5, 0.5, 1.0); }

PairState mix_states(const PairState& a, const PairState& b, double weight_a) {
  check_unit(weight_a, "mixture weight");
  const double w = weight_a;
  return PairState(w * a.fidelity + (1.0 - w) * b.fidelity,
                   w * a.match_prob[0] + (1.0 - w) * b.match_prob[0],
                   w * a.match_prob[1] + (1.0 - w) * b.match_prob[1],
                   w * a.match_prob[2] + (1.0 - w) * b.match_prob[2]);
}

NoiseModel::NoiseModel(std::string variant, long long n_total,
                       std::vector<NoiseBranch> branches)
    : variant_(std::move(variant)),
      n_total_(n_total),
      branches_(std::move(branches)) {
  if (n_total_ < 2) {
    throw std::invalid_argument("n_total must be >= 2");
  }
  for (const auto& branch : branches_) {
    long long total = 0;
    for (const auto& block : branch.blocks) {
      total += block.count;
    }
    if (total != n_total_) {
      throw std::invalid_argument("branch block counts must sum to n_total");
    }
  }
}

NoiseModel NoiseModel::iid_werner(long long n_total, double error_prob) {
  std::vector<NoiseBranch> branches{
      NoiseBranch{1.0, {StateBlock{n_total, werner_state(error_prob)}}}};
  return NoiseModel("iid_werner", n_total, std::move(branches));
}

NoiseModel NoiseModel::heterogeneous_block(long long n_total,
                                           double good_fraction,
                                           const PairState& good_state,
                                           const PairState& bad_state) {
  check_unit(good_fraction, "good_fraction");
  const long long good = block_count(n_total, good_fraction);
  std::vector<StateBlock> blocks;
  if (good > 0) {
    blocks.push_back(StateBlock{good, good_state});
  }
  if (n_total - good > 0) {
    blocks.push_back(StateBlock{n_total - good, bad_state});
  }
  std::vector<NoiseBranch> branches{NoiseBranch{1.0, std::move(blocks)}};
  return NoiseModel("heterogeneous_block", n_total, std::move(branches));
}

NoiseModel NoiseModel::correlated_mixture(long long n_total, double p_good,
                                          double p_bad, double q_high,
                                          double q_low) {
  check_unit(p_good, "p_good");
  check_unit(p_bad, "p_bad");
  check_unit(q_high, "q_high");
  check_unit(q_low, "q_low");
  if (p_good > p_bad) {
    throw std::invalid_argument("p_good must be <= p_bad");
  }
  const PairState good = werner_state(p_good);
  const PairState bad = werner_state(p_bad);
  std::vector<NoiseBranch> branches;
  for (const double q : {q_high, q_low}) {
    const long long n_good = block_count(n_total, q);
    std::vector<StateBlock> blocks;
    if (n_good > 0) {
      blocks.push_back(StateBlock{n_good, good});
    }
    if (n_total - n_good > 0) {
      blocks.push_back(StateBlock{n_total - n_good, bad});
    }
    branches.push_back(NoiseBranch{0.5, std::move(blocks)});
  }
  return NoiseModel("correlated_mixture", n_total, std::move(branches));
}

const PairState& NoiseModel::state_of(int branch, long long pair_index) const {
  const auto& blocks = branches_.at(static_cast<size_t>(branch)).blocks;
  long long offset = 0;
  for (const auto& block : blocks) {
    offset += block.count;
    if (pair_index < offset) {
      return block.state;
    }
  }
  throw std::out_of_range("pair_index out of range");
}

double NoiseModel::branch_mean_fidelity(int branch) const {
  const auto& blocks = branches_.at(static_cast<size_t>(branch)).blocks;
  double total = 0.0;
  for (const auto& block : blocks) {
    total += static_cast<double>(block.count) * block.state.fidelity;
  }
  return total / static_cast<double>(n_total_);
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& why) {
  throw ConfigError(pointer + ": " + why);
}

double require_number(const json& doc, const std::string& pointer,
                      const std::string& key) {
  if (!doc.contains(key)) {
    fail(pointer + "/" + key, "missing required field");
  }
  const auto& v = doc.at(key);
  if (!v.is_number()) {
    fail(pointer + "/" + key, "must be a number");
  }
  return v.get<double>();
}

PairState parse_state(const json& doc, const std::string& pointer) {
  if (!doc.is_object()) {
    fail(pointer, "must be an object");
  }
  if (!doc.contains("type") || !doc.at("type").is_string()) {
    fail(pointer + "/type", "must be a string");
  }
  const std::string type = doc.at("type").get<std::string>();
  try {
    if (type == "psi_minus") {
      return psi_minus_state();
    }
    if (type == "zero_zero") {
      return zero_zero_state();
    }
    if (type == "werner") {
      return werner_state(require_number(doc, pointer, "p"));
    }
    if (type == "custom") {
      return PairState(require_number(doc, pointer, "fidelity"),
                       require_number(doc, pointer, "match_x"),
                       require_number(doc, pointer, "match_y"),
                       require_number(doc, pointer, "match_z"));
    }
  } catch (const std::invalid_argument& err) {
    fail(pointer, err.what());
  }
  fail(pointer + "/type",
       "must be one of psi_minus, zero_zero, werner, custom");
}

}  // namespace

NoiseModel noise_model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    fail("", "model document must be an object");
  }
  if (!doc.contains("variant") || !doc.at("variant").is_string()) {
    fail("/variant", "must be a string");
  }
  if (!doc.contains("n_total") || !doc.at("n_total").is_number_integer()) {
    fail("/n_total", "must be an integer");
  }
  const long long n_total = doc.at("n_total").get<long long>();
  if (n_total < 2) {
    fail("/n_total", "must be >= 2");
  }
  const json params = doc.value("parameters", json::object());
  if (!params.is_object()) {
    fail("/parameters", "must be an object");
  }
  const std::string variant = doc.at("variant").get<std::string>();
  try {
    if (variant == "iid_werner") {
      return NoiseModel::iid_werner(
          n_total, require_number(params, "/parameters", "error_prob"));
    }
    if (variant == "heterogeneous_block") {
      if (!params.contains("good_state")) {
        fail("/parameters/good_state", "missing required field");
      }
      if (!params.contains("bad_state")) {
        fail("/parameters/bad_state", "missing required field");
      }
      return NoiseModel::heterogeneous_block(
          n_total, require_number(params, "/parameters", "good_fraction"),
          parse_state(params.at("good_state"), "/parameters/good_state"),
          parse_state(params.at("bad_state"), "/parameters/bad_state"));
    }
    if (variant == "correlated_mixture") {
      return NoiseModel::correlated_mixture(
          n_total, require_number(params, "/parameters", "p_good"),
          require_number(params, "/parameters", "p_bad"),
          require_number(params, "/parameters", "q_high"),
          require_number(params, "/parameters", "q_low"));
    }
  } catch (const std::invalid_argument& err) {
    fail("/parameters", err.what());
  }
  fail("/variant",
       "must be one of iid_werner, heterogeneous_block, correlated_mixture");
}

NoiseModel load_noise_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open model config: " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("model config is not valid JSON: ") +
                      err.what());
  }
  return noise_model_from_json(doc);
}

}  // namespace fidest
