#ifndef FIDEST_NOISE_HPP
#define FIDEST_NOISE_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Declarative noise models for the Monte Carlo engine.
//
// Every model reduces exactly to a mixture of branches, each branch an
// ordered list of blocks of identical product states. Measurement
// outcomes are then independent per-pair, per-basis Bernoulli draws
// within a branch, and the state of unsampled pairs depends on the
// outcomes only through the branch posterior.

namespace fidest {

// One qubit pair: fidelity <Psi-|rho|Psi-> plus the probability that the
// two nodes obtain EQUAL outcomes in each Pauli basis (a match is an
// error, since |Psi-> anticorrelates in every basis). Construction
// enforces the fidelity-QBER relation: mean match probability over the
// three bases = (2/3)(1 - fidelity).
struct PairState {
  double fidelity;
  std::array<double, 3> match_prob;  // x, y, z

  PairState(double fidelity, double match_x, double match_y, double match_z);

  double mean_match_prob() const {
    return (match_prob[0] + match_prob[1] + match_prob[2]) / 3.0;
  }
};

// Werner-type state p*I/4 + (1-p)|Psi-><Psi-|: fidelity 1 - 3p/4 and
// basis-independent match probability p/2.
PairState werner_state(double p);
// |Psi-><Psi-|: fidelity 1, never matches.
PairState psi_minus_state();
// |00><00|: fidelity 0, match probabilities (1/2, 1/2, 1).
PairState zero_zero_state();
// Convex mixture w*a + (1-w)*b (the relation is linear, so it survives).
PairState mix_states(const PairState& a, const PairState& b, double weight_a);

struct StateBlock {
  long long count;
  PairState state;
};

struct NoiseBranch {
  double probability;
  std::vector<StateBlock> blocks;
};

class NoiseModel {
 public:
  static NoiseModel iid_werner(long long n_total, double error_prob);

  // good pairs occupy indices 0 .. ceil(N * good_fraction) - 1
  static NoiseModel heterogeneous_block(long long n_total,
                                        double good_fraction,
                                        const PairState& good_state,
                                        const PairState& bad_state);

  // Two equiprobable branches h/l; in branch x the first N*q^(x) pairs
  // are werner(p_good) and the rest werner(p_bad). Degree of
  // heterogeneity and correlation: d = p_bad - p_good.
  static NoiseModel correlated_mixture(long long n_total, double p_good,
                                       double p_bad, double q_high,
                                       double q_low);

  long long n_total() const { return n_total_; }
  const std::string& variant() const { return variant_; }
  const std::vector<NoiseBranch>& branches() const { return branches_; }

  const PairState& state_of(int branch, long long pair_index) const;
  // mean fidelity over all N pairs of one branch
  double branch_mean_fidelity(int branch) const;

 private:
  NoiseModel(std::string variant, long long n_total,
             std::vector<NoiseBranch> branches);

  std::string variant_;
  long long n_total_;
  std::vector<NoiseBranch> branches_;
};

// Parse a model from its JSON description:
//
//   {"variant": "iid_werner", "n_total": 10000,
//    "parameters": {"error_prob": 0.2}}
//   {"variant": "heterogeneous_block", "n_total": 10000,
//    "parameters": {"good_fraction": 0.9,
//                   "good_state": {"type": "psi_minus"},
//                   "bad_state":  {"type": "zero_zero"}}}
//   {"variant": "correlated_mixture", "n_total": 10000,
//    "parameters": {"p_good": 0.0, "p_bad": 1.0,
//                   "q_high": 0.81, "q_low": 0.79}}
//
// States may also be {"type": "werner", "p": ...} or
// {"type": "custom", "fidelity": ..., "match_x": ..., "match_y": ...,
//  "match_z": ...}.
//
// Violations raise ConfigError with a JSON-pointer-style path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

NoiseModel noise_model_from_json(const nlohmann::json& doc);
NoiseModel load_noise_model(const std::string& path);

}  // namespace fidest

#endif  // FIDEST_NOISE_HPP
