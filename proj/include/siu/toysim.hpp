#ifndef SIU_TOYSIM_HPP
#define SIU_TOYSIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "siu/nbest.hpp"

namespace siu {

// A slot-factorized autoregressive recognizer: per slot, every ensemble
// member owns a softmax token distribution sharpened toward the true token.
// Context independence keeps exact enumeration trivial while the full
// posterior/beam/entropy code path is exercised unchanged.
//
// Member m's logits at slot s are
//
//   onehot(true)/max(sigma, 1e-3) + noise_scale(sigma) * z[m][s][:]
//
// with z fixed standard normals derived from (seed, m, s). noise_scale grows
// like 0.1*sigma through the working range and decays past sigma = 10, so
// member disagreement rises with difficulty while the flat-posterior limit
// sigma -> inf still tends to the uniform distribution.
struct ToyModel {
  std::vector<int> slot_sizes;  // token vocabulary size per slot
  std::vector<int> true_seq;    // one token per slot
  double sigma = 0;             // difficulty: 0 = deterministic
  std::uint64_t seed = 0;
};

// Member `member`'s token distribution at `slot`; normalized, deterministic
// in (seed, member, slot). sigma = 0 puts probability 1 on the true token.
Eigen::ArrayXd token_distribution(const ToyModel& model, int slot, int member);

// Mean of the member distributions at `slot`.
Eigen::ArrayXd averaged_distribution(const ToyModel& model, int slot, int ensemble_size);

// Breadth-B beam over slots, scored by ensemble-averaged token log-probs.
// Emitted hypotheses carry per-member realized and maximum log-probabilities
// (floored at kLogFloor) and are ordered by descending score, ties broken by
// token order. With B >= prod(slot_sizes) the result is the whole space.
std::vector<HypothesisPosterior> beam_search(const ToyModel& model, int ensemble_size,
                                             int beam_width);

struct ExactEntropy {
  double total = 0;      // -sum_y P(y) ln P(y) over the full enumeration
  double per_token = 0;  // total / L
};

// Exact sequence entropy of the ensemble-averaged distribution by full
// enumeration. Spaces above 10^6 sequences -> ConfigError.
ExactEntropy exact_entropy(const ToyModel& model, int ensemble_size);

// Samples n_draws responses from the averaged posterior and returns the mean
// slot-mode WCS against the true sequence over `scored_slots` (empty = all).
double simulate_listener(const ToyModel& model, int ensemble_size, int n_draws,
                         const std::vector<int>& scored_slots);

// Token `token` of slot `slot` rendered as a word ("a0", "b3", ...); slots
// use disjoint word sets.
std::string slot_word(int slot, int token);

// --- dataset generation -----------------------------------------------------

struct DatasetConfig {
  std::vector<int> grammar;      // slot vocabulary sizes
  std::vector<double> sigmas;    // noise sweep, one entry per level
  int per_level = 0;             // utterances per noise level
  int ensemble_size = 6;
  int beam_width = 10;
  int listener_draws = 1;
  std::vector<int> scored_slots; // empty = all slots
  std::uint64_t seed = 0;
  std::string id_prefix = "u";
};

// Writes an N-best JSONL file plus the sidecar label CSV
// "utt,noise_level,listener_wcs". Each utterance draws its own true sequence
// and per-member noise from a seed mixed with the utterance index, so output
// is byte-identical for a fixed config regardless of evaluation order.
void generate_dataset(const DatasetConfig& config, const std::string& records_path,
                      const std::string& labels_path);

}  // namespace siu

#endif  // SIU_TOYSIM_HPP
