#ifndef SIU_UNCERTAINTY_HPP
#define SIU_UNCERTAINTY_HPP

#include <vector>

#include "siu/ensemble.hpp"
#include "siu/nbest.hpp"

namespace siu {

// Sequence confidence: the length-normalized geometric mean, over the top
// hypothesis's positions, of the ensemble-averaged per-position maximum
// token probability:
//
//   C = exp[ (1/L) * sum_l ln( (1/M) * sum_m max_prob[m][l] ) ]
//
// Always in (0, 1]. The stored maxima are per member; averaging them
// upper-bounds the maximum of the averaged distribution whenever members
// disagree about the argmax token, which is the tightest value computable
// from an N-best record. Missing maxima -> SchemaError.
double sequence_confidence(const HypothesisPosterior& top_hyp);

// Beam-approximated sequence entropy at temperature T:
//
//   pi_b = softmax_b( log_prob_b / T )
//   H    = -sum_b (pi_b / L_b) * log_prob_b
//
// The beam acts as an importance sample of high-probability sequence space;
// with full coverage of a fixed-length space and T = 1 this equals the exact
// Shannon entropy divided by L. Always >= 0. T <= 0 or an empty beam ->
// ConfigError.
double sequence_entropy(const std::vector<SequenceScore>& beam, double temperature);

// Better-ear fusion: each measure independently takes its more favorable
// value, i.e. max of confidence and max of negative entropy (= min of
// entropy). Both scores must share (beam size, temperature) -> ConfigError.
UncertaintyScore better_ear(const UncertaintyScore& left, const UncertaintyScore& right);

// Scores one record: entropy over the first min(beam_limit, B) hypotheses,
// confidence from the top hypothesis. beam_limit >= 1 -> ConfigError.
UncertaintyScore score_record(const UtteranceRecord& rec, double temperature, int beam_limit);

}  // namespace siu

#endif  // SIU_UNCERTAINTY_HPP
