#ifndef SIU_ENSEMBLE_HPP
#define SIU_ENSEMBLE_HPP

#include <Eigen/Dense>

#include "siu/nbest.hpp"

namespace siu {

// Sequence log-probability under the ensemble-averaged posterior, with the
// token count it was accumulated over.
struct SequenceScore {
  double log_prob = 0;  // <= 0, finite
  int length = 0;       // >= 1
};

// ln[(1/M) * sum_m exp(log_probs_m)]: the ensemble-averaged token
// probability, in log space. Empty input -> ConfigError.
double token_ensemble_mean(const Eigen::Ref<const Eigen::VectorXd>& log_probs);

// Sum over positions of token_ensemble_mean on each column of the M x L
// realized-probability matrix. Requires a combined posterior.
SequenceScore sequence_log_prob(const HypothesisPosterior& hyp);

}  // namespace siu

#endif  // SIU_ENSEMBLE_HPP
