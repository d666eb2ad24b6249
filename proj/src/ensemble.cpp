#include "siu/ensemble.hpp"

#include <cmath>

#include "siu/math.hpp"

namespace siu {

double token_ensemble_mean(const Eigen::Ref<const Eigen::VectorXd>& log_probs) {
  if (log_probs.size() == 0) throw ConfigError("token_ensemble_mean: empty ensemble");
  return log_mean_exp(log_probs);
}

SequenceScore sequence_log_prob(const HypothesisPosterior& hyp) {
  if (!hyp.has_combined()) {
    throw SchemaError("sequence_log_prob: hypothesis carries uncombined streams");
  }
  const Eigen::MatrixXd& logp = hyp.log_realized;
  double total = 0;
  for (int l = 0; l < logp.cols(); ++l) {
    total += token_ensemble_mean(logp.col(l));
  }
  return SequenceScore{total, static_cast<int>(logp.cols())};
}

}  // namespace siu
