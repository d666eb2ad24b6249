#include "siu/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "siu/math.hpp"

namespace siu {

double sequence_confidence(const HypothesisPosterior& top_hyp) {
  if (!top_hyp.has_max()) {
    throw SchemaError("confidence: top hypothesis carries no per-position maxima (logp_max)");
  }
  const Eigen::MatrixXd& log_max = top_hyp.log_max;
  double sum = 0;
  for (int l = 0; l < log_max.cols(); ++l) {
    sum += log_mean_exp(log_max.col(l));
  }
  const double c = std::exp(sum / static_cast<double>(log_max.cols()));
  return std::min(c, 1.0);
}

double sequence_entropy(const std::vector<SequenceScore>& beam, double temperature) {
  if (beam.empty()) throw ConfigError("entropy: empty hypothesis list");
  if (!(temperature > 0)) {
    throw ConfigError("entropy: temperature must be > 0, got " + format_g12(temperature));
  }
  Eigen::ArrayXd log_probs(beam.size());
  Eigen::ArrayXd lengths(beam.size());
  for (std::size_t b = 0; b < beam.size(); ++b) {
    if (!std::isfinite(beam[b].log_prob) || beam[b].log_prob > 0 || beam[b].length < 1) {
      throw InputError("entropy: invalid sequence score at beam index " + std::to_string(b));
    }
    log_probs[static_cast<int>(b)] = beam[b].log_prob;
    lengths[static_cast<int>(b)] = static_cast<double>(beam[b].length);
  }
  const Eigen::ArrayXd pi = softmax(log_probs, temperature);
  // The per-hypothesis length normalization divides the log term only.
  const double h = -(pi * log_probs / lengths).sum();
  return h <= 0.0 ? 0.0 : h;  // folds -0.0 to +0.0
}

namespace {
double negated(double v) { return v == 0.0 ? 0.0 : -v; }
}  // namespace

UncertaintyScore better_ear(const UncertaintyScore& left, const UncertaintyScore& right) {
  if (left.beam_size_used != right.beam_size_used || left.temperature != right.temperature) {
    throw ConfigError("better_ear: left/right scores come from different (B, T) configurations");
  }
  UncertaintyScore fused;
  fused.utt = left.utt;
  fused.channel = "better_ear";
  fused.confidence = std::max(left.confidence, right.confidence);
  fused.entropy = std::min(left.entropy, right.entropy);
  fused.neg_entropy = negated(fused.entropy);
  fused.beam_size_used = left.beam_size_used;
  fused.temperature = left.temperature;
  return fused;
}

UncertaintyScore score_record(const UtteranceRecord& rec, double temperature, int beam_limit) {
  if (beam_limit < 1) throw ConfigError("beam limit must be >= 1");
  if (rec.hypotheses.empty()) throw SchemaError("record has no hypotheses");

  const int used = std::min<int>(beam_limit, static_cast<int>(rec.hypotheses.size()));
  std::vector<SequenceScore> beam;
  beam.reserve(used);
  for (int b = 0; b < used; ++b) beam.push_back(sequence_log_prob(rec.hypotheses[b]));

  UncertaintyScore score;
  score.utt = rec.utt;
  score.channel = to_string(rec.channel);
  score.confidence = sequence_confidence(rec.hypotheses[0]);
  score.entropy = sequence_entropy(beam, temperature);
  score.neg_entropy = negated(score.entropy);
  score.beam_size_used = used;
  score.temperature = temperature;
  return score;
}

}  // namespace siu
