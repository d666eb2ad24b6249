#ifndef SIU_NBEST_HPP
#define SIU_NBEST_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "siu/errors.hpp"

namespace siu {

// ---------------------------------------------------------------------------
// On-disk format: JSON-lines, one utterance per line.
//
//   {"utt": "u00001", "channel": "mono", "M": 6,
//    "hyps": [{"tokens": [3, 0, 2],
//              "logp":     [[-0.1, -0.3, ...], ...],   M rows of L values
//              "logp_max": [[-0.1, -0.2, ...], ...]},  required on hyps[0]
//             ...],
//    "ref_words": ["a3", "b0", "c2"], "resp_words": [...], "baseline": 0.87}
//
// All probabilities are stored as natural-log values; long sequences would
// underflow linear-space doubles. A hypothesis may carry the pair
// "logp_ctc" + "logp_s2s" instead of "logp" (and "logp_max_ctc" +
// "logp_max_s2s" instead of "logp_max"); combine_ctc_streams() folds the two
// decoder streams into one posterior. Log values below -700 are clamped to
// -700 at parse time and counted in LoadReport::clamped_values, so a zero
// probability can never poison a sequence score.
//
// Hypotheses are one shared beam rescored by every ensemble member and must
// be ordered by non-increasing ensemble sequence log-probability.
// ---------------------------------------------------------------------------

enum class Channel { mono, left, right };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

// One beam hypothesis: per-member log-probabilities of the realized tokens,
// and (on the top hypothesis) per-member, per-position log-maxima over the
// token vocabulary. Matrices are M x L; an empty matrix means "absent".
struct HypothesisPosterior {
  std::vector<int> tokens;

  Eigen::MatrixXd log_realized;
  Eigen::MatrixXd log_realized_ctc;
  Eigen::MatrixXd log_realized_s2s;

  Eigen::MatrixXd log_max;
  Eigen::MatrixXd log_max_ctc;
  Eigen::MatrixXd log_max_s2s;

  int length() const { return static_cast<int>(tokens.size()); }
  bool has_combined() const { return log_realized.size() > 0; }
  bool has_split() const { return log_realized_ctc.size() > 0; }
  bool has_max() const { return log_max.size() > 0; }
};

// One utterance's ensemble N-best posterior data. The utterance id is an
// opaque key; audio never enters this toolchain.
struct UtteranceRecord {
  std::string utt;
  Channel channel = Channel::mono;
  int ensemble_size = 0;
  std::vector<HypothesisPosterior> hypotheses;
  std::vector<std::string> ref_words;   // empty = absent
  std::vector<std::string> resp_words;  // empty = absent
  std::optional<double> baseline;
};

struct LoadReport {
  std::size_t records = 0;
  std::size_t clamped_values = 0;  // log values raised to the -700 floor
};

// Floor applied to log-probabilities at the parse boundary.
inline constexpr double kLogFloor = -700.0;

// Parses one JSONL line. Performs structural and range validation only;
// ordering needs the combined posterior and is checked by load_records().
// Throws ParseError (malformed JSON), SchemaError (shape/field problems) or
// RangeError (probability outside (0,1]).
UtteranceRecord parse_record(const std::string& line, LoadReport* report = nullptr);

// Inverse of parse_record: one JSON object, no trailing newline. Split
// streams, if still present, are written back as such so that
// parse(serialize(r)) == r field for field.
std::string serialize_record(const UtteranceRecord& rec);

// Folds the two decoder streams per Eq.-style convex interpolation:
// p = lambda * p_ctc + (1 - lambda) * p_s2s, elementwise in linear space.
// Per-position maxima are combined the same way when split maxima are
// present; that value upper-bounds the true maximum of the combined
// distribution (the max of a sum never exceeds the sum of maxes), which is
// the best available bound without full per-token posteriors.
UtteranceRecord combine_ctc_streams(UtteranceRecord rec, double lambda);

// Loads a whole JSONL file: parses every line, applies combine_ctc_streams
// (with `lambda`) to records that carry split streams, then validates
// hypothesis ordering and binaural pairing. Errors are rethrown with the
// 1-based line number prepended.
std::vector<UtteranceRecord> load_records(const std::string& path, double lambda,
                                          LoadReport* report = nullptr);

void write_records(const std::string& path, const std::vector<UtteranceRecord>& recs);

// A scored utterance/channel: the (C_S, H_S, -H_S) triple plus provenance.
struct UncertaintyScore {
  std::string utt;
  std::string channel;  // "mono" | "left" | "right" | "better_ear"
  double confidence = 0;
  double entropy = 0;
  double neg_entropy = 0;
  int beam_size_used = 0;
  double temperature = 0;
};

// Deterministic CSV, header "utt,channel,confidence,entropy,neg_entropy",
// values at 12 significant digits. Refuses an empty list (InputError) so an
// empty file can never be mistaken for a scored one.
void write_scores(const std::vector<UncertaintyScore>& scores, const std::string& path);

// Reads a scores CSV back; beam size and temperature are not stored in the
// file and come back as zero.
std::vector<UncertaintyScore> read_scores(const std::string& path);

// Ground-truth / sidecar CSV: required columns "utt" and "listener_wcs" (or
// "wcs"), optional "noise_level". Row order is preserved.
struct LabelRow {
  std::string utt;
  double wcs = 0;
  std::optional<double> noise_level;
};

std::vector<LabelRow> read_labels(const std::string& path);
void write_labels(const std::string& path, const std::vector<LabelRow>& rows);

// Formats a double at 12 significant digits (the CSV contract).
std::string format_g12(double v);

}  // namespace siu

#endif  // SIU_NBEST_HPP
