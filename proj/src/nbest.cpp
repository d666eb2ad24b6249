#include "siu/nbest.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "siu/ensemble.hpp"

namespace siu {

using nlohmann::json;

std::string to_string(Channel c) {
  switch (c) {
    case Channel::mono: return "mono";
    case Channel::left: return "left";
    case Channel::right: return "right";
  }
  throw SchemaError("unknown channel value");
}

Channel channel_from_string(const std::string& s) {
  if (s == "mono") return Channel::mono;
  if (s == "left") return Channel::left;
  if (s == "right") return Channel::right;
  throw SchemaError("channel: expected \"mono\", \"left\" or \"right\", got \"" + s + "\"");
}

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

double checked_logp(double v, const std::string& field, LoadReport* report) {
  if (std::isnan(v) || v > 0.0) {
    throw RangeError(field + ": log-probability " + format_g12(v) +
                     " implies a probability outside (0,1]");
  }
  if (v < kLogFloor) {
    if (report) ++report->clamped_values;
    return kLogFloor;
  }
  return v;
}

Eigen::MatrixXd parse_log_matrix(const json& j, int expect_m, int expect_l,
                                 const std::string& field, LoadReport* report) {
  if (!j.is_array() || static_cast<int>(j.size()) != expect_m) {
    throw SchemaError(field + ": expected " + std::to_string(expect_m) + " model rows");
  }
  Eigen::MatrixXd mat(expect_m, expect_l);
  for (int m = 0; m < expect_m; ++m) {
    const json& row = j[m];
    if (!row.is_array() || static_cast<int>(row.size()) != expect_l) {
      throw SchemaError(field + "[" + std::to_string(m) + "]: expected " +
                        std::to_string(expect_l) + " positions");
    }
    for (int l = 0; l < expect_l; ++l) {
      if (!row[l].is_number()) {
        throw SchemaError(field + "[" + std::to_string(m) + "][" + std::to_string(l) +
                          "]: expected a number");
      }
      mat(m, l) = checked_logp(row[l].get<double>(), field, report);
    }
  }
  return mat;
}

void check_realized_le_max(const Eigen::MatrixXd& realized, const Eigen::MatrixXd& max,
                           const std::string& what) {
  for (int m = 0; m < realized.rows(); ++m) {
    for (int l = 0; l < realized.cols(); ++l) {
      if (realized(m, l) > max(m, l)) {
        throw SchemaError(what + ": realized probability exceeds per-position maximum at model " +
                          std::to_string(m) + ", position " + std::to_string(l));
      }
    }
  }
}

std::vector<std::string> parse_word_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array of strings");
  std::vector<std::string> words;
  words.reserve(j.size());
  for (const auto& w : j) {
    if (!w.is_string()) throw SchemaError(field + ": expected an array of strings");
    words.push_back(w.get<std::string>());
  }
  return words;
}

HypothesisPosterior parse_hypothesis(const json& j, int ensemble_size, bool is_top,
                                     LoadReport* report) {
  static const std::set<std::string> known = {"tokens",   "logp",         "logp_ctc",
                                              "logp_s2s", "logp_max",     "logp_max_ctc",
                                              "logp_max_s2s"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw SchemaError("hyps: unknown key \"" + key + "\"");
  }

  HypothesisPosterior hyp;
  if (!j.contains("tokens") || !j["tokens"].is_array() || j["tokens"].empty()) {
    throw SchemaError("tokens: expected a non-empty array of token ids");
  }
  for (const auto& t : j["tokens"]) {
    if (!t.is_number_integer()) throw SchemaError("tokens: expected integer token ids");
    hyp.tokens.push_back(t.get<int>());
  }
  const int length = hyp.length();

  const bool combined = j.contains("logp");
  const bool split = j.contains("logp_ctc") || j.contains("logp_s2s");
  if (combined && split) throw SchemaError("logp: combined and split streams are exclusive");
  if (!combined && !split) throw SchemaError("logp: missing (or logp_ctc + logp_s2s)");
  if (split && !(j.contains("logp_ctc") && j.contains("logp_s2s"))) {
    throw SchemaError("logp_ctc/logp_s2s: both streams are required");
  }
  if (combined) {
    hyp.log_realized = parse_log_matrix(j["logp"], ensemble_size, length, "logp", report);
  } else {
    hyp.log_realized_ctc =
        parse_log_matrix(j["logp_ctc"], ensemble_size, length, "logp_ctc", report);
    hyp.log_realized_s2s =
        parse_log_matrix(j["logp_s2s"], ensemble_size, length, "logp_s2s", report);
  }

  const bool max_combined = j.contains("logp_max");
  const bool max_split = j.contains("logp_max_ctc") || j.contains("logp_max_s2s");
  if (max_combined && max_split) {
    throw SchemaError("logp_max: combined and split maxima are exclusive");
  }
  if (max_split) {
    if (!split) throw SchemaError("logp_max_ctc/logp_max_s2s: require split logp streams");
    if (!(j.contains("logp_max_ctc") && j.contains("logp_max_s2s"))) {
      throw SchemaError("logp_max_ctc/logp_max_s2s: both streams are required");
    }
    hyp.log_max_ctc =
        parse_log_matrix(j["logp_max_ctc"], ensemble_size, length, "logp_max_ctc", report);
    hyp.log_max_s2s =
        parse_log_matrix(j["logp_max_s2s"], ensemble_size, length, "logp_max_s2s", report);
    check_realized_le_max(hyp.log_realized_ctc, hyp.log_max_ctc, "logp_ctc");
    check_realized_le_max(hyp.log_realized_s2s, hyp.log_max_s2s, "logp_s2s");
  } else if (max_combined) {
    hyp.log_max = parse_log_matrix(j["logp_max"], ensemble_size, length, "logp_max", report);
    if (hyp.has_combined()) check_realized_le_max(hyp.log_realized, hyp.log_max, "logp");
  } else if (is_top) {
    throw SchemaError("logp_max: required on the top hypothesis");
  }
  return hyp;
}

json matrix_to_json(const Eigen::MatrixXd& mat) {
  json rows = json::array();
  for (int m = 0; m < mat.rows(); ++m) {
    json row = json::array();
    for (int l = 0; l < mat.cols(); ++l) row.push_back(mat(m, l));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ln(lambda * e^a + (1-lambda) * e^b); inputs are floored at kLogFloor so the
// linear terms cannot underflow to zero. Guarded against rounding the convex
// combination above probability 1.
double mix_logp(double log_ctc, double log_s2s, double lambda) {
  const double p = lambda * std::exp(log_ctc) + (1.0 - lambda) * std::exp(log_s2s);
  return std::min(0.0, std::log(p));
}

Eigen::MatrixXd mix_matrices(const Eigen::MatrixXd& ctc, const Eigen::MatrixXd& s2s,
                             double lambda) {
  Eigen::MatrixXd out(ctc.rows(), ctc.cols());
  for (int m = 0; m < ctc.rows(); ++m) {
    for (int l = 0; l < ctc.cols(); ++l) {
      out(m, l) = mix_logp(ctc(m, l), s2s(m, l), lambda);
    }
  }
  return out;
}

template <typename Fn>
auto with_line_context(int line_number, Fn&& fn) {
  const std::string prefix = "line " + std::to_string(line_number) + ": ";
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(prefix + e.what());
  } catch (const SchemaError& e) {
    throw SchemaError(prefix + e.what());
  } catch (const RangeError& e) {
    throw RangeError(prefix + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    throw InputError("CSV field may not contain commas, quotes or newlines: \"" + s + "\"");
  }
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double_field(const std::string& s, const std::string& what, int line_number) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_number) + ": " + what +
                     ": not a number: \"" + s + "\"");
  }
}

}  // namespace

UtteranceRecord parse_record(const std::string& line, LoadReport* report) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("expected one JSON object per line");

  static const std::set<std::string> known = {"utt",       "channel",    "M",       "hyps",
                                              "ref_words", "resp_words", "baseline"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw SchemaError("unknown key \"" + key + "\"");
  }

  UtteranceRecord rec;
  if (!j.contains("utt") || !j["utt"].is_string() || j["utt"].get<std::string>().empty()) {
    throw SchemaError("utt: expected a non-empty string");
  }
  rec.utt = j["utt"].get<std::string>();

  if (j.contains("channel")) {
    if (!j["channel"].is_string()) throw SchemaError("channel: expected a string");
    rec.channel = channel_from_string(j["channel"].get<std::string>());
  }

  if (!j.contains("M") || !j["M"].is_number_integer() || j["M"].get<int>() < 1) {
    throw SchemaError("M: expected a positive integer");
  }
  rec.ensemble_size = j["M"].get<int>();

  if (!j.contains("hyps") || !j["hyps"].is_array() || j["hyps"].empty()) {
    throw SchemaError("hyps: expected a non-empty array");
  }
  for (std::size_t b = 0; b < j["hyps"].size(); ++b) {
    rec.hypotheses.push_back(
        parse_hypothesis(j["hyps"][b], rec.ensemble_size, b == 0, report));
  }

  if (j.contains("ref_words")) rec.ref_words = parse_word_list(j["ref_words"], "ref_words");
  if (j.contains("resp_words")) rec.resp_words = parse_word_list(j["resp_words"], "resp_words");

  if (j.contains("baseline")) {
    if (!j["baseline"].is_number() || !std::isfinite(j["baseline"].get<double>())) {
      throw SchemaError("baseline: expected a finite number");
    }
    rec.baseline = j["baseline"].get<double>();
  }
  if (report) ++report->records;
  return rec;
}

std::string serialize_record(const UtteranceRecord& rec) {
  json j;
  j["utt"] = rec.utt;
  j["channel"] = to_string(rec.channel);
  j["M"] = rec.ensemble_size;
  json hyps = json::array();
  for (const auto& hyp : rec.hypotheses) {
    json h;
    h["tokens"] = hyp.tokens;
    if (hyp.has_combined()) h["logp"] = matrix_to_json(hyp.log_realized);
    if (hyp.has_split()) {
      h["logp_ctc"] = matrix_to_json(hyp.log_realized_ctc);
      h["logp_s2s"] = matrix_to_json(hyp.log_realized_s2s);
    }
    if (hyp.has_max()) h["logp_max"] = matrix_to_json(hyp.log_max);
    if (hyp.log_max_ctc.size() > 0) {
      h["logp_max_ctc"] = matrix_to_json(hyp.log_max_ctc);
      h["logp_max_s2s"] = matrix_to_json(hyp.log_max_s2s);
    }
    hyps.push_back(std::move(h));
  }
  j["hyps"] = std::move(hyps);
  if (!rec.ref_words.empty()) j["ref_words"] = rec.ref_words;
  if (!rec.resp_words.empty()) j["resp_words"] = rec.resp_words;
  if (rec.baseline) j["baseline"] = *rec.baseline;
  return j.dump();
}

UtteranceRecord combine_ctc_streams(UtteranceRecord rec, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0,1], got " + format_g12(lambda));
  }
  for (std::size_t b = 0; b < rec.hypotheses.size(); ++b) {
    HypothesisPosterior& hyp = rec.hypotheses[b];
    if (!hyp.has_split()) {
      throw SchemaError("hyps[" + std::to_string(b) +
                        "]: combine_ctc_streams requires logp_ctc + logp_s2s");
    }
    if (lambda == 1.0) {
      hyp.log_realized = hyp.log_realized_ctc;
    } else if (lambda == 0.0) {
      hyp.log_realized = hyp.log_realized_s2s;
    } else {
      hyp.log_realized = mix_matrices(hyp.log_realized_ctc, hyp.log_realized_s2s, lambda);
    }
    hyp.log_realized_ctc.resize(0, 0);
    hyp.log_realized_s2s.resize(0, 0);
    if (hyp.log_max_ctc.size() > 0) {
      if (lambda == 1.0) {
        hyp.log_max = hyp.log_max_ctc;
      } else if (lambda == 0.0) {
        hyp.log_max = hyp.log_max_s2s;
      } else {
        hyp.log_max = mix_matrices(hyp.log_max_ctc, hyp.log_max_s2s, lambda);
      }
      hyp.log_max_ctc.resize(0, 0);
      hyp.log_max_s2s.resize(0, 0);
    }
    if (hyp.has_max()) {
      check_realized_le_max(hyp.log_realized, hyp.log_max,
                            "hyps[" + std::to_string(b) + "] (combined)");
    }
  }
  return rec;
}

std::vector<UtteranceRecord> load_records(const std::string& path, double lambda,
                                          LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");

  std::vector<UtteranceRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    UtteranceRecord rec = with_line_context(line_number, [&] {
      UtteranceRecord r = parse_record(line, report);
      if (!r.hypotheses.empty() && r.hypotheses[0].has_split()) {
        r = combine_ctc_streams(std::move(r), lambda);
      }
      // Hypotheses must arrive sorted by the ensemble sequence score;
      // re-sorting a valid record is a no-op.
      double prev = 0;
      for (std::size_t b = 0; b < r.hypotheses.size(); ++b) {
        const double score = sequence_log_prob(r.hypotheses[b]).log_prob;
        if (b > 0 && score > prev + 1e-9) {
          throw SchemaError("hyps[" + std::to_string(b) +
                            "]: not ordered by descending sequence log-probability");
        }
        prev = score;
      }
      return r;
    });
    records.push_back(std::move(rec));
  }

  std::map<std::string, std::set<Channel>> channels_by_utt;
  for (const auto& rec : records) {
    auto& seen = channels_by_utt[rec.utt];
    if (!seen.insert(rec.channel).second) {
      throw SchemaError("duplicate record for utterance \"" + rec.utt + "\", channel " +
                        to_string(rec.channel));
    }
  }
  for (const auto& [utt, seen] : channels_by_utt) {
    const bool has_left = seen.count(Channel::left) > 0;
    const bool has_right = seen.count(Channel::right) > 0;
    if (has_left != has_right) {
      throw SchemaError("utterance \"" + utt + "\": binaural records need both left and right");
    }
    if ((has_left || has_right) && seen.count(Channel::mono)) {
      throw SchemaError("utterance \"" + utt + "\": mono and binaural channels are exclusive");
    }
  }
  return records;
}

void write_records(const std::string& path, const std::vector<UtteranceRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& rec : recs) out << serialize_record(rec) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

void write_scores(const std::vector<UncertaintyScore>& scores, const std::string& path) {
  if (scores.empty()) throw InputError("refusing to write an empty score file");
  for (const auto& s : scores) {
    if (!(s.confidence > 0.0 && s.confidence <= 1.0)) {
      throw InputError("score for \"" + s.utt + "\": confidence outside (0,1]");
    }
    if (!(s.entropy >= 0.0) || s.neg_entropy != -s.entropy) {
      throw InputError("score for \"" + s.utt + "\": inconsistent entropy fields");
    }
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "utt,channel,confidence,entropy,neg_entropy\n";
  for (const auto& s : scores) {
    out << csv_field(s.utt) << ',' << csv_field(s.channel) << ',' << format_g12(s.confidence)
        << ',' << format_g12(s.entropy) << ',' << format_g12(s.neg_entropy) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

std::vector<UncertaintyScore> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty score file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "utt,channel,confidence,entropy,neg_entropy") {
    throw ParseError(path + ": unexpected score header \"" + line + "\"");
  }
  std::vector<UncertaintyScore> scores;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line_number) + ": expected 5 columns");
    }
    UncertaintyScore s;
    s.utt = fields[0];
    s.channel = fields[1];
    s.confidence = parse_double_field(fields[2], "confidence", line_number);
    s.entropy = parse_double_field(fields[3], "entropy", line_number);
    s.neg_entropy = parse_double_field(fields[4], "neg_entropy", line_number);
    scores.push_back(std::move(s));
  }
  return scores;
}

std::vector<LabelRow> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty label file");
  const auto header = split_csv_line(line);
  int utt_col = -1, wcs_col = -1, level_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "utt") utt_col = static_cast<int>(i);
    if (header[i] == "listener_wcs" || (header[i] == "wcs" && wcs_col < 0)) {
      wcs_col = static_cast<int>(i);
    }
    if (header[i] == "noise_level") level_col = static_cast<int>(i);
  }
  if (utt_col < 0 || wcs_col < 0) {
    throw ParseError(path + ": label header needs \"utt\" and \"listener_wcs\" (or \"wcs\")");
  }
  std::vector<LabelRow> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) <= std::max(utt_col, std::max(wcs_col, level_col))) {
      throw ParseError("line " + std::to_string(line_number) + ": too few columns");
    }
    LabelRow row;
    row.utt = fields[utt_col];
    row.wcs = parse_double_field(fields[wcs_col], "wcs", line_number);
    if (level_col >= 0) {
      row.noise_level = parse_double_field(fields[level_col], "noise_level", line_number);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_labels(const std::string& path, const std::vector<LabelRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "utt,noise_level,listener_wcs\n";
  for (const auto& row : rows) {
    out << csv_field(row.utt) << ',' << (row.noise_level ? format_g12(*row.noise_level) : "")
        << ',' << format_g12(row.wcs) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace siu
