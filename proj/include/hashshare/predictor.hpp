#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hashshare/core.hpp"

namespace hashshare {

// Candidate tokens for one masked position, best first.
struct MaskCandidate {
  std::string token;
  double score = 0.0;

  bool operator==(const MaskCandidate&) const = default;
};

// Pluggable masked-token predictor. Implementations must tolerate empty
// contexts and must never throw on transport problems; they report failures
// through the warning channel and return no candidates instead.
class MaskPredictor {
 public:
  virtual ~MaskPredictor() = default;

  virtual std::vector<MaskCandidate> predict(const std::vector<std::string>& left_context,
                                             const std::vector<std::string>& right_context,
                                             int top_k) = 0;

  // Transport warnings accumulated since the last call; cleared on read.
  std::vector<std::string> take_warnings() { return std::exchange(warnings_, {}); }

 protected:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

 private:
  std::vector<std::string> warnings_;
};

// Context-independent predictor backed by the token frequencies of the
// user's own text. Stand-in for a real masked language model.
class FrequencyPredictor : public MaskPredictor {
 public:
  explicit FrequencyPredictor(const TokenSequence& text);

  std::vector<MaskCandidate> predict(const std::vector<std::string>& left_context,
                                     const std::vector<std::string>& right_context,
                                     int top_k) override;

 private:
  std::vector<MaskCandidate> by_frequency_;  // descending frequency, ties lexicographic
};

// Child process speaking one JSON object per line on stdin/stdout:
// request {"left": [...], "right": [...], "top_k": N}
// response {"candidates": [[token, score], ...]}
class ProcessPredictor : public MaskPredictor {
 public:
  explicit ProcessPredictor(std::string command, int timeout_ms = 10000);
  ~ProcessPredictor() override;

  std::vector<MaskCandidate> predict(const std::vector<std::string>& left_context,
                                     const std::vector<std::string>& right_context,
                                     int top_k) override;

 private:
  void start();
  void stop();

  std::string command_;
  int timeout_ms_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
};

// HTTP POST of the same one-line JSON request to a URL.
class HttpPredictor : public MaskPredictor {
 public:
  explicit HttpPredictor(std::string url, int timeout_ms = 10000);
  ~HttpPredictor() override;

  std::vector<MaskCandidate> predict(const std::vector<std::string>& left_context,
                                     const std::vector<std::string>& right_context,
                                     int top_k) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string path_;
};

// Builds a predictor from a CLI-style endpoint spec:
// "builtin" | "exec:COMMAND" | "http:URL". The user text feeds the builtin.
std::unique_ptr<MaskPredictor> make_predictor(const std::string& spec,
                                              const TokenSequence& user_text);

// Parses a single-line JSON MaskPredictionResponse. Malformed input yields an
// empty list and an explanation in `warning`. Candidates beyond top_k are cut.
std::vector<MaskCandidate> parse_prediction_response(const std::string& line, int top_k,
                                                     std::string* warning);

// The one-line JSON wire form of a request.
std::string format_prediction_request(const std::vector<std::string>& left_context,
                                      const std::vector<std::string>& right_context,
                                      int top_k);

}  // namespace hashshare
