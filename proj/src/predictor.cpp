#include "hashshare/predictor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include <httplib.h>
#include <json.hpp>

namespace hashshare {

using json = nlohmann::json;

std::string format_prediction_request(const std::vector<std::string>& left_context,
                                      const std::vector<std::string>& right_context,
                                      int top_k) {
  json req;
  req["left"] = left_context;
  req["right"] = right_context;
  req["top_k"] = top_k;
  return req.dump();
}

std::vector<MaskCandidate> parse_prediction_response(const std::string& line, int top_k,
                                                     std::string* warning) {
  std::vector<MaskCandidate> candidates;
  json resp = json::parse(line, nullptr, false);
  if (resp.is_discarded() || !resp.is_object() || !resp.contains("candidates") ||
      !resp["candidates"].is_array()) {
    if (warning) *warning = "malformed predictor response";
    return candidates;
  }
  for (const auto& entry : resp["candidates"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number()) {
      if (warning) *warning = "malformed predictor candidate";
      candidates.clear();
      return candidates;
    }
    double score = entry[1].get<double>();
    if (!std::isfinite(score)) {
      if (warning) *warning = "non-finite predictor score";
      candidates.clear();
      return candidates;
    }
    candidates.push_back({entry[0].get<std::string>(), score});
    if (static_cast<int>(candidates.size()) == top_k) break;
  }
  return candidates;
}

// ---------------------------------------------------------------------------
// FrequencyPredictor

FrequencyPredictor::FrequencyPredictor(const TokenSequence& text) {
  std::map<std::string, std::size_t> counts;
  for (const auto& token : text.tokens) ++counts[token];
  const double total = static_cast<double>(text.tokens.size());
  for (const auto& [token, count] : counts) {
    by_frequency_.push_back({token, static_cast<double>(count) / total});
  }
  std::stable_sort(by_frequency_.begin(), by_frequency_.end(),
                   [](const MaskCandidate& a, const MaskCandidate& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.token < b.token;
                   });
}

std::vector<MaskCandidate> FrequencyPredictor::predict(
    const std::vector<std::string>&, const std::vector<std::string>&, int top_k) {
  if (top_k < 0) top_k = 0;
  const std::size_t n = std::min<std::size_t>(by_frequency_.size(),
                                              static_cast<std::size_t>(top_k));
  return {by_frequency_.begin(), by_frequency_.begin() + n};
}

// ---------------------------------------------------------------------------
// ProcessPredictor

ProcessPredictor::ProcessPredictor(std::string command, int timeout_ms)
    : command_(std::move(command)), timeout_ms_(timeout_ms) {}

ProcessPredictor::~ProcessPredictor() { stop(); }

void ProcessPredictor::start() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    warn("predictor pipe creation failed");
    return;
  }
  pid_t pid = fork();
  if (pid < 0) {
    warn("predictor fork failed");
    return;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  signal(SIGPIPE, SIG_IGN);
}

void ProcessPredictor::stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::vector<MaskCandidate> ProcessPredictor::predict(
    const std::vector<std::string>& left_context,
    const std::vector<std::string>& right_context, int top_k) {
  if (pid_ < 0) start();
  if (to_child_ < 0 || from_child_ < 0) {
    warn("predictor process unavailable");
    return {};
  }
  std::string line = format_prediction_request(left_context, right_context, top_k);
  line.push_back('\n');
  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) {
      warn("predictor write failed");
      stop();
      return {};
    }
    written += static_cast<std::size_t>(n);
  }

  // Read one newline-terminated response, honoring the timeout.
  for (;;) {
    auto newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string response = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      std::string warning;
      auto candidates = parse_prediction_response(response, top_k, &warning);
      if (!warning.empty()) warn(warning);
      return candidates;
    }
    struct pollfd pfd{from_child_, POLLIN, 0};
    int ready = poll(&pfd, 1, timeout_ms_);
    if (ready <= 0) {
      warn(ready == 0 ? "predictor timeout" : "predictor poll failed");
      stop();
      return {};
    }
    char chunk[4096];
    ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n <= 0) {
      warn("predictor closed its output");
      stop();
      return {};
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

// ---------------------------------------------------------------------------
// HttpPredictor

struct HttpPredictor::Impl {
  httplib::Client client;
  explicit Impl(const std::string& host_port) : client(host_port) {}
};

HttpPredictor::HttpPredictor(std::string url, int timeout_ms) {
  // Split "http://host:port/path" into client base and path.
  std::string rest = url;
  auto scheme = rest.find("://");
  std::string base;
  if (scheme != std::string::npos) {
    auto path_start = rest.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      base = rest;
      path_ = "/";
    } else {
      base = rest.substr(0, path_start);
      path_ = rest.substr(path_start);
    }
  } else {
    base = "http://" + rest;
    path_ = "/";
  }
  impl_ = std::make_unique<Impl>(base);
  impl_->client.set_connection_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  impl_->client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
}

HttpPredictor::~HttpPredictor() = default;

std::vector<MaskCandidate> HttpPredictor::predict(
    const std::vector<std::string>& left_context,
    const std::vector<std::string>& right_context, int top_k) {
  std::string body = format_prediction_request(left_context, right_context, top_k);
  auto res = impl_->client.Post(path_, body, "application/json");
  if (!res || res->status != 200) {
    warn("predictor http request failed");
    return {};
  }
  std::string warning;
  auto candidates = parse_prediction_response(res->body, top_k, &warning);
  if (!warning.empty()) warn(warning);
  return candidates;
}

// ---------------------------------------------------------------------------

std::unique_ptr<MaskPredictor> make_predictor(const std::string& spec,
                                              const TokenSequence& user_text) {
  if (spec.empty() || spec == "builtin") {
    return std::make_unique<FrequencyPredictor>(user_text);
  }
  if (spec.rfind("exec:", 0) == 0) {
    return std::make_unique<ProcessPredictor>(spec.substr(5));
  }
  if (spec.rfind("http:", 0) == 0) {
    std::string url = spec.substr(5);
    if (url.rfind("//", 0) == 0) url = "http:" + url;
    return std::make_unique<HttpPredictor>(url);
  }
  throw ParamError("unknown predictor spec: " + spec);
}

}  // namespace hashshare
