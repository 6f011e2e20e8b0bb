#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "hashshare.h"

namespace {

int report_failure(int code) {
  std::fprintf(stderr, "error: %s\n", hs_last_error());
  return code;
}

struct TokensHandle {
  hs_tokens* ptr = nullptr;
  ~TokensHandle() { hs_tokens_free(ptr); }
};

struct CorpusHandle {
  hs_corpus* ptr = nullptr;
  ~CorpusHandle() { hs_corpus_free(ptr); }
};

struct AlignmentHandle {
  hs_alignment* ptr = nullptr;
  ~AlignmentHandle() { hs_alignment_free(ptr); }
};

int cmd_share(const std::string& tokens_path, const std::string& format, int hash_length,
              const std::string& out_path) {
  TokensHandle tokens;
  int rc = hs_tokens_read(tokens_path.c_str(), format.c_str(), &tokens.ptr);
  if (rc != HS_OK) return report_failure(rc);

  CorpusHandle corpus;
  rc = hs_corpus_build(tokens.ptr, hash_length, &corpus.ptr);
  if (rc != HS_OK) return report_failure(rc);

  rc = hs_corpus_write(corpus.ptr, out_path.c_str());
  if (rc != HS_OK) return report_failure(rc);

  double mean = 0.0;
  rc = hs_collision_mean(tokens.ptr, hash_length, &mean);
  if (rc != HS_OK) return report_failure(rc);

  std::printf("tokens: %zu\n", hs_tokens_count(tokens.ptr));
  std::printf("chapters: %zu\n", hs_tokens_chapter_count(tokens.ptr));
  std::printf("hash_length: %d\n", hash_length);
  std::printf("mean_collisions_per_token_type: %.4f\n", mean);
  std::printf("wrote: %s\n", out_path.c_str());
  return 0;
}

int cmd_align(const std::string& shared_path, const std::string& tokens_path,
              const std::string& format, const std::string& strategy,
              const std::string& predictor, int mlm_window, int top_k, std::uint64_t seed,
              const std::string& out_path) {
  CorpusHandle corpus;
  int rc = hs_corpus_read(shared_path.c_str(), &corpus.ptr);
  if (rc != HS_OK) return report_failure(rc);

  TokensHandle tokens;
  rc = hs_tokens_read(tokens_path.c_str(), format.c_str(), &tokens.ptr);
  if (rc != HS_OK) return report_failure(rc);

  auto start = std::chrono::steady_clock::now();
  AlignmentHandle alignment;
  rc = hs_align(corpus.ptr, tokens.ptr, strategy.c_str(), predictor.c_str(), mlm_window,
                top_k, seed, &alignment.ptr);
  if (rc != HS_OK) return report_failure(rc);
  double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  rc = hs_alignment_write_report(alignment.ptr, out_path.c_str());
  if (rc != HS_OK) return report_failure(rc);

  std::printf("strategy: %s\n", strategy.c_str());
  std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
  static const char* statuses[] = {"matched_naive",  "repaired_propagate",
                                   "repaired_retokenize", "repaired_case",
                                   "repaired_mlm",   "unaligned",
                                   "discarded_addition"};
  for (const char* status : statuses) {
    size_t count = 0;
    if (hs_alignment_count(alignment.ptr, status, &count) == HS_OK) {
      std::printf("%s: %zu\n", status, count);
    }
  }
  for (size_t i = 0; i < hs_alignment_warning_count(alignment.ptr); ++i) {
    std::fprintf(stderr, "warning: %s\n", hs_alignment_warning(alignment.ptr, i));
  }
  std::printf("runtime_s: %.3f\n", runtime);
  std::printf("wrote: %s\n", out_path.c_str());
  return 0;
}

int cmd_corrupt(const std::string& tokens_path, const std::string& format,
                const std::string& kind, double ratio, double wer, double cer,
                std::uint64_t seed, const std::string& out_path,
                const std::string& log_path) {
  TokensHandle tokens;
  int rc = hs_tokens_read(tokens_path.c_str(), format.c_str(), &tokens.ptr);
  if (rc != HS_OK) return report_failure(rc);

  double achieved_wer = 0.0, achieved_cer = 0.0;
  rc = hs_corrupt(tokens.ptr, kind.c_str(), ratio, wer, cer, seed, format.c_str(),
                  out_path.c_str(), log_path.empty() ? nullptr : log_path.c_str(),
                  &achieved_wer, &achieved_cer);
  if (rc != HS_OK) return report_failure(rc);

  std::printf("kind: %s\n", kind.c_str());
  std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
  std::printf("achieved_wer: %.4f\n", achieved_wer);
  std::printf("achieved_cer: %.4f\n", achieved_cer);
  std::printf("wrote: %s\n", out_path.c_str());
  if (!log_path.empty()) std::printf("log: %s\n", log_path.c_str());
  return 0;
}

int cmd_eval(const std::string& report_path, const std::string& log_path,
             const std::string& tokens_path, const std::string& format,
             const std::string& shared_path, const std::string& layer,
             const std::string& entity_mode) {
  hs_eval_result result;
  int rc = hs_eval(report_path.c_str(), log_path.c_str(),
                   tokens_path.empty() ? nullptr : tokens_path.c_str(), format.c_str(),
                   shared_path.empty() ? nullptr : shared_path.c_str(),
                   layer.empty() ? nullptr : layer.c_str(), &result);
  if (rc != HS_OK) return report_failure(rc);

  std::printf("mapped_tokens: %llu\n", static_cast<unsigned long long>(result.mapped));
  std::printf("token_errors: %llu\n", static_cast<unsigned long long>(result.errors));
  std::printf("token_error_pct: %.4f\n", result.token_error_pct);
  std::printf("false_positives: %llu\n",
              static_cast<unsigned long long>(result.false_positives));
  if (result.entity_strict_pct >= 0.0) {
    if (entity_mode.empty() || entity_mode == "strict") {
      std::printf("entity_strict_pct: %.4f\n", result.entity_strict_pct);
    }
    if (entity_mode.empty() || entity_mode == "lenient") {
      std::printf("entity_lenient_pct: %.4f\n", result.entity_lenient_pct);
    }
  }
  return 0;
}

int cmd_bench(const std::string& tokens_path, const std::string& format,
              const std::string& grid_path, const std::string& out_path, int jobs) {
  if (const char* env = std::getenv("HASHSHARE_JOBS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) jobs = static_cast<int>(parsed);
  }
  int rc = hs_bench(tokens_path.c_str(), format.c_str(), grid_path.c_str(),
                    out_path.c_str(), jobs);
  if (rc != HS_OK) return report_failure(rc);
  std::printf("wrote: %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Share and recover token annotations via truncated hashes"};
  app.require_subcommand(1);

  std::string tokens_path, format = "lines", out_path, shared_path, log_path;
  std::string strategy = "pipe", predictor = "builtin", kind, layer, entity_mode;
  std::string report_path, grid_path;
  int hash_length = 2, mlm_window = 32, top_k = 10, jobs = 0;
  double ratio = 0.0, wer = 0.0, cer = 0.0;
  std::uint64_t seed = 0;

  CLI::App* share = app.add_subcommand("share", "Hash a text and write the shared file");
  share->add_option("--tokens", tokens_path)->required();
  share->add_option("--format", format)->check(CLI::IsMember({"lines", "columns"}));
  share->add_option("--hash-length", hash_length);
  share->add_option("--out", out_path)->required();

  CLI::App* align = app.add_subcommand("align", "Align a text against a shared file");
  align->add_option("--shared", shared_path)->required();
  align->add_option("--tokens", tokens_path)->required();
  align->add_option("--format", format)->check(CLI::IsMember({"lines", "columns"}));
  align->add_option("--strategy", strategy);
  align->add_option("--predictor", predictor);
  align->add_option("--mlm-window", mlm_window);
  align->add_option("--top-k", top_k);
  align->add_option("--seed", seed);
  align->add_option("--out", out_path)->required();

  CLI::App* corrupt = app.add_subcommand("corrupt", "Apply synthetic degradation");
  corrupt->add_option("--tokens", tokens_path)->required();
  corrupt->add_option("--format", format)->check(CLI::IsMember({"lines", "columns"}));
  corrupt->add_option("--kind", kind)->required();
  corrupt->add_option("--ratio", ratio);
  corrupt->add_option("--wer", wer);
  corrupt->add_option("--cer", cer);
  corrupt->add_option("--seed", seed);
  corrupt->add_option("--out", out_path)->required();
  corrupt->add_option("--log", log_path);

  CLI::App* eval = app.add_subcommand("eval", "Score an alignment report against a log");
  eval->add_option("--report", report_path)->required();
  eval->add_option("--log", log_path)->required();
  eval->add_option("--tokens", tokens_path);
  eval->add_option("--format", format)->check(CLI::IsMember({"lines", "columns"}));
  eval->add_option("--shared", shared_path);
  eval->add_option("--layer", layer);
  eval->add_option("--entity-mode", entity_mode)
      ->check(CLI::IsMember({"strict", "lenient"}));

  CLI::App* bench = app.add_subcommand("bench", "Run a corruption/alignment grid");
  bench->add_option("--tokens", tokens_path)->required();
  bench->add_option("--format", format)->check(CLI::IsMember({"lines", "columns"}));
  bench->add_option("--grid", grid_path)->required();
  bench->add_option("--out", out_path)->required();
  bench->add_option("--jobs", jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  if (share->parsed()) return cmd_share(tokens_path, format, hash_length, out_path);
  if (align->parsed()) {
    return cmd_align(shared_path, tokens_path, format, strategy, predictor, mlm_window,
                     top_k, seed, out_path);
  }
  if (corrupt->parsed()) {
    return cmd_corrupt(tokens_path, format, kind, ratio, wer, cer, seed, out_path,
                       log_path);
  }
  if (eval->parsed()) {
    return cmd_eval(report_path, log_path, tokens_path, format, shared_path, layer,
                    entity_mode);
  }
  if (bench->parsed()) return cmd_bench(tokens_path, format, grid_path, out_path, jobs);
  return 3;
}
