#include "hashshare.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "hashshare/corrupt.hpp"
#include "hashshare/eval.hpp"
#include "hashshare/formats.hpp"
#include "hashshare/hashing.hpp"
#include "hashshare/predictor.hpp"
#include "hashshare/repair.hpp"

struct hs_tokens {
  hashshare::TokenSequence seq;
  std::vector<hashshare::AnnotationLayer> layers;
};

struct hs_corpus {
  hashshare::HashedCorpus corpus;
};

struct hs_alignment {
  hashshare::AlignmentResult result;
};

namespace {

thread_local std::string g_last_error;

// Runs the body and maps exceptions onto the status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const hashshare::ParseError& e) {
    g_last_error = e.what();
    return HS_ERR_PARSE;
  } catch (const hashshare::ParamError& e) {
    g_last_error = e.what();
    return HS_ERR_PARAM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown internal error";
    return HS_ERR_INTERNAL;
  }
}

int fail_param(const char* message) {
  g_last_error = message;
  return HS_ERR_PARAM;
}

hashshare::TokenFormat parse_format(const char* format) {
  std::string name = format == nullptr || *format == '\0' ? "lines" : format;
  auto parsed = hashshare::token_format_from_string(name);
  if (!parsed) throw hashshare::ParamError("unknown token format: " + name);
  return *parsed;
}

}  // namespace

extern "C" {

const char* hs_last_error(void) { return g_last_error.c_str(); }

int hs_tokens_read(const char* path, const char* format, hs_tokens** out) {
  if (path == nullptr || out == nullptr) return fail_param("null argument");
  return guarded([&] {
    auto [seq, layers] =
        hashshare::read_tokens(hashshare::read_file(path), parse_format(format));
    *out = new hs_tokens{std::move(seq), std::move(layers)};
    return HS_OK;
  });
}

int hs_tokens_write(const hs_tokens* tokens, const char* path, const char* format) {
  if (tokens == nullptr || path == nullptr) return fail_param("null argument");
  return guarded([&] {
    hashshare::write_file(
        path, hashshare::write_tokens(tokens->seq, tokens->layers, parse_format(format)));
    return HS_OK;
  });
}

void hs_tokens_free(hs_tokens* tokens) { delete tokens; }

size_t hs_tokens_count(const hs_tokens* tokens) {
  return tokens == nullptr ? 0 : tokens->seq.tokens.size();
}

size_t hs_tokens_chapter_count(const hs_tokens* tokens) {
  return tokens == nullptr ? 0 : tokens->seq.chapter_lengths.size();
}

int hs_corpus_build(const hs_tokens* tokens, int hash_length, hs_corpus** out) {
  if (tokens == nullptr || out == nullptr) return fail_param("null argument");
  return guarded([&] {
    *out = new hs_corpus{hashshare::hash_corpus(tokens->seq, tokens->layers, hash_length)};
    return HS_OK;
  });
}

int hs_corpus_read(const char* path, hs_corpus** out) {
  if (path == nullptr || out == nullptr) return fail_param("null argument");
  return guarded([&] {
    *out = new hs_corpus{hashshare::read_shared(hashshare::read_file(path))};
    return HS_OK;
  });
}

int hs_corpus_write(const hs_corpus* corpus, const char* path) {
  if (corpus == nullptr || path == nullptr) return fail_param("null argument");
  return guarded([&] {
    hashshare::write_file(path, hashshare::write_shared(corpus->corpus));
    return HS_OK;
  });
}

void hs_corpus_free(hs_corpus* corpus) { delete corpus; }

int hs_corpus_hash_length(const hs_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.hash_length;
}

size_t hs_corpus_size(const hs_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.hashes.size();
}

int hs_hash_token(const char* token, int hash_length, char* buf, size_t buf_size) {
  if (token == nullptr || buf == nullptr) return fail_param("null argument");
  return guarded([&] {
    hashshare::TruncatedHash hash = hashshare::hash_token(token, hash_length);
    if (buf_size < hash.size() + 1) {
      throw hashshare::ParamError("hash buffer too small");
    }
    std::memcpy(buf, hash.data(), hash.size() + 1);
    return HS_OK;
  });
}

int hs_collision_mean(const hs_tokens* tokens, int hash_length, double* out_mean) {
  if (tokens == nullptr || out_mean == nullptr) return fail_param("null argument");
  return guarded([&] {
    *out_mean = hashshare::collision_stats(tokens->seq, hash_length)
                    .mean_collisions_per_token;
    return HS_OK;
  });
}

int hs_align(const hs_corpus* corpus, const hs_tokens* tokens, const char* strategy,
             const char* predictor, int mlm_window, int mlm_top_k, uint64_t seed,
             hs_alignment** out) {
  if (corpus == nullptr || tokens == nullptr || strategy == nullptr || out == nullptr) {
    return fail_param("null argument");
  }
  return guarded([&] {
    hashshare::StrategyConfig config;
    if (mlm_window > 0) config.mlm_window = mlm_window;
    if (mlm_top_k > 0) config.mlm_top_k = mlm_top_k;
    config.seed = seed;
    std::unique_ptr<hashshare::MaskPredictor> backend;
    if (predictor != nullptr && *predictor != '\0') {
      backend = hashshare::make_predictor(predictor, tokens->seq);
    }
    *out = new hs_alignment{hashshare::align_with_strategy(
        corpus->corpus, tokens->seq, strategy, config, backend.get())};
    return HS_OK;
  });
}

void hs_alignment_free(hs_alignment* alignment) { delete alignment; }

int hs_alignment_count(const hs_alignment* alignment, const char* status,
                       size_t* out_count) {
  if (alignment == nullptr || status == nullptr || out_count == nullptr) {
    return fail_param("null argument");
  }
  return guarded([&] {
    auto parsed = hashshare::alignment_status_from_string(status);
    if (!parsed) throw hashshare::ParamError(std::string("unknown status: ") + status);
    *out_count = alignment->result.count(*parsed);
    return HS_OK;
  });
}

size_t hs_alignment_record_count(const hs_alignment* alignment) {
  return alignment == nullptr ? 0 : alignment->result.records.size();
}

size_t hs_alignment_warning_count(const hs_alignment* alignment) {
  return alignment == nullptr ? 0 : alignment->result.warnings.size();
}

const char* hs_alignment_warning(const hs_alignment* alignment, size_t index) {
  if (alignment == nullptr || index >= alignment->result.warnings.size()) return nullptr;
  return alignment->result.warnings[index].c_str();
}

int hs_alignment_write_report(const hs_alignment* alignment, const char* path) {
  if (alignment == nullptr || path == nullptr) return fail_param("null argument");
  return guarded([&] {
    hashshare::write_file(path, hashshare::write_alignment_report(alignment->result));
    return HS_OK;
  });
}

int hs_corrupt(const hs_tokens* tokens, const char* kind, double ratio, double wer,
               double cer, uint64_t seed, const char* format, const char* out_path,
               const char* log_path, double* out_wer, double* out_cer) {
  if (tokens == nullptr || kind == nullptr) return fail_param("null argument");
  return guarded([&] {
    auto parsed_kind = hashshare::corruption_kind_from_string(kind);
    if (!parsed_kind) {
      throw hashshare::ParamError(std::string("unknown corruption kind: ") + kind);
    }
    hashshare::CorruptionSpec spec;
    spec.kind = *parsed_kind;
    spec.ratio = ratio;
    spec.wer_target = wer;
    spec.cer_target = cer;
    spec.seed = seed;
    auto [corrupted, log] = hashshare::corrupt(tokens->seq, spec);
    if (out_path != nullptr) {
      hashshare::write_file(
          out_path, hashshare::write_tokens(corrupted, {}, parse_format(format)));
    }
    if (log_path != nullptr) {
      hashshare::write_file(log_path, hashshare::write_corruption_log(log));
    }
    if (out_wer != nullptr) *out_wer = log.achieved_wer;
    if (out_cer != nullptr) *out_cer = log.achieved_cer;
    return HS_OK;
  });
}

int hs_eval(const char* report_path, const char* log_path, const char* tokens_path,
            const char* tokens_format, const char* shared_path, const char* layer,
            hs_eval_result* out) {
  if (report_path == nullptr || log_path == nullptr || out == nullptr) {
    return fail_param("null argument");
  }
  return guarded([&] {
    hashshare::AlignmentResult result =
        hashshare::read_alignment_report(hashshare::read_file(report_path));
    hashshare::CorruptionLog log =
        hashshare::read_corruption_log(hashshare::read_file(log_path));

    hashshare::GroundTruth gt;
    if (tokens_path != nullptr && *tokens_path != '\0') {
      auto [original, original_layers] = hashshare::read_tokens(
          hashshare::read_file(tokens_path), parse_format(tokens_format));
      (void)original_layers;
      if (original.tokens.size() != log.original_token_count) {
        throw hashshare::ParamError("original text length does not match the log");
      }
      gt = hashshare::ground_truth_from_log(log, original);
    } else {
      gt = hashshare::ground_truth_from_log(log, log.original_token_count);
    }

    hashshare::TokenErrorReport report = hashshare::token_error_rate(result, gt);
    out->token_error_pct = report.error_pct;
    out->false_positives = report.false_positives;
    out->mapped = report.mapped;
    out->errors = report.errors;
    out->entity_strict_pct = -1.0;
    out->entity_lenient_pct = -1.0;

    if (shared_path != nullptr && *shared_path != '\0') {
      hashshare::HashedCorpus corpus =
          hashshare::read_shared(hashshare::read_file(shared_path));
      const hashshare::AnnotationLayer* selected = nullptr;
      if (layer != nullptr && *layer != '\0') {
        for (const auto& candidate : corpus.layers) {
          if (candidate.name == layer) selected = &candidate;
        }
        if (selected == nullptr) {
          throw hashshare::ParamError(std::string("no such layer: ") + layer);
        }
      } else if (!corpus.layers.empty()) {
        selected = &corpus.layers.front();
      }
      if (selected != nullptr) {
        out->entity_strict_pct = hashshare::entity_error_rate(
            result, gt, *selected, hashshare::EntityMode::Strict);
        out->entity_lenient_pct = hashshare::entity_error_rate(
            result, gt, *selected, hashshare::EntityMode::Lenient);
      }
    }
    return HS_OK;
  });
}

int hs_bench(const char* tokens_path, const char* format, const char* grid_path,
             const char* csv_path, int jobs) {
  if (tokens_path == nullptr || grid_path == nullptr || csv_path == nullptr) {
    return fail_param("null argument");
  }
  return guarded([&] {
    auto [seq, layers] =
        hashshare::read_tokens(hashshare::read_file(tokens_path), parse_format(format));
    hashshare::BenchGrid grid =
        hashshare::read_bench_grid(hashshare::read_file(grid_path));
    std::vector<hashshare::EvalRow> rows = hashshare::sweep(
        seq, layers, grid.specs, grid.hash_lengths, grid.strategies, grid.seeds, jobs);
    hashshare::write_file(csv_path, hashshare::sweep_to_csv(rows));
    return HS_OK;
  });
}

} /* extern "C" */
