#include "hashshare/eval.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <span>
#include <thread>
#include <unordered_map>

#include "hashshare/hashing.hpp"
#include "hashshare/matcher.hpp"
#include "hashshare/predictor.hpp"
#include "hashshare/repair.hpp"

namespace hashshare {

namespace {

bool is_repaired(AlignmentStatus status) {
  return status == AlignmentStatus::RepairedPropagate ||
         status == AlignmentStatus::RepairedRetokenize ||
         status == AlignmentStatus::RepairedCase ||
         status == AlignmentStatus::RepairedMlm;
}

// Per creator index: was the annotation delivered to the gt user position,
// on a correctly reconstructed token? Unmapped indices stay false.
std::vector<char> delivered_ok(const AlignmentResult& result, const GroundTruth& gt) {
  std::vector<char> ok(gt.user_index.size(), 0);
  std::unordered_map<std::size_t, const AlignmentRecord*> by_creator;
  for (const AlignmentRecord& rec : result.records) {
    if (rec.creator_index) by_creator.emplace(*rec.creator_index, &rec);
  }
  for (std::size_t c = 0; c < gt.user_index.size(); ++c) {
    if (!gt.user_index[c]) continue;
    auto it = by_creator.find(c);
    if (it == by_creator.end()) continue;
    const AlignmentRecord& rec = *it->second;
    const std::size_t u = *gt.user_index[c];
    if (rec.user_span && rec.user_span->second > rec.user_span->first &&
        !(u >= rec.user_span->first && u < rec.user_span->second)) {
      continue;  // delivered elsewhere
    }
    if (is_repaired(rec.status) && gt.original_token[c] &&
        rec.token != *gt.original_token[c]) {
      continue;  // reconstructed the wrong token
    }
    ok[c] = 1;
  }
  return ok;
}

}  // namespace

GroundTruth ground_truth_from_log(const CorruptionLog& log, std::size_t original_len) {
  GroundTruth gt;
  gt.user_index.assign(original_len, std::nullopt);
  gt.original_token.assign(original_len, std::nullopt);

  // Creator index carried by each current position (nullopt = inserted).
  std::vector<std::optional<std::size_t>> ids(original_len);
  for (std::size_t i = 0; i < original_len; ++i) ids[i] = i;

  for (const EditRecord& rec : log.records) {
    const std::size_t p = rec.position;
    if (p + rec.original.size() > ids.size() || p > ids.size()) {
      throw ParseError("corruption log position out of range");
    }
    // Remember original tokens of edited creator positions.
    for (std::size_t t = 0; t < rec.original.size(); ++t) {
      if (ids[p + t]) gt.original_token[*ids[p + t]] = rec.original[t];
    }
    switch (rec.kind) {
      case CorruptionKind::Add:
        ids.insert(ids.begin() + p, rec.replacement.size(), std::nullopt);
        break;
      case CorruptionKind::Delete:
        ids.erase(ids.begin() + p, ids.begin() + p + rec.original.size());
        break;
      case CorruptionKind::Substitute:
      case CorruptionKind::OcrScramble:
        break;  // position survives, content changed
      case CorruptionKind::TokensSplit:
        // first part keeps the id, the extra parts are unmapped
        ids.insert(ids.begin() + p + 1, rec.replacement.size() - 1, std::nullopt);
        break;
      case CorruptionKind::TokensMerge: {
        std::optional<std::size_t> first = ids[p];
        ids.erase(ids.begin() + p, ids.begin() + p + rec.original.size());
        ids.insert(ids.begin() + p, first);
        break;
      }
    }
  }
  for (std::size_t j = 0; j < ids.size(); ++j) {
    if (ids[j]) gt.user_index[*ids[j]] = j;
  }
  return gt;
}

GroundTruth ground_truth_from_log(const CorruptionLog& log, const TokenSequence& original) {
  GroundTruth gt = ground_truth_from_log(log, original.tokens.size());
  for (std::size_t i = 0; i < original.tokens.size(); ++i) {
    gt.original_token[i] = original.tokens[i];
  }
  return gt;
}

GroundTruth identity_ground_truth(const TokenSequence& creator) {
  GroundTruth gt;
  gt.user_index.resize(creator.tokens.size());
  gt.original_token.resize(creator.tokens.size());
  for (std::size_t i = 0; i < creator.tokens.size(); ++i) {
    gt.user_index[i] = i;
    gt.original_token[i] = creator.tokens[i];
  }
  return gt;
}

GroundTruth ground_truth_from_texts(const TokenSequence& creator, const TokenSequence& user) {
  GroundTruth gt;
  gt.user_index.assign(creator.tokens.size(), std::nullopt);
  gt.original_token.resize(creator.tokens.size());
  for (std::size_t i = 0; i < creator.tokens.size(); ++i) {
    gt.original_token[i] = creator.tokens[i];
  }
  SequenceMatcher<std::string> matcher(std::span(creator.tokens), std::span(user.tokens));
  for (const MatchBlock& block : matcher.matching_blocks()) {
    for (std::size_t t = 0; t < block.size; ++t) {
      gt.user_index[block.a_start + t] = block.b_start + t;
    }
  }
  return gt;
}

TokenErrorReport token_error_rate(const AlignmentResult& result, const GroundTruth& gt) {
  TokenErrorReport report;
  std::vector<char> ok = delivered_ok(result, gt);
  for (std::size_t c = 0; c < gt.user_index.size(); ++c) {
    if (!gt.user_index[c]) continue;
    ++report.mapped;
    if (!ok[c]) ++report.errors;
  }
  for (const AlignmentRecord& rec : result.records) {
    if (!rec.creator_index || !is_repaired(rec.status)) continue;
    const auto& truth = gt.original_token[*rec.creator_index];
    if (truth && rec.token != *truth) ++report.false_positives;
  }
  if (report.mapped > 0) {
    report.error_pct =
        100.0 * static_cast<double>(report.errors) / static_cast<double>(report.mapped);
  }
  return report;
}

double entity_error_rate(const AlignmentResult& result, const GroundTruth& gt,
                         const AnnotationLayer& layer, EntityMode mode,
                         std::vector<std::string>* warnings) {
  if (layer.values.size() != gt.user_index.size()) {
    throw ParamError("layer length does not match ground truth");
  }
  // Parse BIO spans over the creator labels.
  std::vector<std::pair<std::size_t, std::size_t>> entities;  // half-open
  std::string open_type;
  std::size_t open_start = 0;
  bool open = false;
  auto close = [&](std::size_t end) {
    if (open) entities.push_back({open_start, end});
    open = false;
  };
  for (std::size_t i = 0; i < layer.values.size(); ++i) {
    const std::string& label = layer.values[i];
    if (label.rfind("B-", 0) == 0) {
      close(i);
      open = true;
      open_start = i;
      open_type = label.substr(2);
    } else if (label.rfind("I-", 0) == 0) {
      std::string type = label.substr(2);
      if (!open || type != open_type) {
        if (warnings) {
          warnings->push_back("BIO: I-" + type + " without opener at index " +
                              std::to_string(i));
        }
        close(i);
        open = true;
        open_start = i;
        open_type = type;
      }
    } else {
      close(i);
    }
  }
  close(layer.values.size());
  if (entities.empty()) return 0.0;

  std::vector<char> ok = delivered_ok(result, gt);
  std::size_t errors = 0;
  for (const auto& [start, end] : entities) {
    std::size_t bad = 0;
    for (std::size_t c = start; c < end; ++c) bad += !ok[c];
    if (mode == EntityMode::Strict ? bad > 0 : bad == end - start) ++errors;
  }
  return 100.0 * static_cast<double>(errors) / static_cast<double>(entities.size());
}

std::vector<EvalRow> sweep(const TokenSequence& creator,
                           const std::vector<AnnotationLayer>& layers,
                           const std::vector<CorruptionSpec>& specs,
                           const std::vector<int>& hash_lengths,
                           const std::vector<std::string>& strategies,
                           const std::vector<std::uint64_t>& seeds, int jobs) {
  // Hash the creator once per length; shared read-only across workers.
  std::map<int, HashedCorpus> corpora;
  for (int length : hash_lengths) {
    corpora.emplace(length, hash_corpus(creator, layers, length));
  }

  std::vector<EvalRow> rows(specs.size() * hash_lengths.size() * strategies.size() *
                            seeds.size());

  // One job per (spec, seed): the corruption is computed once and reused for
  // every hash length and strategy.
  struct Job {
    std::size_t spec_index;
    std::size_t seed_index;
  };
  std::vector<Job> job_list;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    for (std::size_t d = 0; d < seeds.size(); ++d) job_list.push_back({s, d});
  }

  auto row_index = [&](std::size_t s, std::size_t l, std::size_t t, std::size_t d) {
    return ((s * hash_lengths.size() + l) * strategies.size() + t) * seeds.size() + d;
  };

  auto run_job = [&](const Job& job) {
    CorruptionSpec spec = specs[job.spec_index];
    spec.seed = seeds[job.seed_index];
    auto [user, log] = corrupt(creator, spec);
    GroundTruth gt = ground_truth_from_log(log, creator);
    FrequencyPredictor predictor(user);

    for (std::size_t l = 0; l < hash_lengths.size(); ++l) {
      for (std::size_t t = 0; t < strategies.size(); ++t) {
        StrategyConfig config;
        config.seed = spec.seed;
        auto start = std::chrono::steady_clock::now();
        AlignmentResult result = align_with_strategy(
            corpora.at(hash_lengths[l]), user, strategies[t], config, &predictor);
        TokenErrorReport token_report = token_error_rate(result, gt);
        EvalRow row;
        row.spec = spec;
        row.hash_length = hash_lengths[l];
        row.strategy = strategies[t];
        row.token_error_pct = token_report.error_pct;
        row.false_positives = token_report.false_positives;
        if (!layers.empty()) {
          row.entity_strict_pct =
              entity_error_rate(result, gt, layers.front(), EntityMode::Strict);
          row.entity_lenient_pct =
              entity_error_rate(result, gt, layers.front(), EntityMode::Lenient);
        }
        auto end = std::chrono::steady_clock::now();
        row.runtime_s = std::chrono::duration<double>(end - start).count();
        rows[row_index(job.spec_index, l, t, job.seed_index)] = std::move(row);
      }
    }
  };

  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), job_list.size());
  if (workers <= 1) {
    for (const Job& job : job_list) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= job_list.size()) return;
          run_job(job_list[i]);
        }
      });
    }
    for (auto& thread : pool) thread.join();
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<EvalRow>& rows) {
  std::string csv =
      "kind,ratio,wer,cer,hash_length,strategy,seed,token_error_pct,"
      "false_positives,entity_strict_pct,entity_lenient_pct,runtime_s\n";
  char buf[256];
  for (const EvalRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%g,%g,%d,%s,%llu,%.6g,%zu,%.6g,%.6g,%.3f\n",
                  to_string(row.spec.kind), row.spec.ratio, row.spec.wer_target,
                  row.spec.cer_target, row.hash_length, row.strategy.c_str(),
                  static_cast<unsigned long long>(row.spec.seed), row.token_error_pct,
                  row.false_positives, row.entity_strict_pct, row.entity_lenient_pct,
                  row.runtime_s);
    csv += buf;
  }
  return csv;
}

}  // namespace hashshare
