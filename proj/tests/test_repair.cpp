#include <doctest.h>

#include "hashshare/corrupt.hpp"
#include "hashshare/hashing.hpp"
#include "hashshare/repair.hpp"
#include "helpers/textgen.hpp"

using namespace hashshare;

namespace {

struct EmptyPredictor : MaskPredictor {
  std::vector<MaskCandidate> predict(const std::vector<std::string>&,
                                     const std::vector<std::string>&, int) override {
    return {};
  }
};

struct FixedPredictor : MaskPredictor {
  std::vector<MaskCandidate> candidates;
  std::vector<MaskCandidate> predict(const std::vector<std::string>&,
                                     const std::vector<std::string>&, int top_k) override {
    std::vector<MaskCandidate> out = candidates;
    if (out.size() > static_cast<std::size_t>(top_k)) out.resize(top_k);
    return out;
  }
};

}  // namespace

TEST_CASE("propagate recovers a deleted token from a vote elsewhere") {
  TokenSequence creator{{"the", "cat", "sat", "on", "the", "mat"}, {6}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "sat", "on", "the", "mat"}, {5}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 1);
  apply_propagate(state);
  CHECK(state.pending_count == 0);

  AlignmentResult result = finalize(state);
  CHECK(result.count(AlignmentStatus::RepairedPropagate) == 1);
  REQUIRE(result.records[0].status == AlignmentStatus::RepairedPropagate);
  CHECK(result.records[0].token == "the");
  CHECK_FALSE(result.records[0].user_span.has_value());  // reconstructed at a deletion
}

TEST_CASE("propagate leaves a hash with no vote pending") {
  TokenSequence creator{{"cat", "sat", "mat"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "mat"}, {2}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 1);
  apply_propagate(state);
  CHECK(state.pending_count == 1);
}

TEST_CASE("propagate majority vote breaks ties by count then lexicographically") {
  // At hash length 1, "the" and "The" share the bucket "b"; the vote
  // multiset {"the","the","The"} must elect "the".
  TokenSequence creator{{"the", "cat", "the", "sat", "The", "mat", "the"}, {7}};
  HashedCorpus corpus = hash_corpus(creator, {}, 1);
  REQUIRE(corpus.hashes[0] == corpus.hashes[4]);  // the/The collide at L=1
  TokenSequence user{{"the", "cat", "the", "sat", "The", "mat"}, {6}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 1);
  apply_propagate(state);
  AlignmentResult result = finalize(state);
  REQUIRE(result.count(AlignmentStatus::RepairedPropagate) == 1);
  CHECK(result.records.back().token == "the");
}

TEST_CASE("retokenize splits a hyphen-joined token") {
  TokenSequence creator{{"cat", "runner", "up", "sat"}, {4}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "runner-up", "sat"}, {3}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 2);
  apply_retokenize(state);
  CHECK(state.pending_count == 0);

  AlignmentResult result = finalize(state);
  CHECK(result.count(AlignmentStatus::RepairedRetokenize) == 2);
  REQUIRE(result.records.size() == 4);
  CHECK(result.records[1].token == "runner");
  CHECK(result.records[1].user_span == UserSpan{1, 2});
  CHECK(result.records[2].token == "up");
  CHECK(result.records[2].user_span == UserSpan{2, 2});  // same source token
}

TEST_CASE("retokenize merges consecutive unmatched user tokens") {
  TokenSequence creator{{"cat", "runner", "sat"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "run", "ner", "sat"}, {4}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 1);
  apply_retokenize(state);
  CHECK(state.pending_count == 0);

  AlignmentResult result = finalize(state);
  CHECK(result.count(AlignmentStatus::RepairedRetokenize) == 1);
  CHECK(result.count(AlignmentStatus::DiscardedAddition) == 0);
  CHECK(result.records[1].token == "runner");
  CHECK(result.records[1].user_span == UserSpan{1, 3});
}

TEST_CASE("retokenize finds no split when none hashes correctly") {
  TokenSequence creator{{"x", "do", "g", "sat"}, {4}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"x", "cat", "sat"}, {3}};

  AlignmentState state = align_naive(corpus, user);
  std::size_t before = state.pending_count;
  apply_retokenize(state);
  CHECK(state.pending_count == before);
}

TEST_CASE("case variants repair casing differences") {
  SUBCASE("capitalize-first") {
    HashedCorpus corpus = hash_corpus({{"The", "cat"}, {2}}, {}, 2);
    AlignmentState state = align_naive(corpus, {{"the", "cat"}, {2}});
    REQUIRE(state.pending_count == 1);
    apply_case(state);
    AlignmentResult result = finalize(state);
    REQUIRE(result.count(AlignmentStatus::RepairedCase) == 1);
    CHECK(result.records[0].token == "The");
    CHECK(result.records[0].user_span == UserSpan{0, 1});
  }
  SUBCASE("lowercase") {
    HashedCorpus corpus = hash_corpus({{"the", "cat"}, {2}}, {}, 2);
    AlignmentState state = align_naive(corpus, {{"THE", "cat"}, {2}});
    apply_case(state);
    CHECK(finalize(state).count(AlignmentStatus::RepairedCase) == 1);
  }
  SUBCASE("mixed interior casing is out of reach") {
    HashedCorpus corpus = hash_corpus({{"McCoy", "cat"}, {2}}, {}, 2);
    AlignmentState state = align_naive(corpus, {{"mccoy", "cat"}, {2}});
    std::size_t before = state.pending_count;
    apply_case(state);
    CHECK(state.pending_count == before);
  }
}

TEST_CASE("case transforms") {
  CHECK(apply_case_transform("ThE", CaseTransform::Lowercase) == "the");
  CHECK(apply_case_transform("the", CaseTransform::CapitalizeFirst) == "The");
  CHECK(apply_case_transform("the", CaseTransform::Uppercase) == "THE");
  CHECK(apply_case_transform("the", CaseTransform::SwapFirst) == "The");
  CHECK(apply_case_transform("The", CaseTransform::SwapFirst) == "the");
}

TEST_CASE("mlm recovers a deleted token with the frequency predictor") {
  TokenSequence creator{{"the", "cat", "the", "mat"}, {4}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "the", "mat"}, {3}};

  AlignmentState state = align_naive(corpus, user);
  REQUIRE(state.pending_count == 1);
  FrequencyPredictor predictor(user);
  apply_mlm(state, predictor, 32, 10);
  CHECK(state.pending_count == 0);

  AlignmentResult result = finalize(state);
  REQUIRE(result.count(AlignmentStatus::RepairedMlm) == 1);
  CHECK(result.records[0].token == "the");
}

TEST_CASE("mlm with empty candidates changes nothing") {
  TokenSequence creator{{"the", "cat", "mat"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  AlignmentState state = align_naive(corpus, {{"cat", "mat"}, {2}});
  EmptyPredictor predictor;
  std::size_t before = state.pending_count;
  apply_mlm(state, predictor, 32, 10);
  CHECK(state.pending_count == before);
}

TEST_CASE("mlm accepts the highest-ranked hash-matching candidate") {
  TokenSequence creator{{"the", "cat", "mat"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  AlignmentState state = align_naive(corpus, {{"cat", "mat"}, {2}});
  FixedPredictor predictor;
  predictor.candidates = {{"wrong", 0.9}, {"the", 0.5}, {"the", 0.1}};
  apply_mlm(state, predictor, 32, 10);
  AlignmentResult result = finalize(state);
  REQUIRE(result.count(AlignmentStatus::RepairedMlm) == 1);
  CHECK(result.records[0].token == "the");
}

TEST_CASE("mlm parameter validation") {
  TokenSequence creator{{"the", "cat"}, {2}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  AlignmentState state = align_naive(corpus, {{"cat"}, {1}});
  EmptyPredictor predictor;
  CHECK_THROWS_AS(apply_mlm(state, predictor, 1, 10), ParamError);
  CHECK_THROWS_AS(apply_mlm(state, predictor, 32, 0), ParamError);
}

TEST_CASE("frequency predictor counts tokens") {
  FrequencyPredictor predictor(TokenSequence{{"a", "a", "b"}, {3}});
  auto candidates = predictor.predict({}, {}, 2);
  REQUIRE(candidates.size() == 2);
  CHECK(candidates[0].token == "a");
  CHECK(candidates[0].score == doctest::Approx(2.0 / 3.0));
  CHECK(candidates[1].token == "b");
  CHECK(candidates[1].score == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("singleton pipeline equals the strategy itself") {
  TokenSequence creator{{"the", "cat", "sat", "on", "the", "mat"}, {6}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "sat", "on", "the", "mat"}, {5}};

  StrategyConfig config;
  config.pipeline = {"propagate"};
  AlignmentState piped = align_naive(corpus, user);
  apply_pipe(piped, config, nullptr);

  AlignmentState direct = align_naive(corpus, user);
  apply_propagate(direct);

  CHECK(finalize(piped) == finalize(direct));
}

TEST_CASE("unknown strategy in a pipeline is rejected") {
  HashedCorpus corpus = hash_corpus({{"a"}, {1}}, {}, 2);
  AlignmentState state = align_naive(corpus, {{"a"}, {1}});
  StrategyConfig config;
  config.pipeline = {"bogus"};
  CHECK_THROWS_AS(apply_pipe(state, config, nullptr), ParamError);
  CHECK_THROWS_AS(align_with_strategy(corpus, {{"a"}, {1}}, "bogus"), ParamError);
}

TEST_CASE("strategy order changes the outcome on a constructed fixture") {
  TokenSequence creator{{"runner", "x", "runner", "up"}, {4}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"runner", "x", "runner-up"}, {3}};

  StrategyConfig retok_first;
  retok_first.pipeline = {"retokenize", "propagate"};
  AlignmentState a = align_naive(corpus, user);
  apply_pipe(a, retok_first, nullptr);
  CHECK(finalize(a).count(AlignmentStatus::Unaligned) == 0);

  StrategyConfig prop_first;
  prop_first.pipeline = {"propagate", "retokenize"};
  AlignmentState b = align_naive(corpus, user);
  apply_pipe(b, prop_first, nullptr);
  CHECK(finalize(b).count(AlignmentStatus::Unaligned) == 1);
}

TEST_CASE("retokenize and case are idempotent") {
  TokenSequence creator{{"cat", "runner", "up", "The", "sat"}, {5}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"cat", "runner-up", "the", "sat"}, {4}};

  AlignmentState once = align_naive(corpus, user);
  apply_retokenize(once);
  apply_case(once);
  AlignmentState twice = align_naive(corpus, user);
  apply_retokenize(twice);
  apply_retokenize(twice);
  apply_case(twice);
  apply_case(twice);
  CHECK(finalize(once) == finalize(twice));
}

TEST_CASE("no strategy increases the pending count and repairs are sound") {
  auto text = testhelp::make_text(2000, 4, 17);
  HashedCorpus corpus = hash_corpus(text.seq, {}, 2);

  for (auto kind : {CorruptionKind::Substitute, CorruptionKind::Delete,
                    CorruptionKind::TokensSplit, CorruptionKind::TokensMerge}) {
    CorruptionSpec spec;
    spec.kind = kind;
    spec.ratio = 0.05;
    spec.seed = 3;
    auto [user, log] = corrupt(text.seq, spec);

    for (const char* strategy : {"propagate", "retokenize", "case", "mlm", "pipe"}) {
      AlignmentState state = align_naive(corpus, user);
      std::size_t before = state.pending_count;
      FrequencyPredictor predictor(user);
      StrategyConfig config;
      if (std::string(strategy) == "propagate") apply_propagate(state);
      else if (std::string(strategy) == "retokenize") apply_retokenize(state);
      else if (std::string(strategy) == "case") apply_case(state);
      else if (std::string(strategy) == "mlm") apply_mlm(state, predictor, 32, 10);
      else apply_pipe(state, config, &predictor);
      CHECK(state.pending_count <= before);

      AlignmentResult result = finalize(state);
      for (const AlignmentRecord& rec : result.records) {
        if (rec.status == AlignmentStatus::RepairedPropagate ||
            rec.status == AlignmentStatus::RepairedRetokenize ||
            rec.status == AlignmentStatus::RepairedCase ||
            rec.status == AlignmentStatus::RepairedMlm) {
          REQUIRE(rec.creator_index.has_value());
          CHECK(hash_token(rec.token, 2) == corpus.hashes[*rec.creator_index]);
        }
      }
    }
  }
}

TEST_CASE("pipe skips mlm without a predictor and warns") {
  TokenSequence creator{{"the", "cat", "mat"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  AlignmentResult result = align_with_strategy(corpus, {{"cat", "mat"}, {2}}, "pipe");
  bool warned = false;
  for (const std::string& w : result.warnings) {
    if (w.find("mlm") != std::string::npos) warned = true;
  }
  CHECK(warned);
}
