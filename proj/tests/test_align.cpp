#include <doctest.h>

#include "hashshare/align.hpp"
#include "hashshare/hashing.hpp"
#include "helpers/textgen.hpp"

using namespace hashshare;

TEST_CASE("identical text aligns fully") {
  TokenSequence creator{{"the", "man", "who", "perceived", "the", "truth"}, {6}};
  AnnotationLayer ner{"ner", {"O", "B-PER", "O", "O", "O", "O"}};
  HashedCorpus corpus = hash_corpus(creator, {ner}, 2);

  AlignmentState state = align_naive(corpus, creator);
  CHECK(state.pending_count == 0);

  AlignmentResult result = finalize(state);
  CHECK(result.count(AlignmentStatus::MatchedNaive) == 6);
  CHECK(result.count(AlignmentStatus::Unaligned) == 0);
  CHECK(result.count(AlignmentStatus::DiscardedAddition) == 0);
  REQUIRE(result.records.size() == 6);
  CHECK(result.records[1].annotations.at("ner") == "B-PER");
  CHECK(result.records[1].creator_index == 1);
  CHECK(result.records[1].user_span == UserSpan{1, 2});
}

TEST_CASE("typo, deletion and addition after naive alignment") {
  TokenSequence creator{{"the", "man", "who", "perceived", "the", "truth"}, {6}};
  AnnotationLayer ner{"ner", {"O", "O", "O", "O", "O", "O"}};
  HashedCorpus corpus = hash_corpus(creator, {ner}, 2);
  TokenSequence user{{"the", "man", "percieved", "the", "very", "truth"}, {6}};

  AlignmentResult result = finalize(align_naive(corpus, user));
  CHECK(result.count(AlignmentStatus::MatchedNaive) == 4);
  CHECK(result.count(AlignmentStatus::Unaligned) == 2);  // "who" and "perceived"
  CHECK(result.count(AlignmentStatus::DiscardedAddition) == 1);  // "very"

  for (const AlignmentRecord& rec : result.records) {
    if (rec.status == AlignmentStatus::DiscardedAddition) {
      CHECK(rec.token == "very");
      CHECK(rec.annotations.empty());
      CHECK_FALSE(rec.creator_index.has_value());
    }
  }
}

TEST_CASE("empty creator discards every user token") {
  HashedCorpus corpus;  // valid, zero hashes
  TokenSequence user{{"a", "b"}, {2}};
  AlignmentResult result = finalize(align_naive(corpus, user));
  CHECK(result.count(AlignmentStatus::DiscardedAddition) == 2);
  CHECK(result.records.size() == 2);
}

TEST_CASE("invalid inputs are rejected") {
  HashedCorpus corpus;
  corpus.hashes = {"zz"};  // not a hex string
  corpus.chapter_lengths = {1};
  TokenSequence user{{"a"}, {1}};
  CHECK_THROWS_AS(align_naive(corpus, user), ParamError);

  HashedCorpus good = hash_corpus({{"a"}, {1}}, {}, 2);
  TokenSequence bad{{""}, {1}};
  CHECK_THROWS_AS(align_naive(good, bad), ParamError);
}

TEST_CASE("matched records satisfy hash equality") {
  auto text = testhelp::make_text(500, 4, 9);
  HashedCorpus corpus = hash_corpus(text.seq, {text.bio}, 2);
  AlignmentResult result = finalize(align_naive(corpus, text.seq));
  for (const AlignmentRecord& rec : result.records) {
    if (rec.status == AlignmentStatus::MatchedNaive) {
      REQUIRE(rec.creator_index.has_value());
      CHECK(hash_token(rec.token, 2) == corpus.hashes[*rec.creator_index]);
    }
  }
}

TEST_CASE("replace regions pair left to right") {
  TokenSequence creator{{"p", "q", "r", "s"}, {4}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"p", "z", "s"}, {3}};

  AlignmentState state = align_naive(corpus, user);
  // q paired with z (substitution site), r left over (deletion site)
  CHECK(state.pending_count == 2);
  REQUIRE(state.slots.size() == 4);
  CHECK(state.slots[1].is_pending_substitution());
  CHECK(state.slots[1].user_index == 1);
  CHECK(state.slots[2].is_pending_deletion());

  AlignmentResult result = finalize(state);
  CHECK(result.count(AlignmentStatus::MatchedNaive) == 2);
  CHECK(result.count(AlignmentStatus::Unaligned) == 2);
}

TEST_CASE("leftover user positions in a replace region become additions") {
  TokenSequence creator{{"p", "q", "s"}, {3}};
  HashedCorpus corpus = hash_corpus(creator, {}, 2);
  TokenSequence user{{"p", "x", "y", "s"}, {4}};

  AlignmentResult result = finalize(align_naive(corpus, user));
  CHECK(result.count(AlignmentStatus::MatchedNaive) == 2);
  CHECK(result.count(AlignmentStatus::Unaligned) == 1);
  CHECK(result.count(AlignmentStatus::DiscardedAddition) == 1);
}

TEST_CASE("chapter-wise alignment matches whole-sequence alignment") {
  auto text = testhelp::make_text(300, 3, 21);
  HashedCorpus corpus = hash_corpus(text.seq, {}, 4);

  TokenSequence flat = text.seq;
  flat.chapter_lengths = {flat.tokens.size()};  // chapter counts now differ

  AlignmentResult chapters = finalize(align_naive(corpus, text.seq));
  AlignmentResult whole = finalize(align_naive(corpus, flat));
  CHECK(chapters.summary == whole.summary);
  REQUIRE(chapters.records.size() == whole.records.size());
  for (std::size_t i = 0; i < chapters.records.size(); ++i) {
    CHECK(chapters.records[i].token == whole.records[i].token);
    CHECK(chapters.records[i].creator_index == whole.records[i].creator_index);
  }
}

TEST_CASE("creator indices are strictly increasing and spans stay ordered") {
  auto text = testhelp::make_text(400, 2, 33);
  HashedCorpus corpus = hash_corpus(text.seq, {}, 2);
  TokenSequence user = text.seq;
  user.tokens[50] = "ZZZZ";           // substitution
  user.tokens.erase(user.tokens.begin() + 100);  // deletion
  user.chapter_lengths[0] -= 1;

  AlignmentResult result = finalize(align_naive(corpus, user));
  std::size_t last_creator = 0;
  bool have_creator = false;
  std::size_t covered = 0;
  for (const AlignmentRecord& rec : result.records) {
    if (rec.creator_index) {
      if (have_creator) CHECK(*rec.creator_index > last_creator);
      last_creator = *rec.creator_index;
      have_creator = true;
    }
    if (rec.user_span) {
      CHECK(rec.user_span->first >= covered);
      CHECK(rec.user_span->second >= rec.user_span->first);
      covered = rec.user_span->second;
    }
  }
  CHECK(covered <= user.tokens.size());
}
