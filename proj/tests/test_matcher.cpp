#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "hashshare/matcher.hpp"
#include "helpers/oracles.hpp"

using namespace hashshare;

namespace {

std::span<const std::string> view(const std::vector<std::string>& v) {
  return {v.data(), v.size()};
}

void check_tiling(const std::vector<OpCode>& ops, std::size_t n, std::size_t m) {
  std::size_t i = 0, j = 0;
  for (const OpCode& op : ops) {
    CHECK(op.a_begin == i);
    CHECK(op.b_begin == j);
    i = op.a_end;
    j = op.b_end;
    switch (op.tag) {
      case OpTag::Equal:
        CHECK(op.a_end - op.a_begin == op.b_end - op.b_begin);
        break;
      case OpTag::Delete:
        CHECK(op.b_begin == op.b_end);
        CHECK(op.a_begin < op.a_end);
        break;
      case OpTag::Insert:
        CHECK(op.a_begin == op.a_end);
        CHECK(op.b_begin < op.b_end);
        break;
      case OpTag::Replace:
        CHECK(op.a_begin < op.a_end);
        CHECK(op.b_begin < op.b_end);
        break;
    }
  }
  CHECK(i == n);
  CHECK(j == m);
}

}  // namespace

TEST_CASE("identical sequences produce one block plus sentinel") {
  std::vector<std::string> a{"x", "y"};
  auto blocks = matching_blocks(view(a), view(a));
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == MatchBlock{0, 0, 2});
  CHECK(blocks[1] == MatchBlock{2, 2, 0});

  auto ops = opcodes(view(a), view(a));
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].tag == OpTag::Equal);
}

TEST_CASE("single-sided sequences") {
  std::vector<std::string> a{"a"}, empty;
  auto ops = opcodes(view(a), view(empty));
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].tag == OpTag::Delete);

  ops = opcodes(view(empty), view(a));
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].tag == OpTag::Insert);
}

TEST_CASE("typo, deletion and addition produce the expected edit script") {
  std::vector<std::string> a{"the", "man", "who", "perceived", "the", "truth"};
  std::vector<std::string> b{"the", "man", "percieved", "the", "very", "truth"};
  auto ops = opcodes(view(a), view(b));
  REQUIRE(ops.size() == 5);
  CHECK(ops[0].tag == OpTag::Equal);    // the man
  CHECK(ops[1].tag == OpTag::Replace);  // who perceived -> percieved
  CHECK(ops[1].a_begin == 2);
  CHECK(ops[1].a_end == 4);
  CHECK(ops[1].b_begin == 2);
  CHECK(ops[1].b_end == 3);
  CHECK(ops[2].tag == OpTag::Equal);    // the
  CHECK(ops[3].tag == OpTag::Insert);   // very
  CHECK(ops[3].b_begin == 4);
  CHECK(ops[4].tag == OpTag::Equal);    // truth
}

TEST_CASE("ties prefer the smallest a_start then b_start") {
  // two equally long common blocks: "a b" appears twice in both sequences
  std::vector<std::string> a{"a", "b", "x", "a", "b"};
  std::vector<std::string> b{"a", "b", "y", "a", "b"};
  SequenceMatcher<std::string> m(view(a), view(b));
  MatchBlock block = m.find_longest_match(0, a.size(), 0, b.size());
  CHECK(block == MatchBlock{0, 0, 2});

  std::vector<std::string> c{"q", "a", "b"};
  std::vector<std::string> d{"a", "b", "x", "a", "b"};
  SequenceMatcher<std::string> m2(view(c), view(d));
  block = m2.find_longest_match(0, c.size(), 0, d.size());
  CHECK(block == MatchBlock{1, 0, 2});
}

TEST_CASE("matching blocks equal the brute-force oracle on random pairs") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> a(rng() % 31), b(rng() % 31);
    for (auto& t : a) t = std::string(1, static_cast<char>('a' + rng() % 4));
    for (auto& t : b) t = std::string(1, static_cast<char>('a' + rng() % 4));
    auto got = matching_blocks(view(a), view(b));
    auto want = testhelp::brute_matching_blocks(view(a), view(b));
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == want[i]);
  }
}

TEST_CASE("opcodes tile both sequences and equal runs are truly equal") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::string> a(rng() % 25), b(rng() % 25);
    for (auto& t : a) t = std::string(1, static_cast<char>('a' + rng() % 3));
    for (auto& t : b) t = std::string(1, static_cast<char>('a' + rng() % 3));
    auto ops = opcodes(view(a), view(b));
    check_tiling(ops, a.size(), b.size());
    OpTag last = OpTag::Replace;
    bool first = true;
    for (const OpCode& op : ops) {
      if (op.tag == OpTag::Equal) {
        CHECK_FALSE((!first && last == OpTag::Equal));
        for (std::size_t k = 0; k < op.a_end - op.a_begin; ++k) {
          CHECK(a[op.a_begin + k] == b[op.b_begin + k]);
        }
      }
      last = op.tag;
      first = false;
    }
  }
}

TEST_CASE("autojunk keeps the tiling invariant") {
  std::mt19937_64 rng(5);
  std::vector<std::string> a, b;
  for (int i = 0; i < 400; ++i) {
    a.push_back(std::string(1, static_cast<char>('a' + rng() % 2)));
    b.push_back(std::string(1, static_cast<char>('a' + rng() % 2)));
  }
  auto ops = opcodes(view(a), view(b), true);
  check_tiling(ops, a.size(), b.size());
}

TEST_CASE("autojunk is off by default for high-frequency elements") {
  // every element popular: with the heuristic on, nothing can match
  std::vector<std::string> a(300, "h"), b(300, "h");
  auto blocks_off = matching_blocks(view(a), view(b));
  REQUIRE(blocks_off.size() == 2);
  CHECK(blocks_off[0].size == 300);

  auto blocks_on = matching_blocks(view(a), view(b), true);
  CHECK(blocks_on.back() == MatchBlock{300, 300, 0});
}

TEST_CASE("reset reuses a matcher instance") {
  SequenceMatcher<char> m;
  std::vector<char> a{'x', 'y', 'z'}, b{'x', 'z'};
  m.reset({a.data(), a.size()}, {b.data(), b.size()});
  auto blocks = m.matching_blocks();
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0] == MatchBlock{0, 0, 1});
  CHECK(blocks[1] == MatchBlock{2, 1, 1});

  std::vector<char> c{'q'}, d{'q'};
  m.reset({c.data(), c.size()}, {d.data(), d.size()});
  blocks = m.matching_blocks();
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0] == MatchBlock{0, 0, 1});
}
