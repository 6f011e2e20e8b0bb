#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hashshare/core.hpp"

namespace hashshare {

// Collision statistics for one truncation length, counted over distinct
// token types: a type "collides" with the other types in its hash bucket.
struct CollisionReport {
  int hash_length = 0;
  double mean_collisions_per_token = 0.0;
  std::map<TruncatedHash, std::size_t> bucket_histogram;  // hash -> type count
};

// First `length` lowercase hex characters of SHA-256 over the raw UTF-8
// bytes of `token`. No normalization of any kind is applied.
TruncatedHash hash_token(std::string_view token, int length);

// Full 64-character hex digest.
std::string sha256_hex(std::string_view data);

HashedCorpus hash_corpus(const TokenSequence& seq,
                         const std::vector<AnnotationLayer>& layers,
                         int hash_length);

CollisionReport collision_stats(const TokenSequence& seq, int hash_length);

// Batch hasher reusing one digest context; noticeably faster than calling
// hash_token per token on large texts. Not thread-safe; one per thread.
class TokenHasher {
 public:
  explicit TokenHasher(int hash_length);
  TokenHasher(const TokenHasher&) = delete;
  TokenHasher& operator=(const TokenHasher&) = delete;
  ~TokenHasher();

  TruncatedHash operator()(std::string_view token);
  int hash_length() const { return hash_length_; }

 private:
  int hash_length_;
  void* ctx_;  // EVP_MD_CTX
};

}  // namespace hashshare
