#include "hashshare/hashing.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hashshare {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

std::string to_hex(const unsigned char* digest, std::size_t n) {
  std::string out(n * 2, '0');
  for (std::size_t i = 0; i < n; ++i) {
    out[2 * i] = kHexDigits[digest[i] >> 4];
    out[2 * i + 1] = kHexDigits[digest[i] & 0x0f];
  }
  return out;
}

void check_length(int length) {
  if (length < 1 || length > 64) {
    throw ParamError("hash length must be in [1, 64]");
  }
}

}  // namespace

TokenHasher::TokenHasher(int hash_length) : hash_length_(hash_length) {
  check_length(hash_length);
  ctx_ = EVP_MD_CTX_new();
  if (!ctx_) throw std::runtime_error("EVP_MD_CTX_new failed");
}

TokenHasher::~TokenHasher() {
  EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

TruncatedHash TokenHasher::operator()(std::string_view token) {
  auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, token.data(), token.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex = to_hex(digest, digest_len);
  hex.resize(static_cast<std::size_t>(hash_length_));
  return hex;
}

std::string sha256_hex(std::string_view data) {
  TokenHasher hasher(64);
  return hasher(data);
}

TruncatedHash hash_token(std::string_view token, int length) {
  TokenHasher hasher(length);
  return hasher(token);
}

HashedCorpus hash_corpus(const TokenSequence& seq,
                         const std::vector<AnnotationLayer>& layers,
                         int hash_length) {
  check_length(hash_length);
  for (const auto& layer : layers) {
    if (layer.values.size() != seq.tokens.size()) {
      throw ParamError("layer length mismatch: " + layer.name);
    }
  }
  HashedCorpus corpus;
  corpus.hash_length = hash_length;
  corpus.chapter_lengths = seq.chapter_lengths;
  corpus.layers = layers;
  std::sort(corpus.layers.begin(), corpus.layers.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  corpus.hashes.reserve(seq.tokens.size());
  TokenHasher hasher(hash_length);
  for (const auto& token : seq.tokens) {
    corpus.hashes.push_back(hasher(token));
  }
  return corpus;
}

CollisionReport collision_stats(const TokenSequence& seq, int hash_length) {
  check_length(hash_length);
  CollisionReport report;
  report.hash_length = hash_length;

  std::set<std::string_view> types(seq.tokens.begin(), seq.tokens.end());
  TokenHasher hasher(hash_length);
  for (std::string_view type : types) {
    ++report.bucket_histogram[hasher(type)];
  }
  if (!types.empty()) {
    // Each type collides with the other types sharing its bucket.
    double total = 0.0;
    for (const auto& [hash, count] : report.bucket_histogram) {
      total += static_cast<double>(count) * static_cast<double>(count - 1);
    }
    report.mean_collisions_per_token = total / static_cast<double>(types.size());
  }
  return report;
}

}  // namespace hashshare
