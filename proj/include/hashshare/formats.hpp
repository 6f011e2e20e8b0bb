#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hashshare/core.hpp"
#include "hashshare/corrupt.hpp"

namespace hashshare {

// Shared hashed-corpus file: UTF-8 JSON with exactly the keys format_version,
// hash_function, hash_length, chapter_lengths, hashes, layers. Unknown keys
// are rejected by name; a `tokens` key is rejected outright because the
// shared format must never carry plain text.
std::string write_shared(const HashedCorpus& corpus);
HashedCorpus read_shared(const std::string& bytes);

enum class TokenFormat { Lines, Columns };

std::optional<TokenFormat> token_format_from_string(const std::string& name);

// lines: one token per line, blank line = chapter break.
// columns: whitespace-separated token + label columns, columns 2..k become
// layers named col1..col(k-1).
std::pair<TokenSequence, std::vector<AnnotationLayer>> read_tokens(const std::string& bytes,
                                                                   TokenFormat format);
std::string write_tokens(const TokenSequence& seq, const std::vector<AnnotationLayer>& layers,
                         TokenFormat format);

// Newline-delimited JSON: a summary header line, then one line per record.
std::string write_alignment_report(const AlignmentResult& result);
AlignmentResult read_alignment_report(const std::string& bytes);

// Same shape for corruption logs: spec + achieved rates header, then the
// edit records in application order.
std::string write_corruption_log(const CorruptionLog& log);
CorruptionLog read_corruption_log(const std::string& bytes);

struct BenchGrid {
  std::vector<CorruptionSpec> specs;
  std::vector<int> hash_lengths;
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> seeds;
};

BenchGrid read_bench_grid(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace hashshare
