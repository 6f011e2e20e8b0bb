#include "hashshare/corrupt.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <tuple>

#include "hashshare/editdist.hpp"

namespace hashshare {

const char* to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::Add: return "add";
    case CorruptionKind::Substitute: return "substitute";
    case CorruptionKind::Delete: return "delete";
    case CorruptionKind::TokensSplit: return "tokens_split";
    case CorruptionKind::TokensMerge: return "tokens_merge";
    case CorruptionKind::OcrScramble: return "ocr_scramble";
  }
  return "unknown";
}

std::optional<CorruptionKind> corruption_kind_from_string(const std::string& name) {
  if (name == "add") return CorruptionKind::Add;
  if (name == "substitute") return CorruptionKind::Substitute;
  if (name == "delete") return CorruptionKind::Delete;
  if (name == "tokens_split") return CorruptionKind::TokensSplit;
  if (name == "tokens_merge") return CorruptionKind::TokensMerge;
  if (name == "ocr_scramble") return CorruptionKind::OcrScramble;
  return std::nullopt;
}

namespace {

// Tokens plus the chapter id each one belongs to.
struct Working {
  std::vector<std::string> tokens;
  std::vector<std::size_t> chapter;

  static Working from(const TokenSequence& seq) {
    Working w;
    w.tokens = seq.tokens;
    w.chapter.reserve(seq.tokens.size());
    std::size_t id = 0;
    for (std::size_t len : seq.chapter_lengths) {
      w.chapter.insert(w.chapter.end(), len, id);
      ++id;
    }
    if (w.chapter.size() != w.tokens.size()) {
      // No declared chapters: everything in chapter 0.
      w.chapter.assign(w.tokens.size(), 0);
    }
    return w;
  }

  TokenSequence to_sequence() const {
    TokenSequence seq;
    seq.tokens = tokens;
    std::size_t run = 0;
    for (std::size_t i = 0; i < chapter.size(); ++i) {
      ++run;
      if (i + 1 == chapter.size() || chapter[i + 1] != chapter[i]) {
        seq.chapter_lengths.push_back(run);
        run = 0;
      }
    }
    return seq;
  }
};

void apply_record(Working& w, const EditRecord& rec) {
  const std::size_t p = rec.position;
  if (p > w.tokens.size() || p + rec.original.size() > w.tokens.size()) {
    throw ParseError("corruption log position out of range");
  }
  for (std::size_t t = 0; t < rec.original.size(); ++t) {
    if (w.tokens[p + t] != rec.original[t]) {
      throw ParseError("corruption log does not match the text");
    }
  }
  // Inserted tokens inherit the chapter of the token at the edit position
  // (or of the last token when appending at the end).
  std::size_t chapter_id = 0;
  if (!w.chapter.empty()) {
    chapter_id = p < w.chapter.size() ? w.chapter[p] : w.chapter.back();
  }
  w.tokens.erase(w.tokens.begin() + p, w.tokens.begin() + p + rec.original.size());
  w.chapter.erase(w.chapter.begin() + p, w.chapter.begin() + p + rec.original.size());
  w.tokens.insert(w.tokens.begin() + p, rec.replacement.begin(), rec.replacement.end());
  w.chapter.insert(w.chapter.begin() + p, rec.replacement.size(), chapter_id);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

std::string confusion_chars(char c) {
  switch (c) {
    case 'a': return "oe";  case 'b': return "hd";  case 'c': return "eo";
    case 'd': return "bcl"; case 'e': return "co";  case 'f': return "t";
    case 'g': return "q";   case 'h': return "bn";  case 'i': return "l1";
    case 'j': return "i";   case 'k': return "h";   case 'l': return "1i";
    case 'm': return "n";   case 'n': return "mr";  case 'o': return "0c";
    case 'p': return "q";   case 'q': return "gp";  case 'r': return "n";
    case 's': return "5";   case 't': return "f";   case 'u': return "vn";
    case 'v': return "uy";  case 'w': return "v";   case 'x': return "k";
    case 'y': return "v";   case 'z': return "s";
    case '0': return "o";   case '1': return "l";   case '5': return "s";
    default: break;
  }
  if (c >= 'A' && c <= 'Z') {
    std::string lower = confusion_chars(static_cast<char>(c - 'A' + 'a'));
    for (char& ch : lower) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return lower;
  }
  return "";
}

constexpr const char kNoiseChars[] = ".,'-;:!i1l0o";

// One character-level OCR edit: substitution 0.6, insertion 0.2, deletion 0.2.
void ocr_edit_token(std::string& token, std::mt19937_64& rng) {
  double roll = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (roll >= 0.6 && roll < 0.8) {
    // insertion
    std::size_t pos = std::uniform_int_distribution<std::size_t>(0, token.size())(rng);
    char c = kNoiseChars[uniform_index(rng, sizeof(kNoiseChars) - 1)];
    token.insert(token.begin() + pos, c);
    return;
  }
  if (roll >= 0.8 && token.size() > 1) {
    // deletion
    token.erase(token.begin() + uniform_index(rng, token.size()));
    return;
  }
  // substitution (also the fallback when a 1-char token cannot shrink)
  std::size_t pos = uniform_index(rng, token.size());
  std::string options = confusion_chars(token[pos]);
  options += kNoiseChars;
  char replacement = token[pos];
  while (replacement == token[pos]) {
    replacement = options[uniform_index(rng, options.size())];
  }
  token[pos] = replacement;
}

std::size_t sample_matching(std::mt19937_64& rng, std::size_t bound,
                            const std::function<bool(std::size_t)>& accept,
                            const char* what) {
  for (int tries = 0; tries < 10000; ++tries) {
    std::size_t p = uniform_index(rng, bound);
    if (accept(p)) return p;
  }
  for (std::size_t p = 0; p < bound; ++p) {
    if (accept(p)) return p;
  }
  throw ParamError(std::string("no candidate position for ") + what);
}

}  // namespace

std::pair<TokenSequence, CorruptionLog> corrupt(const TokenSequence& seq,
                                                const CorruptionSpec& spec) {
  if (seq.tokens.empty()) throw ParamError("cannot corrupt an empty sequence");
  if (spec.kind == CorruptionKind::OcrScramble) {
    auto out = ocr_scramble(seq, spec.wer_target, spec.cer_target, spec.seed);
    out.second.spec = spec;
    return out;
  }
  if (spec.ratio < 0.0 || spec.ratio > 0.2) {
    throw ParamError("corruption ratio must be in [0, 0.2]");
  }

  const std::size_t original_len = seq.tokens.size();
  const std::size_t edits =
      static_cast<std::size_t>(static_cast<double>(original_len) * spec.ratio);
  if (spec.kind == CorruptionKind::Delete && edits >= original_len) {
    throw ParamError("delete ratio would remove the whole sequence");
  }

  CorruptionLog log;
  log.spec = spec;
  log.original_token_count = original_len;

  Working w = Working::from(seq);
  std::mt19937_64 rng(spec.seed);
  // The original text doubles as the sampling dictionary: drawing a uniform
  // position yields tokens by their empirical frequency.
  const std::vector<std::string>& dictionary = seq.tokens;

  for (std::size_t e = 0; e < edits; ++e) {
    EditRecord rec;
    rec.kind = spec.kind;
    switch (spec.kind) {
      case CorruptionKind::Add: {
        rec.position =
            std::uniform_int_distribution<std::size_t>(0, w.tokens.size())(rng);
        rec.replacement.push_back(dictionary[uniform_index(rng, dictionary.size())]);
        break;
      }
      case CorruptionKind::Substitute: {
        rec.position = uniform_index(rng, w.tokens.size());
        const std::string& victim = w.tokens[rec.position];
        std::string replacement = victim;
        for (int tries = 0; replacement == victim; ++tries) {
          if (tries >= 10000) {
            throw ParamError("substitute needs at least two distinct token types");
          }
          replacement = dictionary[uniform_index(rng, dictionary.size())];
        }
        rec.original.push_back(victim);
        rec.replacement.push_back(std::move(replacement));
        break;
      }
      case CorruptionKind::Delete: {
        rec.position = uniform_index(rng, w.tokens.size());
        rec.original.push_back(w.tokens[rec.position]);
        break;
      }
      case CorruptionKind::TokensSplit: {
        rec.position = sample_matching(
            rng, w.tokens.size(),
            [&](std::size_t p) { return w.tokens[p].size() >= 2; }, "tokens_split");
        const std::string& victim = w.tokens[rec.position];
        std::size_t cut =
            std::uniform_int_distribution<std::size_t>(1, victim.size() - 1)(rng);
        rec.original.push_back(victim);
        rec.replacement.push_back(victim.substr(0, cut));
        rec.replacement.push_back(victim.substr(cut));
        break;
      }
      case CorruptionKind::TokensMerge: {
        if (w.tokens.size() < 2) throw ParamError("tokens_merge needs two tokens");
        rec.position = sample_matching(
            rng, w.tokens.size() - 1,
            [&](std::size_t p) { return w.chapter[p] == w.chapter[p + 1]; },
            "tokens_merge");
        rec.original.push_back(w.tokens[rec.position]);
        rec.original.push_back(w.tokens[rec.position + 1]);
        rec.replacement.push_back(rec.original[0] + rec.original[1]);
        break;
      }
      case CorruptionKind::OcrScramble:
        break;  // handled above
    }
    apply_record(w, rec);
    log.records.push_back(std::move(rec));
  }
  TokenSequence corrupted = w.to_sequence();
  std::tie(log.achieved_wer, log.achieved_cer) = measure_wer_cer(seq, corrupted);
  return {std::move(corrupted), std::move(log)};
}

std::pair<TokenSequence, CorruptionLog> ocr_scramble(const TokenSequence& seq,
                                                     double wer_target, double cer_target,
                                                     std::uint64_t seed) {
  if (seq.tokens.empty()) throw ParamError("cannot corrupt an empty sequence");
  if (wer_target < 0.0 || wer_target > 1.0 || cer_target < 0.0 || cer_target > 1.0) {
    throw ParamError("WER/CER targets must be in [0, 1]");
  }
  if (cer_target > 0.0 && wer_target == 0.0) {
    throw ParamError("cer_target > 0 requires wer_target > 0");
  }

  CorruptionLog log;
  log.spec.kind = CorruptionKind::OcrScramble;
  log.spec.wer_target = wer_target;
  log.spec.cer_target = cer_target;
  log.spec.seed = seed;
  log.original_token_count = seq.tokens.size();

  Working w = Working::from(seq);
  if (wer_target == 0.0) {
    return {w.to_sequence(), std::move(log)};
  }

  std::mt19937_64 rng(seed);
  const std::size_t token_count = seq.tokens.size();
  std::size_t joined_chars = token_count > 0 ? token_count - 1 : 0;
  for (const auto& t : seq.tokens) joined_chars += t.size();

  std::size_t selected_count = static_cast<std::size_t>(
      std::llround(wer_target * static_cast<double>(token_count)));
  selected_count = std::clamp<std::size_t>(selected_count, 1, token_count);
  std::size_t edit_target = static_cast<std::size_t>(
      std::llround(cer_target * static_cast<double>(joined_chars)));
  // Every selected token receives at least one character edit.
  edit_target = std::max(edit_target, selected_count);

  std::vector<std::size_t> indices(token_count);
  std::iota(indices.begin(), indices.end(), 0);
  for (std::size_t i = 0; i < selected_count; ++i) {
    std::size_t j = i + uniform_index(rng, token_count - i);
    std::swap(indices[i], indices[j]);
  }
  std::vector<std::size_t> selected(indices.begin(), indices.begin() + selected_count);
  std::sort(selected.begin(), selected.end());

  std::vector<std::string> scrambled;
  scrambled.reserve(selected_count);
  for (std::size_t idx : selected) scrambled.push_back(w.tokens[idx]);

  for (auto& token : scrambled) ocr_edit_token(token, rng);
  for (std::size_t e = selected_count; e < edit_target; ++e) {
    ocr_edit_token(scrambled[uniform_index(rng, scrambled.size())], rng);
  }

  for (std::size_t i = 0; i < selected_count; ++i) {
    EditRecord rec;
    rec.kind = CorruptionKind::OcrScramble;
    rec.position = selected[i];
    rec.original.push_back(w.tokens[selected[i]]);
    rec.replacement.push_back(scrambled[i]);
    if (rec.replacement[0].empty()) rec.replacement[0] = ".";  // keep tokens non-empty
    if (rec.replacement[0] == rec.original[0]) continue;       // edits cancelled out
    apply_record(w, rec);
    log.records.push_back(std::move(rec));
  }

  TokenSequence corrupted = w.to_sequence();
  auto [wer, cer] = measure_wer_cer(seq, corrupted);
  log.achieved_wer = wer;
  log.achieved_cer = cer;
  return {std::move(corrupted), std::move(log)};
}

std::pair<double, double> measure_wer_cer(const TokenSequence& original,
                                          const TokenSequence& corrupted) {
  if (original.tokens.empty()) throw ParamError("cannot measure against an empty original");

  auto join = [](std::span<const std::string> tokens) {
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) text.push_back(' ');
      text += tokens[i];
    }
    return text;
  };

  std::size_t token_distance = 0, char_distance = 0;
  const bool chapter_wise = !original.chapter_lengths.empty() &&
                            original.chapter_lengths.size() == corrupted.chapter_lengths.size();
  if (chapter_wise) {
    std::size_t a_off = 0, b_off = 0;
    for (std::size_t c = 0; c < original.chapter_lengths.size(); ++c) {
      auto a = std::span(original.tokens).subspan(a_off, original.chapter_lengths[c]);
      auto b = std::span(corrupted.tokens).subspan(b_off, corrupted.chapter_lengths[c]);
      token_distance += edit_distance(a, b);
      std::string a_text = join(a), b_text = join(b);
      char_distance += edit_distance(std::span<const char>(a_text.data(), a_text.size()),
                                     std::span<const char>(b_text.data(), b_text.size()));
      a_off += original.chapter_lengths[c];
      b_off += corrupted.chapter_lengths[c];
    }
  } else {
    token_distance = edit_distance(std::span(original.tokens), std::span(corrupted.tokens));
    std::string a_text = join(original.tokens), b_text = join(corrupted.tokens);
    char_distance += edit_distance(std::span<const char>(a_text.data(), a_text.size()),
                                   std::span<const char>(b_text.data(), b_text.size()));
  }

  std::size_t total_chars = original.tokens.size() - 1;
  for (const auto& t : original.tokens) total_chars += t.size();
  double wer = static_cast<double>(token_distance) /
               static_cast<double>(original.tokens.size());
  double cer = static_cast<double>(char_distance) / static_cast<double>(total_chars);
  return {wer, cer};
}

TokenSequence replay(const TokenSequence& original, const CorruptionLog& log) {
  if (log.original_token_count != original.tokens.size()) {
    throw ParseError("corruption log was recorded against a different text");
  }
  Working w = Working::from(original);
  for (const EditRecord& rec : log.records) {
    apply_record(w, rec);
  }
  return w.to_sequence();
}

}  // namespace hashshare
