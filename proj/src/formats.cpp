#include "hashshare/formats.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hashshare {

using json = nlohmann::ordered_json;

namespace {

// Splits into lines, accepting both LF and CRLF.
std::vector<std::string> split_lines(const std::string& bytes) {
  std::vector<std::string> lines;
  std::string::size_type start = 0;
  while (start <= bytes.size()) {
    auto nl = bytes.find('\n', start);
    if (nl == std::string::npos) {
      if (start < bytes.size()) lines.push_back(bytes.substr(start));
      break;
    }
    std::string line = bytes.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

bool is_blank(const std::string& line) { return line.empty(); }

bool is_whitespace_only(const std::string& line) {
  if (line.empty()) return false;
  return line.find_first_not_of(" \t\r\f\v") == std::string::npos;
}

json parse_json(const std::string& bytes, const char* what) {
  json doc = json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw ParseError(std::string(what) + ": invalid JSON");
  return doc;
}

json parse_json_line(const std::string& line, std::size_t line_no, const char* what) {
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) {
    throw ParseError(std::string(what) + ": invalid JSON on line " + std::to_string(line_no));
  }
  return doc;
}

void require(bool cond, const std::string& message) {
  if (!cond) throw ParseError(message);
}

std::vector<std::string> string_array(const json& value, const std::string& key) {
  require(value.is_array(), "shared file: key `" + key + "` must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    require(item.is_string(), "shared file: key `" + key + "` must contain strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string write_shared(const HashedCorpus& corpus) {
  json doc;
  doc["format_version"] = corpus.format_version;
  doc["hash_function"] = corpus.hash_function;
  doc["hash_length"] = corpus.hash_length;
  doc["chapter_lengths"] = corpus.chapter_lengths;
  doc["hashes"] = corpus.hashes;
  json layers = json::object();
  for (const AnnotationLayer& layer : corpus.layers) layers[layer.name] = layer.values;
  doc["layers"] = std::move(layers);
  return doc.dump() + "\n";
}

HashedCorpus read_shared(const std::string& bytes) {
  json doc = parse_json(bytes, "shared file");
  require(doc.is_object(), "shared file: top level must be an object");
  static const char* known[] = {"format_version", "hash_function", "hash_length",
                                "chapter_lengths", "hashes", "layers"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key == "tokens") throw ParseError("shared file: plain text forbidden in shared format");
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParseError("shared file: unknown key `" + key + "`");
  }
  for (const char* k : known) {
    require(doc.contains(k), "shared file: missing key `" + std::string(k) + "`");
  }

  HashedCorpus corpus;
  require(doc["format_version"].is_number_integer(),
          "shared file: key `format_version` must be an integer");
  corpus.format_version = doc["format_version"].get<int>();
  require(doc["hash_function"].is_string(),
          "shared file: key `hash_function` must be a string");
  corpus.hash_function = doc["hash_function"].get<std::string>();
  require(doc["hash_length"].is_number_integer(),
          "shared file: key `hash_length` must be an integer");
  corpus.hash_length = doc["hash_length"].get<int>();
  require(doc["chapter_lengths"].is_array(),
          "shared file: key `chapter_lengths` must be an array");
  for (const auto& item : doc["chapter_lengths"]) {
    require(item.is_number_integer() && item.get<long long>() >= 0,
            "shared file: key `chapter_lengths` must contain non-negative integers");
    corpus.chapter_lengths.push_back(item.get<std::size_t>());
  }
  corpus.hashes = string_array(doc["hashes"], "hashes");
  require(doc["layers"].is_object(), "shared file: key `layers` must be an object");
  for (const auto& [name, values] : doc["layers"].items()) {
    corpus.layers.push_back({name, string_array(values, "layers." + name)});
  }
  std::sort(corpus.layers.begin(), corpus.layers.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });

  std::vector<std::string> problems = validate(corpus);
  if (!problems.empty()) throw ParseError("shared file: " + problems.front());
  return corpus;
}

std::optional<TokenFormat> token_format_from_string(const std::string& name) {
  if (name == "lines") return TokenFormat::Lines;
  if (name == "columns") return TokenFormat::Columns;
  return std::nullopt;
}

std::pair<TokenSequence, std::vector<AnnotationLayer>> read_tokens(const std::string& bytes,
                                                                   TokenFormat format) {
  TokenSequence seq;
  std::vector<AnnotationLayer> layers;
  std::size_t chapter_tokens = 0;
  std::size_t columns = 0;  // set by the first data line in columns format

  auto close_chapter = [&] {
    if (chapter_tokens > 0) seq.chapter_lengths.push_back(chapter_tokens);
    chapter_tokens = 0;
  };

  std::vector<std::string> lines = split_lines(bytes);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::size_t line_no = i + 1;
    if (is_blank(line)) {
      close_chapter();
      continue;
    }
    if (is_whitespace_only(line)) {
      throw ParseError("token file: line " + std::to_string(line_no) +
                       ": whitespace-only line");
    }
    if (format == TokenFormat::Lines) {
      seq.tokens.push_back(line);
      ++chapter_tokens;
      continue;
    }
    std::istringstream fields_in(line);
    std::vector<std::string> fields;
    std::string field;
    while (fields_in >> field) fields.push_back(std::move(field));
    if (columns == 0) {
      columns = fields.size();
      for (std::size_t c = 1; c < columns; ++c) {
        layers.push_back({"col" + std::to_string(c), {}});
      }
    } else if (fields.size() != columns) {
      throw ParseError("token file: line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " columns, got " +
                       std::to_string(fields.size()));
    }
    seq.tokens.push_back(fields[0]);
    for (std::size_t c = 1; c < columns; ++c) layers[c - 1].values.push_back(fields[c]);
    ++chapter_tokens;
  }
  close_chapter();

  std::vector<std::string> problems = validate(seq);
  if (!problems.empty()) throw ParseError("token file: " + problems.front());
  return {std::move(seq), std::move(layers)};
}

std::string write_tokens(const TokenSequence& seq, const std::vector<AnnotationLayer>& layers,
                         TokenFormat format) {
  for (const AnnotationLayer& layer : layers) {
    if (layer.values.size() != seq.tokens.size()) {
      throw ParamError("layer `" + layer.name + "` length does not match token count");
    }
  }
  std::string out;
  std::size_t index = 0;
  std::vector<std::size_t> chapters = seq.chapter_lengths;
  if (chapters.empty()) chapters.push_back(seq.tokens.size());
  for (std::size_t c = 0; c < chapters.size(); ++c) {
    if (c > 0) out += '\n';
    for (std::size_t t = 0; t < chapters[c]; ++t, ++index) {
      out += seq.tokens[index];
      if (format == TokenFormat::Columns) {
        for (const AnnotationLayer& layer : layers) {
          out += ' ';
          out += layer.values[index];
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string write_alignment_report(const AlignmentResult& result) {
  json header;
  json summary = json::object();
  for (const auto& [status, count] : result.summary) summary[to_string(status)] = count;
  header["summary"] = std::move(summary);
  header["warnings"] = result.warnings;
  std::string out = header.dump() + "\n";
  for (const AlignmentRecord& rec : result.records) {
    json line;
    line["token"] = rec.token;
    line["status"] = to_string(rec.status);
    if (rec.creator_index) {
      line["creator_index"] = *rec.creator_index;
    } else {
      line["creator_index"] = nullptr;
    }
    line["annotations"] = rec.annotations;
    if (rec.user_span) {
      line["user_span"] = json::array({rec.user_span->first, rec.user_span->second});
    } else {
      line["user_span"] = nullptr;
    }
    out += line.dump() + "\n";
  }
  return out;
}

AlignmentResult read_alignment_report(const std::string& bytes) {
  std::vector<std::string> lines = split_lines(bytes);
  require(!lines.empty(), "alignment report: empty file");
  AlignmentResult result;

  json header = parse_json_line(lines[0], 1, "alignment report");
  require(header.is_object() && header.contains("summary") && header["summary"].is_object(),
          "alignment report: header must carry a summary object");
  for (const auto& [name, count] : header["summary"].items()) {
    auto status = alignment_status_from_string(name);
    require(status.has_value(), "alignment report: unknown status `" + name + "`");
    require(count.is_number_integer() && count.get<long long>() >= 0,
            "alignment report: summary counts must be non-negative integers");
    result.summary[*status] = count.get<std::size_t>();
  }
  if (header.contains("warnings")) {
    result.warnings = string_array(header["warnings"], "warnings");
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json line = parse_json_line(lines[i], i + 1, "alignment report");
    require(line.is_object() && line.contains("token") && line["token"].is_string() &&
                line.contains("status") && line["status"].is_string(),
            "alignment report: malformed record on line " + std::to_string(i + 1));
    AlignmentRecord rec;
    rec.token = line["token"].get<std::string>();
    auto status = alignment_status_from_string(line["status"].get<std::string>());
    require(status.has_value(), "alignment report: unknown status on line " +
                                    std::to_string(i + 1));
    rec.status = *status;
    if (line.contains("creator_index") && !line["creator_index"].is_null()) {
      require(line["creator_index"].is_number_integer(),
              "alignment report: creator_index must be an integer");
      rec.creator_index = line["creator_index"].get<std::size_t>();
    }
    if (line.contains("annotations")) {
      require(line["annotations"].is_object(),
              "alignment report: annotations must be an object");
      for (const auto& [name, value] : line["annotations"].items()) {
        require(value.is_string(), "alignment report: annotation values must be strings");
        rec.annotations[name] = value.get<std::string>();
      }
    }
    if (line.contains("user_span") && !line["user_span"].is_null()) {
      const json& span = line["user_span"];
      require(span.is_array() && span.size() == 2 && span[0].is_number_integer() &&
                  span[1].is_number_integer(),
              "alignment report: user_span must be a pair of integers");
      rec.user_span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::string write_corruption_log(const CorruptionLog& log) {
  json header;
  header["kind"] = to_string(log.spec.kind);
  header["ratio"] = log.spec.ratio;
  header["wer_target"] = log.spec.wer_target;
  header["cer_target"] = log.spec.cer_target;
  header["seed"] = log.spec.seed;
  header["original_token_count"] = log.original_token_count;
  header["achieved_wer"] = log.achieved_wer;
  header["achieved_cer"] = log.achieved_cer;
  std::string out = header.dump() + "\n";
  for (const EditRecord& rec : log.records) {
    json line;
    line["kind"] = to_string(rec.kind);
    line["position"] = rec.position;
    line["original"] = rec.original;
    line["replacement"] = rec.replacement;
    out += line.dump() + "\n";
  }
  return out;
}

CorruptionLog read_corruption_log(const std::string& bytes) {
  std::vector<std::string> lines = split_lines(bytes);
  require(!lines.empty(), "corruption log: empty file");
  CorruptionLog log;

  json header = parse_json_line(lines[0], 1, "corruption log");
  require(header.is_object() && header.contains("kind") && header["kind"].is_string(),
          "corruption log: header must carry the corruption kind");
  auto kind = corruption_kind_from_string(header["kind"].get<std::string>());
  require(kind.has_value(),
          "corruption log: unknown kind `" + header["kind"].get<std::string>() + "`");
  log.spec.kind = *kind;
  auto number = [&](const char* key) -> double {
    require(header.contains(key) && header[key].is_number(),
            "corruption log: header key `" + std::string(key) + "` must be a number");
    return header[key].get<double>();
  };
  log.spec.ratio = number("ratio");
  log.spec.wer_target = number("wer_target");
  log.spec.cer_target = number("cer_target");
  require(header.contains("seed") && header["seed"].is_number_integer(),
          "corruption log: header key `seed` must be an integer");
  log.spec.seed = header["seed"].get<std::uint64_t>();
  require(header.contains("original_token_count") &&
              header["original_token_count"].is_number_integer(),
          "corruption log: header key `original_token_count` must be an integer");
  log.original_token_count = header["original_token_count"].get<std::size_t>();
  log.achieved_wer = number("achieved_wer");
  log.achieved_cer = number("achieved_cer");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    json line = parse_json_line(lines[i], i + 1, "corruption log");
    require(line.is_object() && line.contains("kind") && line["kind"].is_string() &&
                line.contains("position") && line["position"].is_number_integer(),
            "corruption log: malformed record on line " + std::to_string(i + 1));
    EditRecord rec;
    auto rec_kind = corruption_kind_from_string(line["kind"].get<std::string>());
    require(rec_kind.has_value(),
            "corruption log: unknown kind on line " + std::to_string(i + 1));
    rec.kind = *rec_kind;
    rec.position = line["position"].get<std::size_t>();
    require(line.contains("original") && line.contains("replacement"),
            "corruption log: record missing original/replacement on line " +
                std::to_string(i + 1));
    rec.original = string_array(line["original"], "original");
    rec.replacement = string_array(line["replacement"], "replacement");
    log.records.push_back(std::move(rec));
  }
  return log;
}

BenchGrid read_bench_grid(const std::string& bytes) {
  json doc = parse_json(bytes, "bench grid");
  require(doc.is_object(), "bench grid: top level must be an object");
  for (const char* key : {"specs", "hash_lengths", "strategies", "seeds"}) {
    require(doc.contains(key) && doc[key].is_array(),
            "bench grid: key `" + std::string(key) + "` must be an array");
  }

  BenchGrid grid;
  for (const auto& entry : doc["specs"]) {
    require(entry.is_object() && entry.contains("kind") && entry["kind"].is_string(),
            "bench grid: each spec needs a string `kind`");
    CorruptionSpec spec;
    auto kind = corruption_kind_from_string(entry["kind"].get<std::string>());
    require(kind.has_value(),
            "bench grid: unknown kind `" + entry["kind"].get<std::string>() + "`");
    spec.kind = *kind;
    auto number = [&](const char* key, double fallback) {
      if (!entry.contains(key)) return fallback;
      require(entry[key].is_number(),
              "bench grid: spec key `" + std::string(key) + "` must be a number");
      return entry[key].get<double>();
    };
    spec.ratio = number("ratio", 0.0);
    spec.wer_target = number("wer", 0.0);
    spec.cer_target = number("cer", 0.0);
    grid.specs.push_back(spec);
  }
  for (const auto& item : doc["hash_lengths"]) {
    require(item.is_number_integer(), "bench grid: hash_lengths must be integers");
    grid.hash_lengths.push_back(item.get<int>());
  }
  grid.strategies = string_array(doc["strategies"], "strategies");
  for (const auto& item : doc["seeds"]) {
    require(item.is_number_integer() && item.get<long long>() >= 0,
            "bench grid: seeds must be non-negative integers");
    grid.seeds.push_back(item.get<std::uint64_t>());
  }
  require(!grid.specs.empty() && !grid.hash_lengths.empty() && !grid.strategies.empty() &&
              !grid.seeds.empty(),
          "bench grid: specs, hash_lengths, strategies, and seeds must be non-empty");
  return grid;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError("cannot read file: " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw ParseError("cannot write file: " + path);
}

}  // namespace hashshare
