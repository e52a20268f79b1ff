#include "lcem/corpus_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include "lcem/error.hpp"
#include "text_io.hpp"

namespace lcem {
namespace {

static_assert(std::endian::native == std::endian::little,
              "embedding files are read with native little-endian layout");

constexpr std::array<char, 4> kMagic = {'L', 'C', 'E', 'M'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 8 + 4;

template <typename T>
T read_le(const char* bytes) {
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <typename T>
void append_le(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

}  // namespace

using text::read_file;
using text::split_lines;
using text::split_on;
using text::split_whitespace;
using text::write_file;

std::string ascii_lower(std::string value) {
  for (char& c : value) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return value;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < kHeaderBytes || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": missing LCEM magic");
  }
  const char* p = bytes.data() + 4;
  const auto version = read_le<std::uint16_t>(p);
  const auto layer = read_le<std::uint16_t>(p + 2);
  const auto rows = read_le<std::uint64_t>(p + 4);
  const auto dim = read_le<std::uint32_t>(p + 12);
  if (version != kEmbeddingFormatVersion) {
    throw Error(ErrorCode::MalformedHeader,
                path.string() + ": unsupported format version " + std::to_string(version));
  }
  if (dim != 0 && rows > (std::uint64_t{1} << 40) / dim) {
    throw Error(ErrorCode::MalformedHeader, path.string() + ": implausible shape");
  }
  const std::uint64_t expected = rows * dim * sizeof(float);
  const std::uint64_t payload = bytes.size() - kHeaderBytes;
  if (payload != expected) {
    throw Error(ErrorCode::TruncatedPayload,
                path.string() + ": header declares " + std::to_string(rows) + "x" +
                    std::to_string(dim) + " floats, payload holds " +
                    std::to_string(payload / sizeof(float)));
  }

  EmbeddingMatrix matrix;
  matrix.layer = layer;
  matrix.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  if (expected > 0) std::memcpy(matrix.data.data(), bytes.data() + kHeaderBytes, expected);
  for (Eigen::Index r = 0; r < matrix.data.rows(); ++r) {
    if (!matrix.data.row(r).allFinite()) {
      throw Error(ErrorCode::NonFiniteValue,
                  path.string() + ": non-finite value in row " + std::to_string(r));
    }
  }
  return matrix;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix) {
  if (matrix.layer < 0 || matrix.layer > 0xFFFF) {
    throw Error(ErrorCode::InvalidArgument, "layer index does not fit in u16");
  }
  std::string bytes(kMagic.begin(), kMagic.end());
  append_le<std::uint16_t>(bytes, kEmbeddingFormatVersion);
  append_le<std::uint16_t>(bytes, static_cast<std::uint16_t>(matrix.layer));
  append_le<std::uint64_t>(bytes, static_cast<std::uint64_t>(matrix.rows()));
  append_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(matrix.dim()));
  bytes.append(reinterpret_cast<const char*>(matrix.data.data()),
               static_cast<std::size_t>(matrix.data.size()) * sizeof(float));
  write_file(path, bytes);
}

TokenTable parse_tokens(const std::string& body) {
  const auto lines = split_lines(body);
  if (lines.empty() || lines.front() != kTokenHeader) {
    throw Error(ErrorCode::MalformedHeader, "token file must start with '#lcem-tokens v1'");
  }
  TokenTable table;
  table.entries.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_on(lines[i], '\t');
    const std::string where = "line " + std::to_string(i + 1);
    if (fields.size() < 5) throw Error(ErrorCode::MissingField, where + ": expected 5 fields");
    if (fields.size() > 5) throw Error(ErrorCode::MalformedLine, where + ": expected 5 fields");
    TokenRecord record;
    if (!text::parse_number(fields[0], record.row)) {
      throw Error(ErrorCode::MissingField, where + ": bad row index");
    }
    if (fields[1].empty()) throw Error(ErrorCode::MissingField, where + ": empty surface");
    record.surface = std::string(fields[1]);
    if (!text::parse_number(fields[2], record.sentence_id) || !text::parse_number(fields[3], record.position)) {
      throw Error(ErrorCode::MissingField, where + ": bad sentence id or position");
    }
    if (fields[4].empty()) throw Error(ErrorCode::MissingField, where + ": empty language");
    record.language = ascii_lower(std::string(fields[4]));
    table.entries.push_back(std::move(record));
  }

  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const TokenRecord& a, const TokenRecord& b) { return a.row < b.row; });
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const std::size_t row = table.entries[i].row;
    if (i > 0 && row == table.entries[i - 1].row) {
      throw Error(ErrorCode::DuplicateRow, "row " + std::to_string(row) + " appears twice");
    }
    if (row != i) {
      throw Error(ErrorCode::GapInRows, "row " + std::to_string(i) + " is missing");
    }
  }

  std::set<std::tuple<std::string_view, std::int64_t, std::int64_t>> seen;
  for (const auto& record : table.entries) {
    if (!seen.emplace(record.language, record.sentence_id, record.position).second) {
      throw Error(ErrorCode::DuplicatePosition,
                  "sentence " + std::to_string(record.sentence_id) + " position " +
                      std::to_string(record.position) + " repeated for language " +
                      record.language);
    }
  }
  return table;
}

TokenTable load_tokens(const std::filesystem::path& path) {
  try {
    return parse_tokens(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_tokens(const std::filesystem::path& path, const TokenTable& tokens) {
  std::string out = kTokenHeader;
  out += '\n';
  for (const auto& r : tokens.entries) {
    out += std::to_string(r.row);
    out += '\t';
    out += r.surface;
    out += '\t';
    out += std::to_string(r.sentence_id);
    out += '\t';
    out += std::to_string(r.position);
    out += '\t';
    out += r.language;
    out += '\n';
  }
  write_file(path, out);
}

ParallelCorpus load_corpus(const std::filesystem::path& source_path,
                           const std::filesystem::path& target_path,
                           std::string source_language, std::string target_language) {
  auto source_text = read_file(source_path);
  auto target_text = read_file(target_path);
  const auto source_lines = split_lines(source_text);
  const auto target_lines = split_lines(target_text);
  if (source_lines.size() != target_lines.size()) {
    throw Error(ErrorCode::LineCountMismatch,
                std::to_string(source_lines.size()) + " source lines vs " +
                    std::to_string(target_lines.size()) + " target lines");
  }
  ParallelCorpus corpus;
  corpus.source_language = ascii_lower(std::move(source_language));
  corpus.target_language = ascii_lower(std::move(target_language));
  corpus.pairs.reserve(source_lines.size());
  for (std::size_t i = 0; i < source_lines.size(); ++i) {
    SentencePair pair{split_whitespace(source_lines[i]), split_whitespace(target_lines[i])};
    if (pair.source_tokens.empty() || pair.target_tokens.empty()) {
      throw Error(ErrorCode::EmptySentence, "sentence pair " + std::to_string(i) + " is empty");
    }
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

AlignmentSet parse_alignments(const std::string& body, const ParallelCorpus& corpus) {
  auto lines = split_lines(body);
  if (lines.size() != corpus.pairs.size()) {
    throw Error(ErrorCode::LineCountMismatch,
                std::to_string(lines.size()) + " alignment lines for " +
                    std::to_string(corpus.pairs.size()) + " sentence pairs");
  }
  AlignmentSet set;
  set.links.resize(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& pair = corpus.pairs[i];
    auto& links = set.links[i];
    for (const auto& token : split_whitespace(lines[i])) {
      const auto dash = token.find('-');
      AlignmentLink link;
      if (dash == std::string::npos ||
          !text::parse_number(std::string_view(token).substr(0, dash), link.first) ||
          !text::parse_number(std::string_view(token).substr(dash + 1), link.second)) {
        throw Error(ErrorCode::MalformedLink,
                    "line " + std::to_string(i + 1) + ": '" + token + "'");
      }
      if (link.first >= pair.source_tokens.size() || link.second >= pair.target_tokens.size()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "line " + std::to_string(i + 1) + ": link " + token + " outside " +
                        std::to_string(pair.source_tokens.size()) + "x" +
                        std::to_string(pair.target_tokens.size()));
      }
      links.push_back(link);
    }
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
  }
  return set;
}

AlignmentSet load_alignments(const std::filesystem::path& path, const ParallelCorpus& corpus) {
  return parse_alignments(read_file(path), corpus);
}

ValidatedDataset validate_bundle(EmbeddingMatrix embeddings, TokenTable tokens,
                                 std::string dataset_id) {
  if (static_cast<std::size_t>(embeddings.rows()) != tokens.size()) {
    throw Error(ErrorCode::RowCountMismatch,
                std::to_string(embeddings.rows()) + " embedding rows vs " +
                    std::to_string(tokens.size()) + " token records");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens.entries[i].row != i) {
      throw Error(ErrorCode::GapInRows, "token table rows must be contiguous from 0");
    }
  }
  if (!embeddings.data.allFinite()) {
    for (Eigen::Index r = 0; r < embeddings.rows(); ++r) {
      if (!embeddings.data.row(r).allFinite()) {
        throw Error(ErrorCode::NonFiniteValue, "non-finite value in row " + std::to_string(r));
      }
    }
  }

  ValidatedDataset dataset;
  for (const auto& record : tokens.entries) {
    dataset.partition_[record.language].push_back(record.row);
  }
  dataset.embeddings_ = std::make_shared<const EmbeddingMatrix>(std::move(embeddings));
  dataset.tokens_ = std::make_shared<const TokenTable>(std::move(tokens));
  dataset.id_ = std::move(dataset_id);
  return dataset;
}

}  // namespace lcem
