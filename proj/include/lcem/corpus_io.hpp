#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lcem {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Contextualized vectors for one layer, one row per token occurrence.
struct EmbeddingMatrix {
  int layer = 0;
  RowMatrix<float> data;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index dim() const { return data.cols(); }
};

struct TokenRecord {
  std::size_t row = 0;
  std::string surface;
  std::int64_t sentence_id = 0;
  std::int64_t position = 0;
  std::string language;

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

struct TokenTable {
  std::vector<TokenRecord> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const TokenTable&, const TokenTable&) = default;
};

struct SentencePair {
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::string source_language;
  std::string target_language;
};

using AlignmentLink = std::pair<std::size_t, std::size_t>;

/// Per sentence pair, sorted and deduplicated (source_index, target_index) links.
struct AlignmentSet {
  std::vector<std::vector<AlignmentLink>> links;
};

inline constexpr std::uint16_t kEmbeddingFormatVersion = 1;
inline constexpr char kTokenHeader[] = "#lcem-tokens v1";

EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& matrix);

TokenTable load_tokens(const std::filesystem::path& path);
void write_tokens(const std::filesystem::path& path, const TokenTable& tokens);

/// Parses a token file body already held in memory.
TokenTable parse_tokens(const std::string& text);

ParallelCorpus load_corpus(const std::filesystem::path& source_path,
                           const std::filesystem::path& target_path,
                           std::string source_language, std::string target_language);

AlignmentSet load_alignments(const std::filesystem::path& path, const ParallelCorpus& corpus);
AlignmentSet parse_alignments(const std::string& text, const ParallelCorpus& corpus);

/// Lowercases ASCII letters; other bytes pass through untouched.
std::string ascii_lower(std::string text);

class ValidatedDataset;

ValidatedDataset validate_bundle(EmbeddingMatrix embeddings, TokenTable tokens,
                                 std::string dataset_id = {});

/// An embedding matrix bundled with its row-aligned token table. Immutable
/// after construction and safe to share between threads.
class ValidatedDataset {
 public:
  const EmbeddingMatrix& embeddings() const { return *embeddings_; }
  const TokenTable& tokens() const { return *tokens_; }
  std::size_t rows() const { return tokens_->size(); }
  int layer() const { return embeddings_->layer; }

  /// Row indices per language code; disjoint, union is [0, rows).
  const std::map<std::string, std::vector<std::size_t>>& language_partition() const {
    return partition_;
  }

  const std::string& id() const { return id_; }

 private:
  friend ValidatedDataset validate_bundle(EmbeddingMatrix, TokenTable, std::string);

  std::shared_ptr<const EmbeddingMatrix> embeddings_;
  std::shared_ptr<const TokenTable> tokens_;
  std::map<std::string, std::vector<std::size_t>> partition_;
  std::string id_;
};

}  // namespace lcem
