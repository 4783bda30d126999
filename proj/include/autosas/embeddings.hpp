#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autosas/text.hpp"

namespace autosas {

enum class VectorFormat { Text, Binary };

std::optional<VectorFormat> parse_vector_format(std::string_view name);

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }

  // Returns false (and keeps the old vector) when the word is already present.
  bool add(std::string word, std::span<const float> vec);
  // nullptr when absent.
  const float* find(std::string_view word) const;
  const std::vector<std::string>& words() const { return words_; }

  void set_idf(const std::string& word, double idf);
  std::optional<double> idf(std::string_view word) const;
  bool has_idf() const { return !idf_.empty(); }
  double max_idf() const { return max_idf_; }

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, double> idf_;
  double max_idf_ = 0.0;
};

// word2vec text ("word v1 ... vd", optional "count dim" header line) or
// binary ("count dim\n" then word, a space and dim little-endian float32).
EmbeddingTable load_vectors(const std::filesystem::path& path, VectorFormat format);
void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path, VectorFormat format);

// "word<TAB>idf" per line.
void load_idf_sidecar(EmbeddingTable& table, const std::filesystem::path& path);

enum class Weighting { Uniform, Idf };

// Mean (or idf-weighted mean) of the vectors of in-vocabulary word tokens.
// Lookup tries the lowercased surface, then the surface as written. All-OOV
// and empty docs give the zero vector. Words without an idf entry take the
// table's largest idf.
std::vector<double> embed_response(const TaggedDoc& doc, const EmbeddingTable& table, Weighting weighting);

// Idf-weighted mean using the table's own idf entries.
std::vector<double> embed_document(const TaggedDoc& doc, const EmbeddingTable& table);

// Source of the document-level embedding block.
class DocumentEmbeddingProvider {
 public:
  virtual ~DocumentEmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> embed(const TaggedDoc& doc) const = 0;
};

// Idf-weighted mean over a word-vector table. The idf map overrides the
// table's sidecar; an optional unit-length common component is projected out
// of every output.
class IdfMeanProvider final : public DocumentEmbeddingProvider {
 public:
  IdfMeanProvider(std::shared_ptr<const EmbeddingTable> table,
                  std::map<std::string, double> idf = {},
                  std::vector<double> common_component = {});

  std::string name() const override { return "idf_mean"; }
  std::size_t dim() const override { return table_->dim(); }
  std::vector<double> embed(const TaggedDoc& doc) const override;

  const std::map<std::string, double>& idf() const { return idf_; }
  const std::vector<double>& common_component() const { return common_; }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
  std::map<std::string, double> idf_;
  double max_idf_ = 0.0;
  std::vector<double> common_;
};

// Smoothed idf over documents: log((1 + N) / (1 + df)) + 1, restricted to
// words present in the table.
std::map<std::string, double> fit_idf(std::span<const TaggedDoc> docs, const EmbeddingTable& table);

// First principal direction of the rows (uncentred), by power iteration.
std::vector<double> principal_direction(std::span<const std::vector<double>> rows);

}  // namespace autosas
