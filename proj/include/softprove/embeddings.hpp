#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace softprove {

/// Token -> fixed-dimension vector. Read-only once loaded.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dimension);

  /// Lowercases `token`; a token already present keeps its first vector.
  /// Returns false when the token was a duplicate.
  bool add(std::string token, std::span<const float> vector);

  std::size_t dimension() const { return dimension_; }
  std::size_t vocab_size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Vector of a (lowercase) token, or nothing when out of vocabulary.
  std::optional<std::span<const float>> find(std::string_view token) const;

 private:
  std::size_t dimension_;
  std::vector<float> data_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Loads GloVe text (`token v1 ... vd` per line). The dimension comes from the
/// first line. Throws FormatError, DimensionMismatch or EmptySource.
EmbeddingStore load_embeddings(std::istream& source, std::optional<std::size_t> limit = {});
EmbeddingStore load_embeddings_file(const std::string& path,
                                    std::optional<std::size_t> limit = {});

/// Mean of the in-vocabulary vectors of a symbol's underscore-separated tokens.
struct SymbolVector {
  std::string symbol;
  std::optional<std::vector<double>> vector;  ///< empty when every token is OOV

  bool absent() const { return !vector.has_value(); }
};

SymbolVector symbol_embedding(const EmbeddingStore& store, std::string_view symbol);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine(std::span<const double> a, std::span<const double> b);

/// 1.0 for identical symbols, otherwise max(0, cosine) of the symbol
/// embeddings, and 0.0 when either embedding is absent.
double weak_unify_score(const EmbeddingStore& store, std::string_view a, std::string_view b);

/// Memoizes symbol embeddings and pair scores for one proof search. Results are
/// bit-identical to the uncached functions. Not safe for concurrent use.
class SimilarityCache {
 public:
  explicit SimilarityCache(const EmbeddingStore& store) : store_(store) {}

  double score(std::string_view a, std::string_view b);
  const SymbolVector& embedding(std::string_view symbol);
  const EmbeddingStore& store() const { return store_; }

 private:
  const EmbeddingStore& store_;
  std::unordered_map<std::string, SymbolVector> symbols_;
  std::unordered_map<std::string, double> pairs_;
};

// ---- binary cache ---------------------------------------------------------

using ContentHash = std::array<std::uint8_t, 32>;

/// SHA-256 of a file's bytes. Throws ConfigError when unreadable.
ContentHash file_content_hash(const std::string& path);

/// Layout: "SPEMB1", 32-byte source hash, u32 dimension, u32 vocab size, then
/// per token a u32 byte length, the token bytes and `dimension` f32 values.
/// All integers and floats little-endian.
void write_embedding_cache(const EmbeddingStore& store, const ContentHash& source_hash,
                           const std::string& cache_path);

/// Reads a cache file; nothing if missing, malformed, or built from a source
/// with a different hash.
std::optional<EmbeddingStore> read_embedding_cache(const std::string& cache_path,
                                                   const ContentHash& expected_hash);

/// Loads `source_path` through the binary cache, regenerating the cache when
/// the source content changed.
EmbeddingStore load_embeddings_cached(const std::string& source_path,
                                      const std::string& cache_path);

}  // namespace softprove
