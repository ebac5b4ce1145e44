#include "softprove/embeddings.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>

#include "softprove/errors.hpp"

namespace softprove {

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
}

bool EmbeddingStore::add(std::string token, std::span<const float> vector) {
  if (vector.size() != dimension_)
    throw std::invalid_argument("vector dimension does not match the store");
  if (token.empty()) throw std::invalid_argument("empty token");
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (index_.contains(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const float>> EmbeddingStore::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second * dimension_, dimension_);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

}  // namespace

EmbeddingStore load_embeddings(std::istream& source, std::optional<std::size_t> limit) {
  std::optional<EmbeddingStore> store;
  std::vector<float> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t loaded = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (limit && loaded >= *limit) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw FormatError(line_no, "token without vector components");
    const std::size_t dim = fields.size() - 1;
    if (!store) store.emplace(dim);
    if (dim != store->dimension()) throw DimensionMismatch(line_no, store->dimension(), dim);
    values.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      auto f = fields[k + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw FormatError(line_no, "non-numeric component '" + std::string(f) + "'");
    }
    store->add(std::string(fields[0]), values);
    ++loaded;
  }
  if (!store) throw EmptySource();
  return std::move(*store);
}

EmbeddingStore load_embeddings_file(const std::string& path, std::optional<std::size_t> limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read embeddings file: " + path);
  return load_embeddings(in, limit);
}

SymbolVector symbol_embedding(const EmbeddingStore& store, std::string_view symbol) {
  SymbolVector out{std::string(symbol), std::nullopt};
  std::vector<double> sum(store.dimension(), 0.0);
  std::size_t found = 0;
  std::size_t start = 0;
  while (start <= symbol.size()) {
    std::size_t end = symbol.find('_', start);
    if (end == std::string_view::npos) end = symbol.size();
    auto token = symbol.substr(start, end - start);
    if (!token.empty()) {
      if (auto vec = store.find(token)) {
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*vec)[k];
        ++found;
      }
    }
    start = end + 1;
  }
  if (found == 0) return out;
  for (double& x : sum) x /= static_cast<double>(found);
  out.vector = std::move(sum);
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

double score_vectors(const SymbolVector& a, const SymbolVector& b) {
  if (a.absent() || b.absent()) return 0.0;
  return std::clamp(cosine(*a.vector, *b.vector), 0.0, 1.0);
}

}  // namespace

double weak_unify_score(const EmbeddingStore& store, std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  return score_vectors(symbol_embedding(store, a), symbol_embedding(store, b));
}

const SymbolVector& SimilarityCache::embedding(std::string_view symbol) {
  auto it = symbols_.find(std::string(symbol));
  if (it != symbols_.end()) return it->second;
  return symbols_.emplace(std::string(symbol), symbol_embedding(store_, symbol)).first->second;
}

double SimilarityCache::score(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  std::string key = a < b ? std::string(a) + '\x1f' + std::string(b)
                          : std::string(b) + '\x1f' + std::string(a);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  const SymbolVector& ea = embedding(a);
  const SymbolVector& eb = embedding(b);
  double s = score_vectors(ea, eb);
  pairs_.emplace(std::move(key), s);
  return s;
}

// ---- binary cache ---------------------------------------------------------

namespace {

constexpr char kMagic[6] = {'S', 'P', 'E', 'M', 'B', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return true;
}

}  // namespace

ContentHash file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  ContentHash hash{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), hash.data(), &len);
  return hash;
}

void write_embedding_cache(const EmbeddingStore& store, const ContentHash& source_hash,
                           const std::string& cache_path) {
  std::ofstream out(cache_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write embedding cache: " + cache_path);
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(source_hash.data()), source_hash.size());
  put_u32(out, static_cast<std::uint32_t>(store.dimension()));
  put_u32(out, static_cast<std::uint32_t>(store.vocab_size()));
  for (const auto& token : store.tokens()) {
    put_u32(out, static_cast<std::uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    const std::span<const float> vec = *store.find(token);
    for (float x : vec) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
  if (!out) throw ConfigError("failed writing embedding cache: " + cache_path);
}

std::optional<EmbeddingStore> read_embedding_cache(const std::string& cache_path,
                                                   const ContentHash& expected_hash) {
  std::ifstream in(cache_path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kMagic];
  ContentHash hash{};
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic))
    return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(hash.data()), hash.size()) || hash != expected_hash)
    return std::nullopt;
  std::uint32_t dim = 0, vocab = 0;
  if (!get_u32(in, dim) || !get_u32(in, vocab) || dim == 0) return std::nullopt;
  EmbeddingStore store(dim);
  std::vector<float> values(dim);
  std::string token;
  for (std::uint32_t i = 0; i < vocab; ++i) {
    std::uint32_t len = 0;
    if (!get_u32(in, len)) return std::nullopt;
    token.resize(len);
    if (!in.read(token.data(), len)) return std::nullopt;
    for (auto& x : values) {
      std::uint32_t bits = 0;
      if (!get_u32(in, bits)) return std::nullopt;
      x = std::bit_cast<float>(bits);
    }
    store.add(token, values);
  }
  return store;
}

EmbeddingStore load_embeddings_cached(const std::string& source_path,
                                      const std::string& cache_path) {
  const ContentHash hash = file_content_hash(source_path);
  if (auto cached = read_embedding_cache(cache_path, hash)) return std::move(*cached);
  EmbeddingStore store = load_embeddings_file(source_path);
  write_embedding_cache(store, hash, cache_path);
  return store;
}

}  // namespace softprove
