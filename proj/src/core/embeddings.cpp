#include "autosas/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "autosas/error.hpp"

namespace autosas {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::uint32_t float_bits_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

const float* lookup(const EmbeddingTable& table, const Token& tok) {
  const std::string lower = to_lower_ascii(tok.surface);
  const float* v = table.find(lower);
  if (!v && lower != tok.surface) v = table.find(tok.surface);
  return v;
}

std::string key_of(const EmbeddingTable& table, const Token& tok) {
  std::string lower = to_lower_ascii(tok.surface);
  if (table.find(lower) || lower == tok.surface) return lower;
  return tok.surface;
}

std::vector<double> weighted_mean(const TaggedDoc& doc, const EmbeddingTable& table,
                                  const auto& weight_of) {
  std::vector<double> acc(table.dim(), 0.0);
  double total = 0.0;
  for (const Token& tok : doc.tokens) {
    if (!tok.is_word()) continue;
    const float* v = lookup(table, tok);
    if (!v) continue;
    const double w = weight_of(tok);
    if (w <= 0.0) continue;
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * static_cast<double>(v[k]);
    total += w;
  }
  if (total > 0.0)
    for (double& x : acc) x /= total;
  return acc;
}

}  // namespace

std::optional<VectorFormat> parse_vector_format(std::string_view name) {
  if (name == "text" || name == "txt") return VectorFormat::Text;
  if (name == "binary" || name == "bin") return VectorFormat::Binary;
  return std::nullopt;
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingTable::add(std::string word, std::span<const float> vec) {
  if (vec.size() != dim_)
    throw FormatError("vector for '" + word + "' has " + std::to_string(vec.size()) +
                      " values, expected " + std::to_string(dim_));
  if (index_.count(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vec.begin(), vec.end());
  return true;
}

const float* EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
}

void EmbeddingTable::set_idf(const std::string& word, double idf) {
  if (!(idf >= 0.0) || !std::isfinite(idf)) throw InvalidArgument("idf for '" + word + "' must be finite and nonnegative");
  idf_[word] = idf;
  max_idf_ = std::max(max_idf_, idf);
}

std::optional<double> EmbeddingTable::idf(std::string_view word) const {
  auto it = idf_.find(std::string(word));
  if (it == idf_.end()) return std::nullopt;
  return it->second;
}

EmbeddingTable load_vectors(const std::filesystem::path& path, VectorFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vectors: " + path.string());
  const std::string where = path.string();

  if (format == VectorFormat::Binary) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError(where + ": missing header");
    auto f = split_ws(header);
    std::size_t count = 0, dim = 0;
    if (f.size() != 2 || !parse_number(f[0], count) || !parse_number(f[1], dim) || dim == 0)
      throw FormatError(where + ": header must be '<count> <dim>'");
    EmbeddingTable table(dim);
    std::vector<unsigned char> raw(dim * 4);
    std::vector<float> vec(dim);
    for (std::size_t i = 0; i < count; ++i) {
      std::string word;
      int c = in.get();
      while (c == ' ' || c == '\n' || c == '\r') c = in.get();
      while (c != EOF && c != ' ') {
        word.push_back(static_cast<char>(c));
        c = in.get();
      }
      if (c == EOF) throw FormatError(where + ": truncated binary payload at entry " + std::to_string(i + 1));
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
      if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw FormatError(where + ": truncated binary payload at entry " + std::to_string(i + 1));
      for (std::size_t k = 0; k < dim; ++k) {
        const std::uint32_t bits = float_bits_le(raw.data() + 4 * k);
        std::memcpy(&vec[k], &bits, sizeof(float));
      }
      table.add(std::move(word), vec);
    }
    return table;
  }

  std::string line;
  std::size_t line_no = 0;
  std::optional<EmbeddingTable> table;
  std::vector<float> vec;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = split_ws(line);
    if (f.empty()) continue;
    if (!table) {
      std::size_t count = 0, dim = 0;
      if (f.size() == 2 && parse_number(f[0], count) && parse_number(f[1], dim)) {
        if (dim == 0) throw FormatError(where + ":" + std::to_string(line_no) + ": dimension must be positive");
        table.emplace(dim);
        continue;
      }
      if (f.size() < 2) throw FormatError(where + ":" + std::to_string(line_no) + ": row has no values");
      table.emplace(f.size() - 1);
    }
    if (f.size() - 1 != table->dim())
      throw FormatError(where + ":" + std::to_string(line_no) + ": expected " + std::to_string(table->dim()) +
                        " values, got " + std::to_string(f.size() - 1));
    vec.resize(table->dim());
    for (std::size_t k = 0; k < vec.size(); ++k)
      if (!parse_number(f[k + 1], vec[k]))
        throw FormatError(where + ":" + std::to_string(line_no) + ": bad number '" + std::string(f[k + 1]) + "'");
    table->add(std::string(f[0]), vec);
  }
  if (!table) throw FormatError(where + ": no vectors");
  return std::move(*table);
}

void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path, VectorFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write vectors: " + path.string());
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[32];
  for (const std::string& word : table.words()) {
    const float* v = table.find(word);
    out << word;
    if (format == VectorFormat::Binary) {
      out << ' ';
      for (std::size_t k = 0; k < table.dim(); ++k) {
        std::uint32_t bits;
        std::memcpy(&bits, &v[k], sizeof bits);
        const unsigned char bytes[4] = {static_cast<unsigned char>(bits), static_cast<unsigned char>(bits >> 8),
                                        static_cast<unsigned char>(bits >> 16), static_cast<unsigned char>(bits >> 24)};
        out.write(reinterpret_cast<const char*>(bytes), 4);
      }
    } else {
      for (std::size_t k = 0; k < table.dim(); ++k) {
        std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(v[k]));
        out << ' ' << buf;
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing vectors: " + path.string());
}

void load_idf_sidecar(EmbeddingTable& table, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open idf file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    double value = 0.0;
    if (tab == std::string::npos || !parse_number(std::string_view(line).substr(tab + 1), value) ||
        !(value >= 0.0))
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'word<TAB>idf'");
    table.set_idf(line.substr(0, tab), value);
  }
}

std::vector<double> embed_response(const TaggedDoc& doc, const EmbeddingTable& table, Weighting weighting) {
  if (weighting == Weighting::Uniform) return weighted_mean(doc, table, [](const Token&) { return 1.0; });
  return embed_document(doc, table);
}

std::vector<double> embed_document(const TaggedDoc& doc, const EmbeddingTable& table) {
  if (!table.has_idf()) return weighted_mean(doc, table, [](const Token&) { return 1.0; });
  return weighted_mean(doc, table, [&](const Token& tok) {
    return table.idf(key_of(table, tok)).value_or(table.max_idf());
  });
}

IdfMeanProvider::IdfMeanProvider(std::shared_ptr<const EmbeddingTable> table,
                                 std::map<std::string, double> idf,
                                 std::vector<double> common_component)
    : table_(std::move(table)), idf_(std::move(idf)), common_(std::move(common_component)) {
  if (!table_) throw InvalidArgument("document embedding provider needs a vector table");
  if (!common_.empty() && common_.size() != table_->dim())
    throw SchemaError("common component length does not match the table dimension");
  for (const auto& [w, v] : idf_) max_idf_ = std::max(max_idf_, v);
}

std::vector<double> IdfMeanProvider::embed(const TaggedDoc& doc) const {
  std::vector<double> out;
  if (idf_.empty()) {
    out = embed_document(doc, *table_);
  } else {
    out = weighted_mean(doc, *table_, [&](const Token& tok) {
      auto it = idf_.find(key_of(*table_, tok));
      return it == idf_.end() ? max_idf_ : it->second;
    });
  }
  if (!common_.empty()) {
    double dot = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) dot += out[k] * common_[k];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= dot * common_[k];
  }
  return out;
}

std::map<std::string, double> fit_idf(std::span<const TaggedDoc> docs, const EmbeddingTable& table) {
  std::map<std::string, std::size_t> df;
  for (const TaggedDoc& doc : docs) {
    std::set<std::string> seen;
    for (const Token& tok : doc.tokens)
      if (tok.is_word() && lookup(table, tok)) seen.insert(key_of(table, tok));
    for (const auto& w : seen) ++df[w];
  }
  std::map<std::string, double> idf;
  const double n = static_cast<double>(docs.size());
  for (const auto& [w, count] : df) idf[w] = std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0;
  return idf;
}

std::vector<double> principal_direction(std::span<const std::vector<double>> rows) {
  if (rows.empty()) return {};
  const std::size_t d = rows.front().size();
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<double> next(d, 0.0);
    for (const auto& r : rows) {
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += r[k] * v[k];
      for (std::size_t k = 0; k < d; ++k) next[k] += dot * r[k];
    }
    double norm = 0.0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return std::vector<double>(d, 0.0);
    double delta = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      next[k] /= norm;
      delta += std::abs(next[k] - v[k]);
    }
    v = std::move(next);
    if (delta < 1e-12) break;
  }
  return v;
}

}  // namespace autosas
