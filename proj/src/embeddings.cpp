#include <charconv>
#include <fstream>
#include <sstream>

#include "argmine/error.hpp"
#include "argmine/features.hpp"

namespace argmine {

const std::vector<float>* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors_.find(word);
  return it == vectors_.end() ? nullptr : &it->second;
}

void EmbeddingTable::insert(const std::string& word, std::vector<float> vec) {
  if (vectors_.empty() && dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw ConfigError("embedding for '" + word + "' has " + std::to_string(vec.size()) +
                      " components, table has " + std::to_string(dim_));
  }
  vectors_[word] = std::move(vec);
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable read_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      std::size_t count = 0, header_dim = 0;
      if (parse_number(fields[0], count) && parse_number(fields[1], header_dim)) {
        dim = header_dim;
        continue;
      }
    }
    if (fields.size() < 2) throw ParseError("embedding row without vector components", line_no, 1);
    const std::size_t row_dim = fields.size() - 1;
    if (dim == 0) dim = row_dim;
    if (row_dim != dim) {
      throw ParseError("ragged embedding row: expected " + std::to_string(dim) + " components, got " +
                           std::to_string(row_dim),
                       line_no, 1);
    }
    std::vector<float> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(fields[k + 1], vec[k])) {
        throw ParseError("bad number '" + std::string(fields[k + 1]) + "' in embedding row", line_no, 1);
      }
    }
    const std::string word(fields[0]);
    if (table.find(word)) {
      table.warnings.push_back("duplicate word '" + word + "' at line " + std::to_string(line_no) +
                               "; keeping the last occurrence");
    }
    table.insert(word, std::move(vec));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings file " + path.string());
  return read_embeddings(in);
}

std::vector<double> sentence_embedding(std::span<const std::string> tokens, const EmbeddingTable& table) {
  std::vector<double> sum(table.dimension(), 0.0);
  for (const auto& t : tokens) {
    const auto* v = table.find(t);
    if (!v) continue;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
  }
  return sum;
}

}  // namespace argmine
