#include "gsn/embedding_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gsn/params_io.hpp"

namespace gsn {

namespace {

template <class U>
void put_le(std::ostream& out, U value) {
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

template <class U>
U get_le(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw std::runtime_error("truncated embedding file");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void write_embeddings_text(const std::filesystem::path& path, const Matrix& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << x.rows() << ' ' << x.cols() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", x(i, c));
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_embeddings_binary(const std::filesystem::path& path, const Matrix& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kEmbeddingMagic, 4);
  put_le<std::uint32_t>(out, kEmbeddingVersion);
  put_le<std::uint64_t>(out, x.rows());
  put_le<std::uint64_t>(out, x.cols());
  for (double v : x.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

Matrix read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kEmbeddingMagic, 4) == 0) {
    if (get_le<std::uint32_t>(in) != kEmbeddingVersion) {
      throw std::runtime_error("unsupported embedding file version");
    }
    const auto rows = get_le<std::uint64_t>(in);
    const auto cols = get_le<std::uint64_t>(in);
    Matrix x(rows, cols);
    for (double& v : x.values()) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    return x;
  }

  in.clear();
  in.seekg(0);
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw std::runtime_error("embedding header must be 'N k'");
  Matrix x(rows, cols);
  std::string token;
  for (double& v : x.values()) {
    if (!(in >> token)) throw std::runtime_error("embedding file has too few values");
    v = parse_double(token);
  }
  if (in >> token) throw std::runtime_error("embedding file has trailing values");
  return x;
}

}  // namespace gsn
