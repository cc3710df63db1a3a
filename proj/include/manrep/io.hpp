// Copyright (c) 2026 manrep contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manrep/embedding.hpp"
#include "manrep/metric_repair.hpp"
#include "manrep/types.hpp"

namespace manrep {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io {

/// 17 significant digits: enough to reproduce any double bit for bit.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view token, const std::string& where) {
  token = trim(token);
  double value = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end)
    throw FormatError(where + ": cannot parse number '" +
                      std::string(token) + "'");
  return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t pos = 0; pos <= line.size(); ++pos) {
    if (pos == line.size() || line[pos] == ',') {
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
  }
  return fields;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

inline void write_matrix_csv(const std::filesystem::path& path,
                             const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline Matrix read_matrix_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError(path.string() + ": empty matrix file");
  const auto first = split_fields(lines.front());
  const Index cols = static_cast<Index>(first.size());
  Matrix m(static_cast<Index>(lines.size()), cols);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (static_cast<Index>(fields.size()) != cols)
      throw FormatError(path.string() + ": ragged row " + std::to_string(r));
    for (Index c = 0; c < cols; ++c)
      m(static_cast<Index>(r), c) =
          parse_double(fields[static_cast<std::size_t>(c)],
                       path.string() + " row " + std::to_string(r));
  }
  return m;
}

inline bool is_missing_token(std::string_view token) {
  token = trim(token);
  return token.empty() || token == "NaN" || token == "nan" || token == "NAN";
}

/// Dataset CSV: one point per row; an empty field or a NaN token marks
/// a missing entry.
inline MaskedDataset read_dataset_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError(path.string() + ": empty dataset");
  const Index cols = static_cast<Index>(split_fields(lines.front()).size());
  Matrix values = Matrix::Zero(static_cast<Index>(lines.size()), cols);
  BoolMatrix mask =
      BoolMatrix::Constant(static_cast<Index>(lines.size()), cols, true);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (static_cast<Index>(fields.size()) != cols)
      throw FormatError(path.string() + ": ragged row " + std::to_string(r));
    for (Index c = 0; c < cols; ++c) {
      const auto token = fields[static_cast<std::size_t>(c)];
      if (is_missing_token(token)) {
        mask(static_cast<Index>(r), c) = false;
      } else {
        values(static_cast<Index>(r), c) =
            parse_double(token, path.string() + " row " + std::to_string(r));
      }
    }
  }
  return MaskedDataset(std::move(values), std::move(mask));
}

inline void write_dataset_csv(const std::filesystem::path& path,
                              const MaskedDataset& data) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.m(); ++j) {
      if (j) out << ',';
      if (data.mask()(i, j)) out << format_double(data.values()(i, j));
    }
    out << '\n';
  }
}

inline BoolMatrix read_mask_csv(const std::filesystem::path& path) {
  const Matrix m = read_matrix_csv(path);
  BoolMatrix mask(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0 && m(i, j) != 1.0)
        throw FormatError(path.string() + ": mask entries must be 0 or 1");
      mask(i, j) = m(i, j) == 1.0;
    }
  return mask;
}

inline void write_mask_csv(const std::filesystem::path& path,
                           const BoolMatrix& mask) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j) {
      if (j) out << ',';
      out << (mask(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

/// Embedding CSV: header "index,c1,...,cd", then one row per embedded
/// point carrying its original index.
inline void write_embedding_csv(const std::filesystem::path& path,
                                const Embedding& emb) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "index";
  for (Index c = 0; c < emb.coords.cols(); ++c) out << ",c" << (c + 1);
  out << '\n';
  for (Index r = 0; r < emb.coords.rows(); ++r) {
    out << emb.kept_indices[static_cast<std::size_t>(r)];
    for (Index c = 0; c < emb.coords.cols(); ++c)
      out << ',' << format_double(emb.coords(r, c));
    out << '\n';
  }
}

struct EmbeddingFile {
  std::vector<Index> indices;
  Matrix coords;
};

inline EmbeddingFile read_embedding_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || split_fields(lines.front()).empty() ||
      trim(split_fields(lines.front()).front()) != "index")
    throw FormatError(path.string() + ": missing embedding header");
  const Index cols = static_cast<Index>(split_fields(lines.front()).size()) - 1;
  if (cols < 1) throw FormatError(path.string() + ": no coordinate columns");
  EmbeddingFile out;
  out.coords.resize(static_cast<Index>(lines.size()) - 1, cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (static_cast<Index>(fields.size()) != cols + 1)
      throw FormatError(path.string() + ": ragged row " + std::to_string(r));
    out.indices.push_back(static_cast<Index>(
        parse_double(fields[0], path.string() + " index column")));
    for (Index c = 0; c < cols; ++c)
      out.coords(static_cast<Index>(r) - 1, c) = parse_double(
          fields[static_cast<std::size_t>(c) + 1], path.string());
  }
  return out;
}

inline void write_vector_csv(const std::filesystem::path& path,
                             const Vector& v) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

inline std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<int> labels;
  labels.reserve(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const double v = parse_double(lines[r], path.string() + " row " +
                                                std::to_string(r));
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

inline void write_labels_csv(const std::filesystem::path& path,
                             const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (int label : labels) out << label << '\n';
}

inline void write_edges_csv(const std::filesystem::path& path,
                            const NeighborGraph& g) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (const auto& e : g.edges)
    out << e.i << ',' << e.j << ',' << format_double(e.weight) << '\n';
}

/// One JSON object per violation, lexicographic (i, k, j) order.
inline void write_violations_jsonl(const std::filesystem::path& path,
                                   const ViolationReport& report) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (const auto& v : report.triples)
    out << "{\"i\":" << v.i << ",\"k\":" << v.k << ",\"j\":" << v.j
        << ",\"slack\":" << format_double(v.slack) << "}\n";
}

// ---- IDX (MNIST) ----------------------------------------------------

namespace detail {

inline std::uint32_t read_be_u32(std::istream& in, const std::string& where) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw FormatError(where + ": truncated header");
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

}  // namespace detail

struct IdxImages {
  Matrix pixels;  // n x (rows*cols), scaled to [0, 1] by /255
  Index image_rows = 0;
  Index image_cols = 0;
};

inline IdxImages read_idx_images(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const auto magic = detail::read_be_u32(in, path.string());
  if (magic != 0x00000803u)
    throw FormatError(path.string() + ": bad image magic number");
  const auto n = detail::read_be_u32(in, path.string());
  const auto rows = detail::read_be_u32(in, path.string());
  const auto cols = detail::read_be_u32(in, path.string());
  const std::size_t count =
      std::size_t(n) * std::size_t(rows) * std::size_t(cols);
  std::vector<unsigned char> raw(count);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(count)))
    throw FormatError(path.string() + ": truncated image data");
  IdxImages out;
  out.image_rows = rows;
  out.image_cols = cols;
  out.pixels.resize(static_cast<Index>(n),
                    static_cast<Index>(rows) * static_cast<Index>(cols));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < std::size_t(rows) * cols; ++p)
      out.pixels(static_cast<Index>(i), static_cast<Index>(p)) =
          raw[i * rows * cols + p] / 255.0;
  return out;
}

inline std::vector<int> read_idx_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const auto magic = detail::read_be_u32(in, path.string());
  if (magic != 0x00000801u)
    throw FormatError(path.string() + ": bad label magic number");
  const auto n = detail::read_be_u32(in, path.string());
  std::vector<unsigned char> raw(n);
  if (!in.read(reinterpret_cast<char*>(raw.data()), n))
    throw FormatError(path.string() + ": truncated label data");
  return std::vector<int>(raw.begin(), raw.end());
}

}  // namespace io

}  // namespace manrep
