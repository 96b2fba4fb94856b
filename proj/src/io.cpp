#include "betafact/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace betafact {

namespace {

constexpr std::array<char, 6> kMagic = {'B', 'F', 'M', 'A', 'T', '1'};
constexpr char kColumnMajorTag = 'C';

void put_u64_le(std::ostream& out, std::uint64_t value) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return value;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ','))
      row.push_back(parse_double(field));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("read_matrix: ragged CSV in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_matrix: empty file " + path.string());
  Matrix values(static_cast<Index>(rows.size()),
                static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < values.rows(); ++r)
    for (Index c = 0; c < values.cols(); ++c)
      values(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return values;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix: cannot open " + path.string());
  out.write(kMagic.data(), kMagic.size());
  out.put(kColumnMajorTag);
  out.put('\0');
  put_u64_le(out, static_cast<std::uint64_t>(values.rows()));
  put_u64_le(out, static_cast<std::uint64_t>(values.cols()));
  for (Index c = 0; c < values.cols(); ++c)
    for (Index r = 0; r < values.rows(); ++r)
      put_u64_le(out, std::bit_cast<std::uint64_t>(values(r, c)));
  if (!out) throw std::runtime_error("write_matrix: write failed for " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_matrix: cannot open " + path.string());
  std::array<char, 6> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) return read_csv_matrix(path);

  const char layout = static_cast<char>(in.get());
  in.get();  // reserved
  if (layout != kColumnMajorTag)
    throw std::runtime_error("read_matrix: unsupported layout tag in " + path.string());
  const std::uint64_t rows = get_u64_le(in);
  const std::uint64_t cols = get_u64_le(in);
  if (!in) throw std::runtime_error("read_matrix: truncated header in " + path.string());
  if (rows == 0 || cols == 0 || rows > (1ull << 32) || cols > (1ull << 32))
    throw std::runtime_error("read_matrix: implausible dimensions in " + path.string());

  Matrix values(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index c = 0; c < values.cols(); ++c)
    for (Index r = 0; r < values.rows(); ++r)
      values(r, c) = std::bit_cast<double>(get_u64_le(in));
  if (!in) throw std::runtime_error("read_matrix: truncated payload in " + path.string());
  if (in.get() != std::ifstream::traits_type::eof())
    throw std::runtime_error("read_matrix: trailing bytes in " + path.string());
  return values;
}

std::string format_double(double value) {
  std::array<char, 32> buffer;
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer.data(), end);
}

double parse_double(const std::string& text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("parse_double: cannot parse '" + text + "'");
  return value;
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& objective_trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path.string());
  out << "iteration,objective\n";
  for (std::size_t i = 0; i < objective_trace.size(); ++i)
    out << i << ',' << format_double(objective_trace[i]) << '\n';
  if (!out) throw std::runtime_error("write_trace_csv: write failed");
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? ',' : '\n');
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? ',' : '\n');
  if (!out) throw std::runtime_error("write_csv: write failed");
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::string field;
    std::stringstream fields(line);
    while (std::getline(fields, field, ',')) row.push_back(field);
    if (!line.empty() && line.back() == ',') row.push_back("");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace betafact
