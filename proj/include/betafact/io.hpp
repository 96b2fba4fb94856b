#pragma once

#include "betafact/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace betafact {

/// Binary matrix container: magic "BFMAT1", a layout tag byte 'C'
/// (column-major), one reserved byte, little-endian uint64 rows and cols,
/// then rows*cols little-endian doubles in column-major order. Write/read
/// round-trips are bit-exact.
void write_matrix(const std::filesystem::path& path, const Matrix& values);

/// Reads a BFMAT1 file, or plain CSV (one matrix row per line) when the
/// magic is absent.
Matrix read_matrix(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly the same double
/// ("inf"/"nan" for the non-finite values).
std::string format_double(double value);
double parse_double(const std::string& text);

/// "iteration,objective" rows, full precision.
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& objective_trace);

/// One header row plus one row per record; every cell already formatted.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace betafact
