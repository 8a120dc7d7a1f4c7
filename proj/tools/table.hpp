#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "jostlab/riemann.hpp"

namespace jostlab::cli {

enum class Format { csv, json };

using Cell = std::variant<double, std::int64_t, std::string, Complex>;

// Column names are given once; complex columns expand to name_re, name_im.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Throws std::runtime_error when the path cannot be written and
// std::invalid_argument when a row does not match the columns.
void write_table(const Table& table, Format format, const std::filesystem::path& path);

std::string render_table(const Table& table, Format format);

// Name of the first column holding a NaN or infinite value, empty if none.
std::string first_non_finite(const Table& table);

}  // namespace jostlab::cli
