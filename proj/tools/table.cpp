#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace jostlab::cli {
namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Complex columns are recognised from the first row; an empty table keeps
// the plain names.
std::vector<bool> complex_columns(const Table& t) {
  std::vector<bool> out(t.columns.size(), false);
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) throw std::invalid_argument("table row width does not match columns");
  }
  if (!t.rows.empty()) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out[c] = std::holds_alternative<Complex>(t.rows.front()[c]);
  }
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::holds_alternative<Complex>(row[c]) != out[c]) throw std::invalid_argument("table rows are not homogeneous");
    }
  }
  return out;
}

nlohmann::ordered_json json_number(double x) {
  // JSON has no NaN; non-finite values are rejected before writing.
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string render_table(const Table& table, Format format) {
  const std::vector<bool> is_complex = complex_columns(table);
  if (format == Format::csv) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c > 0) out += ',';
      out += is_complex[c] ? table.columns[c] + "_re," + table.columns[c] + "_im" : table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out += ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) out += number(v);
              else if constexpr (std::is_same_v<T, std::int64_t>) out += std::to_string(v);
              else if constexpr (std::is_same_v<T, std::string>) out += csv_field(v);
              else out += number(v.real()) + "," + number(v.imag());
            },
            row[c]);
      }
      out += '\n';
    }
    return out;
  }

  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string& name = table.columns[c];
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) obj[name] = json_number(v);
            else if constexpr (std::is_same_v<T, Complex>) {
              obj[name + "_re"] = json_number(v.real());
              obj[name + "_im"] = json_number(v.imag());
            } else obj[name] = v;
          },
          row[c]);
    }
    doc.push_back(std::move(obj));
  }
  return doc.dump(2, ' ', false, nlohmann::ordered_json::error_handler_t::strict) + "\n";
}

void write_table(const Table& table, Format format, const std::filesystem::path& path) {
  const std::string text = render_table(table, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("cannot write output file: " + path.string());
}

std::string first_non_finite(const Table& table) {
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      bool bad = false;
      if (const auto* d = std::get_if<double>(&row[c])) bad = !std::isfinite(*d);
      if (const auto* z = std::get_if<Complex>(&row[c])) bad = !std::isfinite(z->real()) || !std::isfinite(z->imag());
      if (bad) return table.columns[c];
    }
  }
  return {};
}

}  // namespace jostlab::cli
