#include "ponder/cli/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>

#include "ponder/errors.hpp"

namespace ponder::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const grid_magic = "# ponder-grid 1";
const char* const table_magic = "# ponder-table 1";

void check_label(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos) throw IOError("label '" + s + "' contains a comma or newline");
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const fs::path& where) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw IOError(where.string() + ": bad number '" + s + "'");
  return x;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

fs::path with_suffix(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

// "# <tag>,name,unit,e0,e1,..." back into an axis
Axis parse_axis_line(const std::string& line, const std::string& tag, const fs::path& where) {
  const std::string prefix = "# " + tag + ",";
  if (line.rfind(prefix, 0) != 0) throw IOError(where.string() + ": expected '" + prefix + "' header");
  auto parts = split(line.substr(prefix.size()));
  if (parts.size() < 4) throw IOError(where.string() + ": " + tag + " axis needs at least two edges");
  Axis a;
  a.name = parts[0];
  a.unit = parts[1];
  for (std::size_t i = 2; i < parts.size(); ++i) a.edges.push_back(parse_double(parts[i], where));
  a.validate();
  return a;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw IOError("cannot format number");
  return std::string(buf.data(), p);
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw IOError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IOError("cannot move " + tmp.string() + " into place");
  }
}

std::vector<fs::path> write_grid(const SpectralDensityGrid& grid, const fs::path& stem, const json& sidecar) {
  check_label(grid.sweep.name);
  check_label(grid.sweep.unit);
  check_label(grid.observable.name);
  check_label(grid.observable.unit);
  const std::size_t ns = grid.sweep.bins(), no = grid.observable.bins();
  if (grid.density.size() != ns * no || grid.outside.size() != ns) throw IOError("grid shape does not match its axes");

  std::string csv;
  csv += grid_magic;
  csv += "\n# sweep," + grid.sweep.name + "," + grid.sweep.unit + "," + join(grid.sweep.edges) + "\n";
  csv += "# observable," + grid.observable.name + "," + grid.observable.unit + "," + join(grid.observable.edges) + "\n";
  csv += "# outside";
  for (auto n : grid.outside) csv += "," + std::to_string(n);
  csv += "\n";
  for (std::size_t o = 0; o < no; ++o) {
    for (std::size_t s = 0; s < ns; ++s) {
      if (s) csv += ',';
      csv += format_double(grid.at(s, o));
    }
    csv += '\n';
  }
  const fs::path csv_path = with_suffix(stem, ".csv"), json_path = with_suffix(stem, ".json");

  json meta = sidecar;
  meta["format"] = "ponder-grid/1";
  meta["csv"] = csv_path.filename().string();
  meta["axes"] = {{"sweep", {{"name", grid.sweep.name}, {"unit", grid.sweep.unit}, {"bins", ns}}},
                  {"observable", {{"name", grid.observable.name}, {"unit", grid.observable.unit}, {"bins", no}}}};
  meta["normalization"] =
      "each sweep column sums to 1 over the in-range observable bins (0 when empty); samples outside the "
      "observable range are counted in the '# outside' header row";
  meta["metadata"] = grid.metadata;

  write_file_atomic(csv_path, csv);
  write_file_atomic(json_path, meta.dump(2) + "\n");
  return {csv_path, json_path};
}

SpectralDensityGrid read_grid(const fs::path& csv) {
  const auto lines = read_lines(csv);
  if (lines.size() < 4 || lines[0] != grid_magic) throw IOError(csv.string() + ": not a ponder grid");
  SpectralDensityGrid g;
  g.sweep = parse_axis_line(lines[1], "sweep", csv);
  g.observable = parse_axis_line(lines[2], "observable", csv);
  const std::size_t ns = g.sweep.bins(), no = g.observable.bins();
  if (lines[3].rfind("# outside", 0) != 0) throw IOError(csv.string() + ": missing '# outside' row");
  auto out = split(lines[3]);
  if (out.size() != ns + 1) throw IOError(csv.string() + ": outside row has the wrong length");
  for (std::size_t s = 0; s < ns; ++s) g.outside.push_back(std::stoull(out[s + 1]));
  if (lines.size() != 4 + no) throw IOError(csv.string() + ": expected " + std::to_string(no) + " data rows");
  g.density.assign(ns * no, 0.0);
  for (std::size_t o = 0; o < no; ++o) {
    const auto cells = split(lines[4 + o]);
    if (cells.size() != ns) throw IOError(csv.string() + ": row " + std::to_string(o) + " has the wrong length");
    for (std::size_t s = 0; s < ns; ++s) g.density[o * ns + s] = parse_double(cells[s], csv);
  }
  fs::path side = csv;
  side.replace_extension(".json");
  if (fs::exists(side)) {
    std::ifstream in(side);
    try {
      g.metadata = json::parse(in).value("metadata", json::object());
    } catch (const json::exception& e) {
      throw IOError(side.string() + ": " + e.what());
    }
  }
  return g;
}

std::vector<fs::path> write_table(const Table& table, const fs::path& stem, const json& sidecar) {
  if (table.columns.size() != table.values.size() || table.columns.empty()) throw IOError("table columns and values disagree");
  const std::size_t rows = table.values.front().size();
  for (const auto& c : table.values) {
    if (c.size() != rows) throw IOError("table columns differ in length");
  }
  std::string csv = std::string(table_magic) + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    check_label(table.columns[c]);
    if (c) csv += ',';
    csv += table.columns[c];
  }
  csv += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.values.size(); ++c) {
      if (c) csv += ',';
      csv += format_double(table.values[c][r]);
    }
    csv += '\n';
  }
  const fs::path csv_path = with_suffix(stem, ".csv"), json_path = with_suffix(stem, ".json");
  json meta = sidecar;
  meta["format"] = "ponder-table/1";
  meta["csv"] = csv_path.filename().string();
  meta["columns"] = table.columns;
  meta["rows"] = rows;
  write_file_atomic(csv_path, csv);
  write_file_atomic(json_path, meta.dump(2) + "\n");
  return {csv_path, json_path};
}

Table read_table(const fs::path& csv) {
  const auto lines = read_lines(csv);
  if (lines.size() < 2 || lines[0] != table_magic) throw IOError(csv.string() + ": not a ponder table");
  Table t;
  t.columns = split(lines[1]);
  t.values.assign(t.columns.size(), {});
  for (std::size_t r = 2; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != t.columns.size()) throw IOError(csv.string() + ": row " + std::to_string(r - 2) + " has the wrong length");
    for (std::size_t c = 0; c < cells.size(); ++c) t.values[c].push_back(parse_double(cells[c], csv));
  }
  return t;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IOError("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

}  // namespace ponder::cli
