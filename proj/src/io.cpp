#include "lrmipt/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lrmipt/errors.hpp"

#ifndef LRMIPT_VERSION
#define LRMIPT_VERSION "unknown"
#endif

namespace lrmipt::io {

const char* version() { return LRMIPT_VERSION; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_field(std::get<std::string>(c));
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw ResourceError("cannot write " + p.string());
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DomainError("Table::add: row width differs from header");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell_text(r[i]);
    out += '\n';
  }
  return out;
}

nlohmann::json Table::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rs.push_back(row);
  }
  return {{"columns", columns}, {"rows", rs}};
}

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw Error("git_blob_sha1: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void RunOutput::add_table(const std::string& stem, const Table& t, Format f) {
  if (f == Format::Csv)
    files.push_back({stem + ".csv", t.to_csv()});
  else
    files.push_back({stem + ".json", t.to_json().dump(2) + "\n"});
}

nlohmann::json manifest(const RunOutput& run) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& a : run.files)
    files.push_back({{"name", a.name}, {"bytes", a.content.size()}, {"sha1", git_blob_sha1(a.content)}});
  nlohmann::json m = {{"schema", "lrmipt-manifest/1"},
                      {"command", run.command},
                      {"version", version()},
                      {"parameters", run.parameters},
                      {"summary", run.summary},
                      {"files", files}};
  m["content_hash"] = git_blob_sha1(m.dump());
  return m;
}

WrittenRun write_run(const std::filesystem::path& output_dir, const RunOutput& run) {
  namespace fs = std::filesystem;
  const nlohmann::json m = manifest(run);
  const std::string text = m.dump(2) + "\n";
  WrittenRun w;
  w.content_hash = m["content_hash"];
  w.directory = output_dir / run.command / w.content_hash.substr(0, 16);
  std::error_code ec;
  if (fs::exists(w.directory / "manifest.json")) {
    if (read_file(w.directory / "manifest.json") != text)
      throw ResourceError("write_run: " + w.directory.string() + " holds a different run");
    w.reused = true;
    return w;
  }
  // stage next to the target, then publish with one rename
  const fs::path stage = output_dir / run.command / (".stage-" + w.content_hash);
  fs::remove_all(stage, ec);
  fs::create_directories(stage, ec);
  if (ec) throw ResourceError("write_run: cannot create " + stage.string());
  for (const auto& a : run.files) write_file(stage / a.name, a.content);
  write_file(stage / "manifest.json", text);
  fs::rename(stage, w.directory, ec);
  if (ec) {
    fs::remove_all(stage, ec);
    if (!fs::exists(w.directory / "manifest.json")) throw ResourceError("write_run: cannot publish run");
    w.reused = true;
  }
  return w;
}

}  // namespace lrmipt::io
