#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace lrmipt::io {

using Cell = std::variant<double, long long, std::string>;

// %.17g, with nan / inf / -inf spelled out
std::string format_double(double x);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string to_csv() const;
  nlohmann::json to_json() const;  // {"columns": [...], "rows": [[...], ...]}
};

enum class Format { Csv, Json };

// SHA-1 of "blob <size>\0" + content, as git computes it
std::string git_blob_sha1(const std::string& content);

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::string command;
  nlohmann::json parameters;
  nlohmann::json summary;
  std::vector<Artifact> files;

  void add_table(const std::string& stem, const Table& t, Format f);
};

struct WrittenRun {
  std::filesystem::path directory;
  std::string content_hash;
  bool reused = false;  // identical run already on disk
};

nlohmann::json manifest(const RunOutput& run);

// <output_dir>/<command>/<hash prefix>/, never overwriting an existing run
WrittenRun write_run(const std::filesystem::path& output_dir, const RunOutput& run);

const char* version();

}  // namespace lrmipt::io
