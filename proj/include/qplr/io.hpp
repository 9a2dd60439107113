#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "qplr/config.hpp"

namespace qplr::io {

/// Provenance written at the top of every output file.
struct OutputMeta {
  std::string command;
  std::string config_hash;
};

std::string version();

/// %.17g, enough to round-trip a double.
std::string format_double(double v);

using Cell = std::variant<double, long, std::string>;
using Row = std::vector<Cell>;

/// Comma-separated table with '#'-prefixed metadata lines:
///   # qplr <version>
///   # command: <command>
///   # config_hash: <hash>
/// followed by the column names and the rows.
void write_csv(const std::filesystem::path& path, const OutputMeta& meta, const std::vector<std::string>& columns,
               const std::vector<Row>& rows);
std::string format_csv(const OutputMeta& meta, const std::vector<std::string>& columns, const std::vector<Row>& rows);

/// Flat JSON object; version, command and config_hash come first, then the
/// given fields in insertion order.
void write_json(const std::filesystem::path& path, const OutputMeta& meta, const Json& fields);
Json with_meta(const OutputMeta& meta, const Json& fields);

}  // namespace qplr::io
