#include "qplr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qplr/error.hpp"

namespace qplr::io {

std::string version() { return QPLR_VERSION; }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const OutputMeta& meta, const std::vector<std::string>& columns, const std::vector<Row>& rows) {
  std::ostringstream out;
  out << "# qplr " << version() << '\n';
  out << "# command: " << meta.command << '\n';
  out << "# config_hash: " << meta.config_hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw InvalidArgument("runner", "CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const auto* d = std::get_if<double>(&row[i]))
        out << format_double(*d);
      else if (const auto* l = std::get_if<long>(&row[i]))
        out << *l;
      else
        out << std::get<std::string>(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("runner", "cannot write " + path.string());
  out << text;
  if (!out) throw Error("runner", "failed writing " + path.string());
}

}  // namespace

void write_csv(const std::filesystem::path& path, const OutputMeta& meta, const std::vector<std::string>& columns,
               const std::vector<Row>& rows) {
  write_text(path, format_csv(meta, columns, rows));
}

Json with_meta(const OutputMeta& meta, const Json& fields) {
  Json j;
  j["version"] = version();
  j["command"] = meta.command;
  j["config_hash"] = meta.config_hash;
  for (const auto& item : fields.items()) j[item.key()] = item.value();
  return j;
}

void write_json(const std::filesystem::path& path, const OutputMeta& meta, const Json& fields) {
  write_text(path, with_meta(meta, fields).dump(2) + "\n");
}

}  // namespace qplr::io
