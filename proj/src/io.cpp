#include "fraclat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fraclat/errors.hpp"

namespace fraclat::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) text_ += ',';
    text_ += header_[i];
  }
  text_ += '\n';
}

void Csv::row(std::span<const double> values) {
  if (values.size() != header_.size())
    throw Error("csv row has " + std::to_string(values.size()) + " values for " + std::to_string(header_.size()) +
                " columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_number(values[i]);
  }
  text_ += '\n';
  ++rows_;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  write_atomic(path, doc.dump(2) + "\n");
}

void write_csv(const std::filesystem::path& path, const Csv& csv, nlohmann::ordered_json meta) {
  meta["artifact_version"] = artifact_version;
  meta["columns"] = csv.header();
  meta["rows"] = csv.rows();
  write_atomic(path, csv.text());
  auto sidecar = path;
  sidecar += ".meta.json";
  write_json(sidecar, meta);
}

}  // namespace fraclat::io
