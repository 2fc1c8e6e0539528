#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fraclat::io {

inline constexpr const char* artifact_version = "0.1.0";

// 17 significant digits, scientific
std::string format_number(double v);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  void row(std::span<const double> values);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  std::vector<std::string> header_;
  std::string text_;
  std::size_t rows_ = 0;
};

// Writes to `<path>.tmp` and renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// CSV plus `<path>.meta.json` holding `meta` with the artifact version added.
void write_csv(const std::filesystem::path& path, const Csv& csv, nlohmann::ordered_json meta);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace fraclat::io
