#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "entwine/errors.hpp"
#include "entwine/lattice.hpp"

namespace entwine {

/// Shortest exact decimal form is not required; 17 significant digits always
/// round-trip a double.
std::string format_float(double x);

/// CSV sink: header line first, LF endings, floats via format_float.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);
  void row(std::span<const std::string> cells);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t width_;
};

/// NDJSON sink: one record per line, LF endings.
class NdjsonWriter {
 public:
  explicit NdjsonWriter(const std::filesystem::path& path);
  void record(const nlohmann::json& j);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

/// Charge-field slices in the canonical column layout
/// t,z,phi1,phi2,phi3,phi4,normalization.
void write_slices_csv(const std::filesystem::path& path, std::span<const ChargeField> slices,
                      const LatticeSpec& spec);
void write_slices_ndjson(const std::filesystem::path& path, std::span<const ChargeField> slices,
                         const LatticeSpec& spec);

}  // namespace entwine
