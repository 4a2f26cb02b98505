#include "entwine/emit.hpp"

#include <cstdio>

namespace entwine {

std::string format_float(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header)
    : out_(path, std::ios::binary), path_(path), width_(header.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const std::string> cells) {
  if (cells.size() != width_) throw IoError("csv row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("close failed on " + path_.string());
}

NdjsonWriter::NdjsonWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

void NdjsonWriter::record(const nlohmann::json& j) {
  out_ << j.dump() << '\n';
  if (!out_) throw IoError("write failed on " + path_.string());
}

void NdjsonWriter::close() {
  out_.close();
  if (out_.fail()) throw IoError("close failed on " + path_.string());
}

namespace {

const char* normalization_name(Normalization n) {
  return n == Normalization::Raw ? "raw" : "renormalized";
}

}  // namespace

void write_slices_csv(const std::filesystem::path& path, std::span<const ChargeField> slices,
                      const LatticeSpec& spec) {
  const std::vector<std::string> header{"t", "z", "phi1", "phi2", "phi3", "phi4",
                                        "normalization"};
  CsvWriter csv(path, header);
  std::vector<std::string> cells(header.size());
  for (const ChargeField& f : slices) {
    cells[0] = format_float(f.t_index * spec.epsilon);
    for (int i = 0; i < f.n_sites(); ++i) {
      cells[1] = format_float(spec.site_z(i));
      for (int c = 0; c < 4; ++c) cells[2 + c] = format_float(f.phi[c][i]);
      cells[6] = normalization_name(f.normalization);
      csv.row(cells);
    }
  }
  csv.close();
}

void write_slices_ndjson(const std::filesystem::path& path, std::span<const ChargeField> slices,
                         const LatticeSpec& spec) {
  NdjsonWriter out(path);
  for (const ChargeField& f : slices) {
    for (int i = 0; i < f.n_sites(); ++i) {
      nlohmann::json j;
      j["t"] = f.t_index * spec.epsilon;
      j["z"] = spec.site_z(i);
      j["phi1"] = f.phi[0][i];
      j["phi2"] = f.phi[1][i];
      j["phi3"] = f.phi[2][i];
      j["phi4"] = f.phi[3][i];
      j["normalization"] = normalization_name(f.normalization);
      out.record(j);
    }
  }
  out.close();
}

}  // namespace entwine
