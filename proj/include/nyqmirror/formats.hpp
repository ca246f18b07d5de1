#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nyqmirror/tf_analysis.hpp"
#include "nyqmirror/uniform_signal.hpp"

namespace nyq {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip decimal form, independent of the C/C++ locale.
std::string format_double(double v);

// Writes to a sibling temp file and renames it over path.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// RFC 4180 CSV (CRLF records, quoted fields where needed) preceded by
// "# key=value" metadata lines.
class CsvWriter {
 public:
  explicit CsvWriter(const Metadata& meta);
  CsvWriter& header(const std::vector<std::string>& columns);
  CsvWriter& row(std::span<const double> values);
  CsvWriter& row(std::initializer_list<double> values);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_ = 0;
};

// Reads a two-column (t, value) CSV with uniform time steps.
UniformSignal read_uniform_csv(std::string_view text);

// First numeric column of a CSV (metadata and header lines skipped).
std::vector<double> read_first_column(std::string_view text);

// "TFR1", u64 bins, u64 frames (little endian), then the frequency axis, the
// time axis and the bins x frames magnitudes (row-major), all little-endian
// IEEE-754 doubles.
std::string encode_tfr1(const TfRepresentation& tfr);

struct Tfr1Data {
  std::vector<double> freq_axis;
  std::vector<double> time_axis;
  std::vector<double> magnitudes;
};
Tfr1Data decode_tfr1(std::string_view bytes);

// 8-bit binary PGM, one column per frame, highest frequency on the top row.
// Display value 1e-2 maps to 0 and the matrix maximum to 255, linearly.
std::string encode_pgm(const DisplayMatrix& display, const Metadata& meta = {});

}  // namespace nyq
