#include "nyqmirror/formats.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nyq {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string_view> data_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

double parse_field(std::string_view s, std::size_t line) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("CSV data line " + std::to_string(line) + ": invalid number '" +
                             std::string(s) + "'");
  return v;
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint64_t get_u64(std::string_view bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

void put_doubles(std::string& out, std::span<const double> values) {
  for (double d : values) put_u64(out, std::bit_cast<std::uint64_t>(d));
}

}  // namespace

CsvWriter::CsvWriter(const Metadata& meta) {
  for (const auto& [k, v] : meta) out_ += "# " + k + "=" + v + "\r\n";
}

CsvWriter& CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ += ',';
    out_ += quote_field(columns[i]);
  }
  out_ += "\r\n";
  return *this;
}

CsvWriter& CsvWriter::row(std::span<const double> values) {
  if (columns_ && values.size() != columns_) throw std::logic_error("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ',';
    out_ += format_double(values[i]);
  }
  out_ += "\r\n";
  return *this;
}

CsvWriter& CsvWriter::row(std::initializer_list<double> values) {
  return row(std::span<const double>(values.begin(), values.size()));
}

UniformSignal read_uniform_csv(std::string_view text) {
  const auto lines = data_lines(text);
  if (lines.size() < 3) throw std::runtime_error("signal CSV: need a header and at least 2 rows");
  std::vector<double> t, v;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto comma = lines[i].find(',');
    if (comma == std::string_view::npos)
      throw std::runtime_error("signal CSV data line " + std::to_string(i) + ": expected t,value");
    t.push_back(parse_field(lines[i].substr(0, comma), i));
    auto rest = lines[i].substr(comma + 1);
    v.push_back(parse_field(rest.substr(0, rest.find(',')), i));
  }
  const double step = t[1] - t[0];
  if (!(step > 0)) throw std::runtime_error("signal CSV: time column must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double expected = t[0] + static_cast<double>(i) * step;
    if (std::abs(t[i] - expected) > 1e-6 * step + 1e-9 * std::abs(expected))
      throw std::runtime_error("signal CSV data line " + std::to_string(i + 1) + ": time step is not uniform");
  }
  const double rate = static_cast<double>(t.size() - 1) / (t.back() - t.front());
  return UniformSignal(std::move(v), rate, t.front());
}

std::vector<double> read_first_column(std::string_view text) {
  const auto lines = data_lines(text);
  std::vector<double> out;
  for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(parse_field(lines[i].substr(0, lines[i].find(',')), i));
  return out;
}

std::string encode_tfr1(const TfRepresentation& tfr) {
  std::string out = "TFR1";
  put_u64(out, tfr.bins());
  put_u64(out, tfr.frames());
  put_doubles(out, tfr.freq_axis);
  put_doubles(out, tfr.time_axis);
  put_doubles(out, tfr.magnitudes());
  return out;
}

Tfr1Data decode_tfr1(std::string_view bytes) {
  if (bytes.size() < 20 || bytes.substr(0, 4) != "TFR1") throw std::runtime_error("TFR1: bad magic");
  const auto bins = get_u64(bytes, 4), frames = get_u64(bytes, 12);
  const std::size_t expected = 20 + 8 * (bins + frames + bins * frames);
  if (bytes.size() != expected) throw std::runtime_error("TFR1: size does not match the header");
  Tfr1Data d;
  std::size_t at = 20;
  auto take = [&](std::vector<double>& dst, std::size_t n) {
    dst.resize(n);
    for (auto& x : dst) {
      x = std::bit_cast<double>(get_u64(bytes, at));
      at += 8;
    }
  };
  take(d.freq_axis, bins);
  take(d.time_axis, frames);
  take(d.magnitudes, bins * frames);
  return d;
}

std::string encode_pgm(const DisplayMatrix& display, const Metadata& meta) {
  std::string out = "P5\n";
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  out += std::to_string(display.frames) + " " + std::to_string(display.bins) + "\n255\n";
  constexpr double kFloor = 1e-2;
  const double top = display.values.empty() ? kFloor : display.max_value();
  const double span = top - kFloor;
  for (std::size_t r = 0; r < display.bins; ++r) {
    const std::size_t bin = display.bins - 1 - r;
    for (std::size_t j = 0; j < display.frames; ++j) {
      const double v = display.values[bin * display.frames + j];
      const double level = span > 0 ? std::clamp((v - kFloor) / span, 0.0, 1.0) * 255.0 : 0.0;
      out += static_cast<char>(static_cast<unsigned char>(std::lround(level)));
    }
  }
  return out;
}

}  // namespace nyq
