#include "gfa/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gfa {

const char* const kCsvHeader =
    "gamma,n,r,k,alpha,windows,access_prob,ci95,mean_wr,mean_dec,mean_peak_storage,seed";

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

void append_row_fields(std::string& out, const SweepRow& row, const char* sep,
                       bool quote_alpha_inf) {
  out += format_g6(row.gamma);
  out += sep;
  out += std::to_string(row.n);
  out += sep;
  out += std::to_string(row.r);
  out += sep;
  out += std::to_string(row.k);
  out += sep;
  if (row.alpha.is_unbounded() && quote_alpha_inf)
    out += "\"inf\"";
  else
    out += row.alpha.str();
  out += sep;
  out += std::to_string(row.windows);
  out += sep;
  out += format_g6(row.access_prob);
  out += sep;
  out += format_g6(row.ci95);
  out += sep;
  out += format_g6(row.mean_wr);
  out += sep;
  out += format_g6(row.mean_dec);
  out += sep;
  out += format_g6(row.mean_peak_storage);
  out += sep;
  out += std::to_string(row.seed);
}

}  // namespace

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) {
    append_row_fields(out, row, ",", false);
    out += '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  static const char* kKeys[] = {"gamma", "n", "r", "k", "alpha", "windows", "access_prob",
                                "ci95",  "mean_wr", "mean_dec", "mean_peak_storage", "seed"};
  std::string out = "[";
  bool first_row = true;
  for (const SweepRow& row : rows) {
    if (!first_row) out += ',';
    first_row = false;
    std::string fields;
    append_row_fields(fields, row, "\x1f", true);
    out += "\n  {";
    std::size_t pos = 0, key = 0;
    while (true) {
      std::size_t next = fields.find('\x1f', pos);
      out += '"';
      out += kKeys[key++];
      out += "\":";
      out += fields.substr(pos, next == std::string::npos ? next : next - pos);
      if (next == std::string::npos) break;
      out += ',';
      pos = next + 1;
    }
    out += '}';
  }
  out += "\n]\n";
  return out;
}

std::vector<SweepRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: missing or mismatched header");

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 12)
      throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": expected 12 fields");
    auto num = [&](const std::string& s) {
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size())
        throw std::invalid_argument("csv: line " + std::to_string(line_no) + ": bad number \"" +
                                    s + "\"");
      return v;
    };
    auto uint = [&](const std::string& s) {
      return static_cast<std::uint64_t>(std::stoull(s));
    };
    SweepRow row;
    row.gamma = num(f[0]);
    row.n = static_cast<std::uint32_t>(uint(f[1]));
    row.r = static_cast<std::uint32_t>(uint(f[2]));
    row.k = static_cast<std::uint32_t>(uint(f[3]));
    row.alpha = Alpha::parse(f[4]);
    row.windows = uint(f[5]);
    row.access_prob = num(f[6]);
    row.ci95 = num(f[7]);
    row.mean_wr = num(f[8]);
    row.mean_dec = num(f[9]);
    row.mean_peak_storage = num(f[10]);
    row.seed = uint(f[11]);
    rows.push_back(row);
  }
  return rows;
}

std::string trace_to_jsonl(const TraceRecord& rec) {
  std::string out = "{\"iter\":";
  out += std::to_string(rec.iteration);
  out += ",\"new_matrices\":";
  out += std::to_string(rec.new_matrices);
  out += ",\"new_decoded\":[";
  for (std::size_t i = 0; i < rec.new_decoded.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(rec.new_decoded[i]);
  }
  out += "],\"pool_size\":";
  out += std::to_string(rec.pool_size);
  out += "}";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed: " + path);
  return buf.str();
}

}  // namespace gfa
