#pragma once

#include <string>
#include <vector>

#include "gfa/decoder.hpp"
#include "gfa/harness.hpp"

namespace gfa {

// Pinned column set; every writer and the parser agree on it.
extern const char* const kCsvHeader;

// %.6g with a fixed decimal point, the one float format used in outputs.
std::string format_g6(double v);

std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_csv(const std::string& text);

// Same rows as a JSON array; numbers carry the CSV's 6-significant-digit
// values so the two formats agree field for field. alpha is a number, or
// the string "inf" when unbounded.
std::string rows_to_json(const std::vector<SweepRow>& rows);

// One trace line: {"iter":i,"new_matrices":m,"new_decoded":[..],"pool_size":p}
std::string trace_to_jsonl(const TraceRecord& rec);

// Whole-file write; throws std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gfa
