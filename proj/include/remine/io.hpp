#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "remine/errors.hpp"

namespace remine::io {

// Output files keep insertion order so runs diff cleanly.
using ojson = nlohmann::ordered_json;

// Intermediate .jsonl files start with a header line:
//   {"_schema": "<name>", "_version": N, ...extras}
// Readers refuse mismatched names/versions instead of reinterpreting.
struct JsonlFile {
  ojson header;
  std::vector<ojson> records;
};

void write_jsonl(const std::string& path, const ojson& header,
                 const std::vector<ojson>& records);

JsonlFile read_jsonl(const std::string& path, const std::string& expect_schema,
                     int expect_version);

ojson make_header(const std::string& schema, int version);

// Minimal RFC-4180 CSV: quoted fields, embedded quotes doubled, CRLF and LF
// both accepted. parse_csv returns one vector<string> per record.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

std::string slurp_file(const std::string& path);

// FNV-1a over file bytes, hex-encoded; used for manifest/report input hashes.
std::uint64_t fnv1a64_bytes(const std::string& bytes);
std::string hash_file_hex(const std::string& path);

}  // namespace remine::io
