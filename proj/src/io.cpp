#include "remine/io.hpp"

#include <fstream>
#include <sstream>

namespace remine::io {

ojson make_header(const std::string& schema, int version) {
  ojson h;
  h["_schema"] = schema;
  h["_version"] = version;
  return h;
}

void write_jsonl(const std::string& path, const ojson& header,
                 const std::vector<ojson>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << header.dump() << "\n";
  for (const auto& r : records) out << r.dump() << "\n";
  if (!out) throw io_error("write failed: " + path);
}

JsonlFile read_jsonl(const std::string& path, const std::string& expect_schema,
                     int expect_version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);

  JsonlFile file;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw validation_error(path + ":" + std::to_string(lineno) +
                             ": bad JSON: " + e.what());
    }
    if (lineno == 1) {
      if (!j.is_object() || !j.contains("_schema"))
        throw schema_error(path + ": missing schema header line");
      const std::string schema = j["_schema"].get<std::string>();
      const int version = j.value("_version", -1);
      if (schema != expect_schema || version != expect_version)
        throw schema_error(path + ": expected schema " + expect_schema + "/v" +
                           std::to_string(expect_version) + ", found " +
                           schema + "/v" + std::to_string(version));
      file.header = std::move(j);
    } else {
      file.records.push_back(std::move(j));
    }
  }
  if (lineno == 0) throw schema_error(path + ": empty file, no schema header");
  return file;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool row_started = false;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(row);
    row.clear();
    row_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
          row_started = true;
        } else {
          field += c;  // stray quote inside unquoted field, keep literal
        }
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;  // CRLF normalized to LF
      case '\n':
        if (row_started || field_started || !field.empty() || !row.empty())
          end_row();
        break;
      default:
        field += c;
        field_started = true;
        row_started = true;
        break;
    }
  }
  if (row_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    const bool needs_quote =
        f.find_first_of(",\"\r\n") != std::string::npos || f.empty();
    if (!needs_quote) {
      out << f;
    } else {
      out << '"';
      for (char c : f) {
        if (c == '"') out << "\"\"";
        else out << c;
      }
      out << '"';
    }
  }
  out << "\n";
}

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a64_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_file_hex(const std::string& path) {
  const std::uint64_t h = fnv1a64_bytes(slurp_file(path));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace remine::io
