#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tubesim::toml {

/// Minimal TOML subset used by the scenario files: single-level tables,
/// scalar keys (number / bool / string), flat numeric arrays, and `#`
/// comments. Errors carry the offending line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Value = std::variant<double, bool, std::string, std::vector<double>>;

struct Table {
  // Preserves file order for round-tripping.
  std::vector<std::pair<std::string, Value>> entries;

  const Value* find(const std::string& key) const;
};

struct Document {
  std::vector<std::pair<std::string, Table>> tables;  // "" = root table

  Table* find(const std::string& name);
  const Table* find(const std::string& name) const;
  Table& get_or_create(const std::string& name);
};

Document parse(const std::string& text);
Document parse_file(const std::string& path);
std::string serialize(const Document& doc);

}  // namespace tubesim::toml
