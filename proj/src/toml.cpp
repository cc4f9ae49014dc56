#include "tubesim/toml.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tubesim::toml {

namespace {

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("toml parse error at line " + std::to_string(line) + ": " +
                   msg);
}

double parse_number(const std::string& s, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) fail(line, "trailing characters in number '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    fail(line, "invalid number '" + s + "'");
  }
}

Value parse_value(const std::string& raw, int line) {
  const std::string s = strip(raw);
  if (s.empty()) fail(line, "empty value");
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
    return s.substr(1, s.size() - 2);
  }
  if (s.front() == '[') {
    if (s.back() != ']') fail(line, "unterminated array");
    std::vector<double> arr;
    std::string inner = s.substr(1, s.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = strip(item);
      if (t.empty()) fail(line, "empty array element");
      arr.push_back(parse_number(t, line));
    }
    return arr;
  }
  return parse_number(s, line);
}

}  // namespace

const Value* Table::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

Table* Document::find(const std::string& name) {
  for (auto& [n, t] : tables) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Table* Document::find(const std::string& name) const {
  for (const auto& [n, t] : tables) {
    if (n == name) return &t;
  }
  return nullptr;
}

Table& Document::get_or_create(const std::string& name) {
  if (Table* t = find(name)) return *t;
  tables.emplace_back(name, Table{});
  return tables.back().second;
}

Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.get_or_create("");
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      const std::string name = strip(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty table name");
      current = &doc.get_or_create(name);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");
    if (current->find(key)) fail(line_no, "duplicate key '" + key + "'");
    current->entries.emplace_back(key, parse_value(line.substr(eq + 1), line_no));
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string serialize(const Document& doc) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, table] : doc.tables) {
    if (table.entries.empty() && name.empty()) continue;
    if (!first) out << "\n";
    first = false;
    if (!name.empty()) out << "[" << name << "]\n";
    for (const auto& [key, value] : table.entries) {
      out << key << " = ";
      if (std::holds_alternative<double>(value)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", std::get<double>(value));
        out << buf;
      } else if (std::holds_alternative<bool>(value)) {
        out << (std::get<bool>(value) ? "true" : "false");
      } else if (std::holds_alternative<std::string>(value)) {
        out << '"' << std::get<std::string>(value) << '"';
      } else {
        const auto& arr = std::get<std::vector<double>>(value);
        out << "[";
        for (size_t i = 0; i < arr.size(); ++i) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.12g", arr[i]);
          out << (i ? ", " : "") << buf;
        }
        out << "]";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace tubesim::toml
