#include "repose/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace repose {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    raise(ErrorCode::IoError, "read failure on '" + path + "'");
  }
  return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile file;
  file.origin = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  ConfigSection* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        raise(ErrorCode::ParseError,
              origin + ":" + std::to_string(line_no) + ": malformed section header '" + line + "'");
      }
      file.sections.push_back(ConfigSection{trim(line.substr(1, line.size() - 2)), {}});
      current = &file.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      raise(ErrorCode::ParseError,
            origin + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
    }
    if (current == nullptr) {
      raise(ErrorCode::ParseError,
            origin + ":" + std::to_string(line_no) + ": entry outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      raise(ErrorCode::ParseError, origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (current->find(key) != nullptr) {
      raise(ErrorCode::ParseError, origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                       key + "' in [" + current->name + "]");
    }
    current->entries.emplace_back(key, value);
  }
  return file;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<const ConfigSection*> ConfigFile::find_all(const std::string& name) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

void ConfigFile::restrict_sections(const std::set<std::string>& allowed) const {
  for (const auto& s : sections) {
    if (allowed.find(s.name) == allowed.end()) {
      raise(ErrorCode::ValidationError, origin + ": unknown section [" + s.name + "]");
    }
  }
}

SectionReader::SectionReader(const ConfigFile& file, const ConfigSection& section)
    : file_(file), section_(section) {}

std::string SectionReader::context(const std::string& key) const {
  return file_.origin + ": " + section_.name + "." + key;
}

bool SectionReader::has(const std::string& key) const { return section_.find(key) != nullptr; }

const std::string& SectionReader::raw(const std::string& key) {
  const std::string* v = section_.find(key);
  if (v == nullptr) {
    raise(ErrorCode::ValidationError, context(key) + " is required");
  }
  consumed_.insert(key);
  return *v;
}

std::string SectionReader::get_string(const std::string& key) { return raw(key); }

std::optional<std::string> SectionReader::get_optional_string(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return raw(key);
}

double SectionReader::get_double(const std::string& key) {
  return parse_double_strict(raw(key), context(key));
}

std::optional<double> SectionReader::get_optional_double(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

double SectionReader::get_double_or(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

int SectionReader::get_int(const std::string& key) {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    raise(ErrorCode::ValidationError, context(key) + " must be an integer");
  }
  return i;
}

Eigen::Vector3d SectionReader::get_vec3(const std::string& key) {
  const std::vector<double> values = parse_double_list(raw(key), context(key));
  if (values.size() != 3) {
    raise(ErrorCode::ValidationError, context(key) + " must hold exactly 3 numbers");
  }
  return Eigen::Vector3d(values[0], values[1], values[2]);
}

std::vector<double> SectionReader::get_double_list(const std::string& key) {
  return parse_double_list(raw(key), context(key));
}

void SectionReader::finish() {
  for (const auto& [k, v] : section_.entries) {
    if (consumed_.find(k) == consumed_.end()) {
      raise(ErrorCode::ValidationError,
            file_.origin + ": unknown key '" + k + "' in [" + section_.name + "]");
    }
  }
}

double parse_double_strict(const std::string& text, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    raise(ErrorCode::ParseError, context + ": '" + text + "' is not a number");
  }
  return value;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& context) {
  // Commas are accepted as separators alongside whitespace.
  std::string separated = text;
  for (char& c : separated) {
    if (c == ',') c = ' ';
  }
  std::vector<double> out;
  std::istringstream in(separated);
  std::string token;
  while (in >> token) {
    out.push_back(parse_double_strict(token, context));
  }
  return out;
}

}  // namespace repose
