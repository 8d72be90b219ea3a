#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "repose/errors.hpp"

namespace repose {

// Line-oriented config format shared by scene, task, grasp-set, and run
// files: "[section]" headers, "key = value" entries, "#" comments.
// Sections may repeat (grasp sets use one section per record).

struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
};

struct ConfigFile {
  std::string origin;  // path or label, used in error messages
  std::vector<ConfigSection> sections;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& origin);

  const ConfigSection* find(const std::string& name) const;
  std::vector<const ConfigSection*> find_all(const std::string& name) const;

  /// ValidationError if any section name is not in `allowed`.
  void restrict_sections(const std::set<std::string>& allowed) const;
};

/// Strict accessor over one section: every key must be consumed exactly
/// once, and finish() rejects the ones nobody asked for.
class SectionReader {
 public:
  SectionReader(const ConfigFile& file, const ConfigSection& section);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key);
  std::optional<std::string> get_optional_string(const std::string& key);
  double get_double(const std::string& key);
  std::optional<double> get_optional_double(const std::string& key);
  double get_double_or(const std::string& key, double fallback);
  int get_int(const std::string& key);
  Eigen::Vector3d get_vec3(const std::string& key);
  std::vector<double> get_double_list(const std::string& key);

  /// Throws ValidationError naming the first unconsumed key, if any.
  void finish();

  std::string context(const std::string& key) const;

 private:
  const std::string& raw(const std::string& key);

  const ConfigFile& file_;
  const ConfigSection& section_;
  std::set<std::string> consumed_;
};

double parse_double_strict(const std::string& text, const std::string& context);
std::vector<double> parse_double_list(const std::string& text, const std::string& context);

}  // namespace repose
