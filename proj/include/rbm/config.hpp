// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rbm {

/// Keys accepted in configuration files.
[[nodiscard]] const std::set<std::string>& config_keys();

/// Plain `key = value` settings; `#` starts a comment.
class RunConfig {
 public:
  static RunConfig parse(std::istream& in);
  static RunConfig from_file(const std::string& path);

  void set(const std::string& key, std::string value);
  [[nodiscard]] bool contains(const std::string& key) const;
  [[nodiscard]] const std::string& raw(const std::string& key) const;

  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] std::uint64_t get_u64(const std::string& key) const;
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key) const;
  [[nodiscard]] std::vector<long long> get_integers(const std::string& key) const;

  [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// 17 significant digits, '.' decimal, independent of the global locale.
[[nodiscard]] std::string format_double(double x);

}  // namespace rbm
