// SPDX-License-Identifier: Apache-2.0
#include "rbm/config.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ArgumentError("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    parts.push_back(trim(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{"gamma", "sigma",    "beta",  "seed", "steps",
                                          "grid_n", "v_max",   "samples_per_node",
                                          "checkpoints", "m1", "m2", "k",   "l"};
  return keys;
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!config_keys().count(key)) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": empty value");
    }
    config.set(key, value);
  }
  return config;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file " + path);
  return parse(in);
}

void RunConfig::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

bool RunConfig::contains(const std::string& key) const { return values_.count(key) != 0; }

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ArgumentError("missing setting " + key);
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_number<double>(key, raw(key));
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  return parse_number<std::uint64_t>(key, raw(key));
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split_list(raw(key))) {
    if (!part.empty()) out.push_back(parse_number<double>(key, part));
  }
  return out;
}

std::vector<long long> RunConfig::get_integers(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& part : split_list(raw(key))) {
    if (!part.empty()) out.push_back(parse_number<long long>(key, part));
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace rbm
