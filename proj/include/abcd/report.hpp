#pragma once

// Machine-readable reports: key=value lines for single runs, CSV for sweeps.
// Doubles are printed in shortest round-trip form so every numeric field
// parses back to the identical value.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abcd/netsim.hpp"
#include "abcd/protocols.hpp"

namespace abcd::report {

std::string format_double(double x);
double parse_double(const std::string& s);

class KeyValues {
 public:
  KeyValues& add(std::string key, std::string value);
  KeyValues& add(std::string key, const char* value) { return add(std::move(key), std::string(value)); }
  KeyValues& add(std::string key, std::string_view value) { return add(std::move(key), std::string(value)); }
  KeyValues& add(std::string key, double value);
  KeyValues& add(std::string key, std::uint64_t value);
  KeyValues& add(std::string key, std::uint32_t value) { return add(std::move(key), std::uint64_t{value}); }
  KeyValues& add(std::string key, bool value) { return add(std::move(key), value ? "true" : "false"); }

  void write(std::ostream& out) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return kv_; }
  [[nodiscard]] const std::string* find(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

KeyValues parse_key_values(std::istream& in);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  [[nodiscard]] std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& t);
CsvTable read_csv(std::istream& in);

KeyValues to_key_values(const ProtocolReport& r);
KeyValues to_key_values(const net::TranscriptReport& r);

}  // namespace abcd::report
