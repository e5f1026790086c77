#include "abcd/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace abcd::report {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last) throw CsvError("not a number: \"" + s + "\"");
  return x;
}

KeyValues& KeyValues::add(std::string key, std::string value) {
  kv_.emplace_back(std::move(key), std::move(value));
  return *this;
}
KeyValues& KeyValues::add(std::string key, double value) { return add(std::move(key), format_double(value)); }
KeyValues& KeyValues::add(std::string key, std::uint64_t value) {
  return add(std::move(key), std::to_string(value));
}

void KeyValues::write(std::ostream& out) const {
  for (const auto& [k, v] : kv_) out << k << '=' << v << '\n';
}

const std::string* KeyValues::find(const std::string& key) const {
  for (const auto& [k, v] : kv_)
    if (k == key) return &v;
  return nullptr;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv.add(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw CsvError("row has " + std::to_string(row.size()) + " cells, header has " +
                   std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw CsvError("no column \"" + name + "\"");
}

namespace {

void write_cell(std::ostream& out, const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) {
    out << cell;
    return;
  }
  out << '"';
  for (char c : cell) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_cell(out, row[i]);
  }
  out << '\n';
}

// One record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& out) {
  out.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cell;
  bool quoted = false;
  for (;;) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) throw CsvError("unterminated quoted cell");
      out.push_back(std::move(cell));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          cell += '"';
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      out.push_back(std::move(cell));
      return true;
    } else if (c != '\r') {
      cell += c;
    }
  }
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& t) {
  write_row(out, t.header);
  for (const auto& r : t.rows) write_row(out, r);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  if (!read_record(in, t.header)) throw CsvError("empty CSV input");
  std::vector<std::string> rec;
  std::size_t line = 1;
  while (read_record(in, rec)) {
    ++line;
    if (rec.size() != t.header.size())
      throw CsvError("record " + std::to_string(line) + " has " + std::to_string(rec.size()) +
                     " cells, expected " + std::to_string(t.header.size()));
    t.rows.push_back(rec);
  }
  return t;
}

KeyValues to_key_values(const ProtocolReport& r) {
  KeyValues kv;
  kv.add("protocol", to_string(r.protocol));
  if (r.exact_p) kv.add("exact_p", *r.exact_p);
  if (r.estimated_p) {
    kv.add("estimated_p", *r.estimated_p);
    kv.add("stderr", r.std_error);
    kv.add("samples", r.samples);
  }
  kv.add("decision", to_string(r.decision));
  kv.add("qubit_cost", r.qubit_cost);
  if (r.threshold) kv.add("threshold", *r.threshold);
  if (r.hoeffding_bound) kv.add("hoeffding_bound", *r.hoeffding_bound);
  return kv;
}

KeyValues to_key_values(const net::TranscriptReport& r) {
  KeyValues kv;
  kv.add("completed", r.completed);
  kv.add("rounds", r.rounds);
  kv.add("total_model_qubits", r.total_model_qubits);
  for (const auto& e : r.ledger) {
    const std::string p = "round." + std::to_string(e.round) + ".";
    kv.add(p + "sender", net::to_string(e.sender));
    kv.add(p + "model_qubits", e.model_qubits);
    kv.add(p + "payload_bytes", e.payload_bytes);
  }
  kv.add("samples", r.samples);
  kv.add("messages", r.messages);
  kv.add("wire_bytes", r.wire_bytes);
  kv.add("payload_bytes_per_message", r.payload_bytes_per_message);
  kv.add("estimated_p", r.estimate);
  kv.add("stderr", r.std_error);
  kv.add("decision", to_string(r.decision));
  if (!r.error.empty()) kv.add("error", r.error);
  return kv;
}

}  // namespace abcd::report
