#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "abcd/report.hpp"

using namespace abcd;
using namespace abcd::report;

TEST(Doubles, ShortestFormRoundTripsLosslessly) {
  Rng rng(RngStream{1, 1});
  std::vector<double> values{0.0, -0.0, 1.0, 0.1, 1.0 / 3, 1e-300, 5e-324, 1.7976931348623157e308,
                             std::numeric_limits<double>::epsilon(), -2.5e-17, 0.9999999999999998};
  for (int i = 0; i < 5000; ++i) {
    const auto bits = rng.next_u64();
    const double x = std::bit_cast<double>(bits);
    if (std::isfinite(x)) values.push_back(x);
    values.push_back(rng.normal() * std::pow(10.0, rng.uniform() * 40 - 20));
  }
  for (const double x : values) {
    const double y = parse_double(format_double(x));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(x), std::bit_cast<std::uint64_t>(y)) << format_double(x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(parse_double("1.5x"), CsvError);
  EXPECT_THROW(parse_double(""), CsvError);
}

TEST(Csv, RoundTripWithQuoting) {
  CsvTable t{{"name", "value", "note"}, {}};
  t.add_row({"plain", format_double(0.1), ""});
  t.add_row({"comma,inside", format_double(-1e-300), "say \"hi\""});
  t.add_row({"multi\nline", "7", "x"});
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(parse_double(back.rows[1][back.column("value")]), -1e-300);
  EXPECT_THROW((void)back.column("missing"), CsvError);
  EXPECT_THROW(t.add_row({"short"}), CsvError);
}

TEST(Csv, MalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), CsvError);
  std::istringstream ragged("a,b\n1,2,3\n");
  EXPECT_THROW(read_csv(ragged), CsvError);
  std::istringstream open_quote("a\n\"abc\n");
  EXPECT_THROW(read_csv(open_quote), CsvError);
  std::istringstream crlf("a,b\r\n1,2\r\n");
  const CsvTable t = read_csv(crlf);
  EXPECT_EQ(t.rows.at(0).at(1), "2");
}

TEST(KeyValues, WriteParse) {
  KeyValues kv;
  kv.add("x", 0.1).add("n", std::uint64_t{44}).add("ok", true).add("s", "a=b");
  std::stringstream ss;
  kv.write(ss);
  EXPECT_EQ(ss.str(), "x=0.1\nn=44\nok=true\ns=a=b\n");
  const KeyValues back = parse_key_values(ss);
  ASSERT_NE(back.find("s"), nullptr);
  EXPECT_EQ(*back.find("s"), "a=b");
  EXPECT_EQ(parse_double(*back.find("x")), 0.1);
  EXPECT_EQ(back.find("nope"), nullptr);
}

TEST(KeyValues, ProtocolReportFieldsRoundTrip) {
  ProtocolReport r;
  r.protocol = Protocol::Fingerprint;
  r.exact_p = 0.4999999999999999;
  r.estimated_p = 1.0 / 3;
  r.std_error = 1.2345678901234567e-5;
  r.samples = 1000;
  r.qubit_cost = 22;
  r.threshold = 0.375;
  r.hoeffding_bound = 2 * std::exp(-4.4);
  const KeyValues kv = to_key_values(r);
  EXPECT_EQ(*kv.find("protocol"), "fingerprint");
  EXPECT_EQ(parse_double(*kv.find("exact_p")), *r.exact_p);
  EXPECT_EQ(parse_double(*kv.find("estimated_p")), *r.estimated_p);
  EXPECT_EQ(parse_double(*kv.find("stderr")), r.std_error);
  EXPECT_EQ(parse_double(*kv.find("hoeffding_bound")), *r.hoeffding_bound);
  EXPECT_EQ(*kv.find("qubit_cost"), "22");
}
