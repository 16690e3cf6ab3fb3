#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "malmsten/proofchain.hpp"
#include "malmsten/report_io.hpp"

namespace {

using namespace malmsten::io;

TEST(FormatDouble, SeventeenDigitsAndRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
  EXPECT_EQ(format_double(std::nan("")), "NaN");
  EXPECT_EQ(format_double(-INFINITY), "-Infinity");

  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);  // stod rejects subnormals
  }
}

TEST(Json, RecordRoundTripProperty) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int i = 0; i < 200; ++i) {
    OutputRecord r;
    r.command = i % 2 ? "verify" : "quad \"x\"\n\t\\";
    r.parameters["a"] = json_number(uni(rng) * std::pow(10.0, exponent(rng) / 10));
    r.parameters["grid"] = Json::array({json_number(uni(rng)), json_number(-0.0), json_number(1e-310)});
    r.results["value"] = json_number(uni(rng));
    r.results["bad"] = json_number(std::nan(""));
    r.results["inf"] = json_number(-INFINITY);
    r.results["count"] = static_cast<std::size_t>(i);
    r.results["ok"] = (i % 3 == 0);
    r.results["nested"]["z"] = "ünïcode";
    r.timing_ms = std::abs(uni(rng));
    const std::string text = serialize_json(r);
    const OutputRecord back = parse_json(text);
    EXPECT_EQ(back, r) << text;
    EXPECT_EQ(serialize_json(back), text);
  }
}

TEST(Json, StableKeyOrder) {
  OutputRecord r;
  r.command = "eval";
  r.parameters["which"] = "c";
  r.parameters["a"] = 2.0;
  r.parameters["b"] = 3.0;
  const std::string text = serialize_json(r);
  EXPECT_EQ(text.rfind(R"({"command":"eval","parameters":{"which":"c","a":2.0,"b":3.0},"results":{},)", 0), 0u)
      << text;
}

TEST(Json, RejectsMalformed) {
  EXPECT_THROW(parse_json("{"), std::invalid_argument);
  EXPECT_THROW(parse_json("[]"), std::invalid_argument);
  EXPECT_THROW(parse_json(R"({"command":1,"parameters":{},"results":{},"timing_ms":0})"), std::invalid_argument);
}

TEST(Json, ChainReportSerializes) {
  const auto chain = malmsten::proofchain::run_full_chain({1.0});
  const Json j = to_json(chain);
  EXPECT_TRUE(j["overall_pass"].get<bool>());
  EXPECT_EQ(j["steps"].size(), chain.steps.size());
  EXPECT_EQ(j["steps"].back()["substeps"].size(), 3u);
  const Json back = Json::parse(to_json_text(j));
  EXPECT_EQ(back, j);
}

TEST(Csv, QuotingFollowsRfc4180) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("line\nbreak"), "\"line\nbreak\"");
  EXPECT_EQ(csv_row({"x", "", "y,z"}), "x,,\"y,z\"\r\n");
}

TEST(Csv, RoundTripProperty) {
  std::mt19937_64 rng(9);
  const std::string alphabet = "ab,\"\r\n 1.e-";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<int> cols(1, 5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<std::string>> table(1 + trial % 4);
    const int width = cols(rng);
    for (auto& row : table) {
      for (int c = 0; c < width; ++c) {
        std::string f;
        for (int k = len(rng); k > 0; --k) f += alphabet[pick(rng)];
        row.push_back(f);
      }
    }
    // A lone empty field is indistinguishable from an empty line; give such rows content.
    for (auto& row : table) {
      if (row.size() == 1 && row[0].empty()) row[0] = "x";
    }
    std::string text;
    for (const auto& row : table) text += csv_row(row);
    EXPECT_EQ(parse_csv(text), table);
  }
}

TEST(Csv, ParseErrors) {
  EXPECT_THROW(parse_csv("\"open"), std::invalid_argument);
  EXPECT_THROW(parse_csv("a\"b"), std::invalid_argument);
  EXPECT_THROW(parse_csv("\"a\"b"), std::invalid_argument);
}

TEST(Csv, ChainTable) {
  const auto chain = malmsten::proofchain::run_full_chain({2.0});
  const auto rows = parse_csv(chain_csv(chain));
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows.front(), report_csv_header());
  EXPECT_EQ(rows.size(), 1 + chain.steps.size() + 3);  // b_reduction carries three sub-checks
  for (const auto& row : rows) EXPECT_EQ(row.size(), report_csv_header().size());
  EXPECT_EQ(rows.back()[0], "b_reduction.b_from_delta0");
}

}  // namespace
