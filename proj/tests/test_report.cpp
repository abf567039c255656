#include <gtest/gtest.h>

#include <json.hpp>

#include "hecke/report.hpp"

using namespace hecke;

TEST(Report, DoubleFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(200.0), "200");
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(parse_double(format_double_short(v), "v"), v);
  }
  EXPECT_THROW(parse_double("1.5x", "v"), DomainError);
  EXPECT_THROW(parse_double("", "v"), DomainError);
}

TEST(Report, GridsAndRules) {
  const auto g = parse_x_grid("1e4:1e6:3");
  const auto pts = g.points();
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0], 1e4);
  EXPECT_EQ(pts[1], 1e5);
  EXPECT_EQ(pts[2], 1e6);
  EXPECT_EQ(parse_x_grid(format_x_grid(g)), g);
  EXPECT_THROW(parse_x_grid("1e4:1e6:0"), DomainError);
  EXPECT_THROW(parse_x_grid("1e4:1e6"), DomainError);
  EXPECT_THROW(parse_x_grid("1e6:1e4:3"), DomainError);

  const auto r = parse_y_rule("power:0.5");
  EXPECT_EQ(r(1e6), 1e3);
  EXPECT_EQ(parse_y_rule("fixed:100")(1e6), 100.0);
  EXPECT_EQ(parse_y_rule(format_y_rule(r)), r);
  EXPECT_THROW(parse_y_rule("sqrt"), DomainError);
  EXPECT_THROW(parse_y_rule("fixed:0.5"), DomainError);
}

TEST(Report, ConfigRoundTrip) {
  RunConfig c;
  c.command = "s2";
  c.x = 1234.5;
  c.y = 0.1 + 0.2;
  c.method = Method::kBoth;
  c.phi = {WeightKind::kStandardBump, 0.25, 1.75, 3.0};
  c.w.amplitude = 0.7;
  c.eps_tail = 1e-12;
  c.k_cap_scale = 2;
  c.x_grid = parse_x_grid("100:1e5:4");
  c.y_rule = parse_y_rule("fixed:7");
  c.no_timings = true;
  c.out = "a b.json";
  c.threads = 3;
  const RunConfig back = config_from_map(parse_config_text(serialize_config(c)));
  EXPECT_TRUE(back.equivalent(c));
  EXPECT_NE(back.threads, 0u);
  EXPECT_EQ(serialize_config(back), serialize_config(c));
}

TEST(Report, ConfigParsing) {
  const auto m = parse_config_text("# comment\n x = 10 \n\ny=20 # trailing\nmethod=direct\n");
  EXPECT_EQ(m.at("x"), "10");
  EXPECT_EQ(m.at("y"), "20");
  const auto c = config_from_map(m);
  EXPECT_EQ(*c.x, 10.0);
  EXPECT_EQ(c.method, Method::kDirect);
  EXPECT_THROW(parse_config_text("novalue\n"), DomainError);
  EXPECT_THROW(config_from_map({{"colour", "red"}}), DomainError);
  EXPECT_THROW(config_from_map({{"threads", "0"}}), DomainError);
}

TEST(Report, SumReportJson) {
  RunConfig c;
  c.command = "s2";
  c.x = 200;
  c.y = 20;
  c.method = Method::kBoth;
  c.no_timings = true;
  const auto r = evaluate(200, 20, c.phi, c.w, Method::kBoth, c.policy());
  const auto j = nlohmann::json::parse(sum_report_json(r, c));
  EXPECT_EQ(j["schema"], kSumReportSchema);
  EXPECT_EQ(j["X"].get<double>(), 200.0);
  EXPECT_EQ(j["s2_direct"].get<double>(), r.direct->value);
  EXPECT_EQ(j["s2_poisson"].get<double>(), r.poisson->value);
  EXPECT_EQ(j["m0"].get<double>(), r.m0);
  EXPECT_EQ(j["candidates"]["mellin_variant"].get<double>(), r.candidates.mellin_variant);
  EXPECT_EQ(j["theta"]["numerator"], 131);
  EXPECT_EQ(j["theta"]["denominator"], 416);
  EXPECT_EQ(j["timings"]["poisson_seconds"].get<double>(), 0.0);
  EXPECT_GT(j["counts"]["poisson"].get<std::uint64_t>(), 0u);
  std::map<std::string, std::string> embedded;
  for (auto& [k, v] : j["config"].items()) embedded[k] = v.get<std::string>();
  EXPECT_TRUE(config_from_map(embedded).equivalent(c));
  EXPECT_EQ(j["config"].count("threads"), 0u);

  const auto p = evaluate(200, 20, c.phi, c.w, Method::kPoisson, c.policy());
  const auto jp = nlohmann::json::parse(sum_report_json(p, c));
  EXPECT_TRUE(jp["s2_direct"].is_null());
  EXPECT_TRUE(jp["discrepancy"].is_null());
}

TEST(Report, JsonEscapes) {
  JsonWriter j;
  j.begin_object().field("s", std::string("a\"b\\c\n\x01")).key("arr").begin_array().end_array().end_object();
  const auto parsed = nlohmann::json::parse(j.str());
  EXPECT_EQ(parsed["s"], "a\"b\\c\n\x01");
  EXPECT_TRUE(parsed["arr"].empty());
}

TEST(Report, CsvRow) {
  const SmoothWeight phi, w;
  const auto r = evaluate(1e4, 100, phi, w, Method::kPoisson);
  const auto row = scan_csv_row(r, false);
  const auto cells = split(row, ',');
  const auto header = split(kScanCsvHeader, ',');
  ASSERT_EQ(cells.size(), header.size());
  EXPECT_EQ(header[0], "X");
  EXPECT_EQ(header.back(), "terms");
  EXPECT_EQ(std::stod(cells[2]), r.poisson->value);
  EXPECT_EQ(std::stod(cells[6]), r.poisson->value / r.m0);
  EXPECT_EQ(cells[8], "0");
  EXPECT_EQ(std::stoull(cells[9]), r.poisson->terms);
}

TEST(Report, VerifyJson) {
  std::vector<CheckResult> rs(2);
  rs[0] = {"gauss", "a", true, 0.0, 1.0, 3, 0, 0.5, ""};
  rs[1] = {"series", "b", false, 2.0, 1.0, 3, 1, 0.5, "bad"};
  RunConfig c;
  c.command = "verify";
  c.no_timings = true;
  const auto j = nlohmann::json::parse(verify_report_json(rs, c));
  EXPECT_FALSE(j["pass"].get<bool>());
  ASSERT_EQ(j["failures"].size(), 1u);
  EXPECT_EQ(j["failures"][0], "series/b");
  EXPECT_EQ(j["checks"][0]["seconds"].get<double>(), 0.0);
}
