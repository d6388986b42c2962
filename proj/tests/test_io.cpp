#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "feeloc/io.hpp"
#include "helpers.hpp"

using namespace feeloc;
using testing_util::R;
using testing_util::Rs;

namespace {

const char* kInstance = R"({
  "fee": {"default": "inf",
          "breakpoints": [{"at": "-3/2", "fee": "5"}, {"at": "2", "fee": "0.25"}],
          "overrides": [{"at": "-2", "fee": "0"}]},
  "agents": ["0", "-7/3", 4, "1.5"],
  "m": 2,
  "objective": "mc"
})";

}  // namespace

TEST(InstanceFile, Parses) {
  const auto f = parse_instance(kInstance);
  EXPECT_TRUE(f.fee.default_fee().is_infinite());
  EXPECT_EQ(f.fee(R("-2")), ExtRational(0));
  EXPECT_EQ(f.fee(R("3")), ExtRational(R("1/4")));
  EXPECT_EQ(f.agents, Rs({"0", "-7/3", "4", "3/2"}));
  EXPECT_EQ(f.m, 2u);
  EXPECT_EQ(f.objective, Objective::kMaxCost);
}

TEST(InstanceFile, RoundTripIsExact) {
  const auto a = parse_instance(kInstance);
  const auto text = serialize_instance(a);
  const auto b = parse_instance(text);
  EXPECT_EQ(serialize_instance(b), text);
  EXPECT_EQ(a.agents, b.agents);
  EXPECT_EQ(a.fee.special_points(), b.fee.special_points());
  for (const auto& x : Rs({"-3", "-2", "-3/2", "0", "2", "9"})) EXPECT_EQ(a.fee(x), b.fee(x));
  EXPECT_EQ(text.back(), '\n');
}

TEST(InstanceFile, Errors) {
  EXPECT_ERROR_KIND(parse_instance("{"), kParse);
  EXPECT_ERROR_KIND(parse_instance(R"({"agents": ["1"]})"), kParse);
  EXPECT_ERROR_KIND(parse_instance(R"({"fee": {"default": "0"}, "agents": ["x"]})"), kParse);
  EXPECT_ERROR_KIND(
      parse_instance(R"({"fee": {"default": "0"}, "agents": ["1"], "objective": "avg"})"),
      kParse);
  EXPECT_ERROR_KIND(parse_instance(R"({"fee": {"default": "0"}, "agents": []})"),
                    kEmptyProfile);
  EXPECT_ERROR_KIND(
      parse_instance(R"({"fee": {"default": "4", "overrides": [{"at": "3", "fee": "5"}]},
                         "agents": ["0"]})"),
      kLscViolation);
  EXPECT_ERROR_KIND(read_instance_file("/nonexistent/feeloc.json"), kIo);
}

TEST(InstanceFile, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "feeloc_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "inst.json";
  const auto a = parse_instance(kInstance);
  write_instance_file(path, a);
  EXPECT_EQ(serialize_instance(read_instance_file(path)), serialize_instance(a));
  std::filesystem::remove_all(dir);
}

TEST(Json, OutcomeLottery) {
  Lottery lot{{{Placement{Rs({"4"})}, R("1/2")}, {Placement{Rs({"0"})}, R("1/2")}}};
  const auto j = nlohmann::json::parse(outcome_json("trm", lot, ExtRational(9), ExtRational(R("3/2"))));
  EXPECT_EQ(j["lottery"][0]["loc"], "4");
  EXPECT_EQ(j["lottery"][0]["p"], "1/2");
  EXPECT_EQ(j["lottery"][1]["loc"], "0");
  EXPECT_EQ(j["ratio"], "3/2");
  EXPECT_EQ(j["ratio_decimal"], "1.500000");
}

TEST(Json, ErrorShape) {
  const auto j = nlohmann::json::parse(error_json("Parse", "bad"));
  EXPECT_EQ(j["error"], "Parse");
  EXPECT_EQ(j["message"], "bad");
}

TEST(Csv, HeaderAndQuoting) {
  EXPECT_EQ(csv_header(),
            "family,params,r_e,mechanism,objective,ratio_exact,ratio_decimal,bound_exact,"
            "within_bound\n");
  CsvRow row{"TC_LB_DET", "d=1,eps=1/100", ExtRational(2), "med", Objective::kTotalCost,
             ExtRational(R("499/301")), ExtRational(R("5/3"))};
  EXPECT_EQ(csv_line(row),
            "TC_LB_DET,\"d=1,eps=1/100\",2,med,tc,499/301,1.657807,5/3,true\n");
  row.params = "";
  row.ratio = ExtRational::infinity();
  EXPECT_EQ(csv_line(row), "TC_LB_DET,,2,med,tc,inf,inf,5/3,false\n");
}

TEST(Objective, Names) {
  EXPECT_EQ(objective_name(Objective::kTotalCost), "tc");
  EXPECT_EQ(parse_objective("mc"), Objective::kMaxCost);
  EXPECT_ERROR_KIND(parse_objective("sum"), kParse);
}
