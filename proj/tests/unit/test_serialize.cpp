#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cutloci/error.hpp"
#include "cutloci/serialize.hpp"

namespace cutloci {
namespace {

TEST(FormatDouble, RoundTripsExactly) {
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * std::pow(10.0, rng.integer(-20, 20));
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(DumpJson, NonFiniteBecomesNull) {
  Json j = Json::object();
  j["inf"] = std::numeric_limits<double>::infinity();
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  j["x"] = 0.1;
  EXPECT_EQ(dump_json(j, -1), "{\"inf\":null,\"nan\":null,\"x\":0.10000000000000001}");
}

TEST(DumpJson, ScalarArraysStayOnOneLine) {
  Json j = Json::object();
  j["v"] = Json::array({1, 2.5, -3});
  EXPECT_EQ(dump_json(j), "{\n  \"v\": [1, 2.5, -3]\n}\n");
}

TEST(MatrixJson, RealRoundTrip) {
  Rng rng(72);
  const Mat a = rng.gaussian(2, 3);
  const Json j = matrix_to_json(a);
  EXPECT_EQ(j["rows"], 2);
  EXPECT_EQ(j["cols"], 3);
  EXPECT_EQ(j["field"], "real");
  EXPECT_EQ(j["data"].size(), 6u);
  EXPECT_EQ(real_matrix_from_json(Json::parse(dump_json(j))), a);
}

TEST(MatrixJson, ComplexRoundTrip) {
  Rng rng(73);
  const CMat a = rng.complex_gaussian(2, 2);
  const Json j = matrix_to_json(a);
  EXPECT_EQ(j["field"], "complex");
  ASSERT_EQ(j["data"].size(), 4u);
  EXPECT_EQ(j["data"][1][0].get<double>(), a(0, 1).real());
  EXPECT_EQ(j["data"][1][1].get<double>(), a(0, 1).imag());
  EXPECT_EQ(complex_matrix_from_json(Json::parse(dump_json(j))), a);
}

TEST(MatrixJson, RejectsMalformedInput) {
  EXPECT_THROW(real_matrix_from_json(Json::parse(R"({"rows":2,"cols":2,"field":"real","data":[1,2,3]})")), Error);
  EXPECT_THROW(real_matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"field":"complex","data":[[1,2]]})")), Error);
  EXPECT_THROW(complex_matrix_from_json(Json::parse(R"({"rows":1,"cols":1,"field":"complex","data":[1]})")), Error);
}

TEST(VecJson, RoundTrip) {
  Rng rng(74);
  const Vec v = rng.gaussian(5);
  EXPECT_EQ(vec_from_json(Json::parse(dump_json(vec_to_json(v)))), v);
}

TEST(CutCloudJson, CarriesAllSampleFields) {
  const Submanifold link(ManifoldId::sphere(3), HopfLink{});
  SampleConfig config;
  config.feet = 2;
  config.dirs_per_foot = 2;
  config.seed = 3;
  const CutCloud cloud = sample_cut_locus(link, config);
  const Json j = Json::parse(dump_json(cut_cloud_to_json(link, config.seed, cloud)));
  EXPECT_EQ(j["submanifold"], "hopflink");
  EXPECT_EQ(j["ambient"], "sphere:3");
  EXPECT_EQ(j["seed"], 3);
  ASSERT_EQ(j["samples"].size(), 4u);
  for (std::size_t i = 0; i < cloud.samples.size(); ++i) {
    const Json& s = j["samples"][i];
    EXPECT_EQ(s["rho"].get<double>(), cloud.samples[i].rho);
    EXPECT_EQ(vec_from_json(s["cut"]), cloud.samples[i].cut_point.coords);
    EXPECT_EQ(s["mult"], 2);
    EXPECT_EQ(s["class"], "separating");
  }
  EXPECT_TRUE(j["unresolved"].empty());
}

TEST(CutCloudCsv, StartsWithCommentAndHasOneRowPerSample) {
  const Submanifold eq(ManifoldId::sphere(2), EquatorSphere{1});
  SampleConfig config;
  config.feet = 2;
  config.dirs_per_foot = 3;
  const std::string csv = cut_cloud_to_csv(eq, config.seed, sample_cut_locus(eq, config));
  EXPECT_EQ(csv.rfind("# ", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 1 + 6);
}

TEST(ChecksJson, ListsEveryCheck) {
  const std::vector<Check> checks = {check_at_most("a", 1e-9, 1e-8), check_at_least("b", 0.5, 1.0)};
  const Json j = checks_to_json(checks);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["name"], "a");
  EXPECT_EQ(j[0]["pass"], true);
  EXPECT_EQ(j[1]["pass"], false);
}

TEST(MinimizerSetJson, SaturatedFlag) {
  const Submanifold on(ManifoldId::matrix_space(2), OrthogonalGroup{});
  const Json j = minimizer_set_to_json(dist_to(on, ManifoldPoint::from_matrix(on.ambient, Mat::Zero(2, 2))));
  EXPECT_EQ(j["saturated"], true);
  EXPECT_NEAR(j["distance"].get<double>(), std::sqrt(2.0), 1e-12);
}

}  // namespace
}  // namespace cutloci
