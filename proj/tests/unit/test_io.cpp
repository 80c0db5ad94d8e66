#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "ridgetv/io.hpp"

using namespace ridgetv;

namespace {

std::filesystem::path tmp(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ridgetv_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(Json, DumpKeepsFullPrecision) {
  io::json j = {{"a", 0.1}, {"b", 3.0}, {"c", 7}, {"v", {1.0 / 3.0, -2.5e-300}}};
  const auto s = io::dump(j, 0);
  EXPECT_EQ(s, R"({"a":0.10000000000000001,"b":3.0,"c":7,"v":[0.33333333333333331, -2.5e-300]})");
  const auto back = io::json::parse(s);
  EXPECT_EQ(back["v"][0].get<double>(), 1.0 / 3.0);
  EXPECT_TRUE(back["b"].is_number_float());
}

TEST(Json, NetworkRoundTripIsExact) {
  const auto net = oracle::planted_teacher();
  const auto back = io::network_from_json(io::json::parse(io::dump(io::to_json(net))));
  ASSERT_EQ(back.size(), net.size());
  EXPECT_EQ(back.m(), 2);
  for (std::size_t k = 0; k < net.size(); ++k) {
    EXPECT_EQ(back.neurons()[k].alpha, net.neurons()[k].alpha);
    EXPECT_EQ(back.neurons()[k].point, net.neurons()[k].point);
  }
}

TEST(Json, MeasureRoundTripIsExact) {
  AtomicMeasure mu(3);
  mu.add(-0.125, {UnitVector::normalized({1.0, 2.0, 3.0}), 0.7});
  mu.add(2.0, {UnitVector::normalized({-1.0, 0.1, 0.0}), -1.0 / 7.0});
  const auto back = io::measure_from_json(io::json::parse(io::dump(io::to_json(mu))));
  EXPECT_EQ(measure_distance(back, mu), 0.0);
}

TEST(Json, MalformedNetwork) {
  EXPECT_THROW(io::network_from_json(io::json::parse(R"({"m":2,"d":2})")), ValidationError);
  EXPECT_THROW(io::network_from_json(io::json::parse(R"({"m":2,"d":2,"neurons":[{"alpha":1,"n":[1,0,0],"t":0}]})")),
               ValidationError);
  EXPECT_THROW(io::network_from_json(io::json::parse(R"({"m":2,"d":2,"neurons":[{"alpha":1,"n":[1,1],"t":0}]})")),
               ValidationError);
}

TEST(Csv, TrainingRoundTrip) {
  const auto data = oracle::sample_teacher(oracle::planted_teacher(), 9, 1);
  const auto p = tmp("train.csv");
  io::write_training_csv(p, data);
  const auto back = io::read_training_csv(p);
  EXPECT_EQ(back.X, data.X);
  EXPECT_EQ(back.y, data.y);
}

TEST(Csv, TrainingRejectsMalformed) {
  const auto p = tmp("bad.csv");
  write_text(p, "x_1,x_2,y\n0.1,0.2,0.3\n0.4,0.5\n");
  EXPECT_THROW(io::read_training_csv(p), ValidationError);
  write_text(p, "x_1,x_2,y\n0.1,abc,0.3\n");
  EXPECT_THROW(io::read_training_csv(p), ValidationError);
  write_text(p, "a,b\n1,2\n");
  EXPECT_THROW(io::read_training_csv(p), ValidationError);
  write_text(p, "x_1,y\n");
  EXPECT_THROW(io::read_training_csv(p), ValidationError);
  EXPECT_THROW(io::read_training_csv(tmp("missing.csv")), ValidationError);
}

TEST(Sinogram, CsvRoundTripD2) {
  const auto S = sample_sinogram([](const UnitVector& n, double t) { return n[0] * t + 0.5; },
                                 DirectionGrid::uniform_circle(8), TGrid::covering(2.0, 0.25));
  const auto p = tmp("sino.csv");
  io::write_sinogram_csv(p, S);
  const auto back = io::read_sinogram_csv(p, 2);
  ASSERT_EQ(back.n_dir(), S.n_dir());
  ASSERT_EQ(back.n_t(), S.n_t());
  EXPECT_EQ(back.values, S.values);
  for (std::size_t j = 0; j < S.n_dir(); ++j) EXPECT_NEAR(back.grid.dirs[j][0], S.grid.dirs[j][0], 1e-15);
  EXPECT_EQ(back.parity, Parity::None);
}

TEST(Sinogram, BinaryRoundTrip) {
  const auto S = sample_sinogram([](const UnitVector& n, double t) { return n[2] - t * t; },
                                 DirectionGrid::fibonacci_sphere(16), TGrid::covering(1.0, 0.1));
  const auto p = tmp("sino.bin");
  io::write_sinogram_binary(p, S);
  const auto back = io::read_sinogram_binary(p);
  EXPECT_EQ(back.d(), 3);
  EXPECT_EQ(back.values, S.values);
  EXPECT_EQ(back.tgrid.n, S.tgrid.n);
  EXPECT_EQ(back.tgrid.h, S.tgrid.h);
  write_text(p, "JUNKJUNKJUNK");
  EXPECT_THROW(io::read_sinogram_binary(p), ValidationError);
}

TEST(Report, ContainsTraceAndMeasure) {
  const auto data = oracle::sample_teacher(oracle::planted_teacher(), 10, 2);
  SolverConfig cfg;
  cfg.max_outer_iters = 3;
  const auto rep = solve(data, Loss::Squared, 2, BetaSpec::default_rational(2), cfg);
  const auto j = io::to_json(rep);
  EXPECT_EQ(j["objective_trace"].size(), rep.objective_trace.size());
  EXPECT_EQ(j["measure"]["atoms"].size(), rep.measure.size());
  EXPECT_EQ(j["K"].get<int>(), rep.K);
}
