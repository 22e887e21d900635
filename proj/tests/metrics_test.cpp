#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "cfsim/errors.hpp"
#include "cfsim/metrics.hpp"
#include "cfsim/world.hpp"
#include "support/oracles.hpp"

namespace cfsim {
namespace {

Trajectory scripted(const std::string& id, const Vec3& start, std::vector<ScriptEntry> script,
                    int ticks, double charge = 1.0) {
  Scenario s;
  DroneSpec d;
  d.id = id;
  d.position = start;
  d.charge = charge;
  s.drones.push_back(d);
  s.arena.min = {-5, -5, 0};
  s.arena.max = {5, 5, 3};
  s.scripts[id] = std::move(script);
  return run(create_world(s), ticks).trajectories.at(0);
}

TEST(Mse, Examples) {
  const std::vector<double> same = {1.5, -2.0, 3.25};
  EXPECT_EQ(mse(same, same), 0.0);
  EXPECT_EQ(mse(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
  EXPECT_NEAR(mse(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}), 1.0 / 3.0, 1e-15);
}

TEST(Mse, Errors) {
  EXPECT_THROW(mse(std::vector<double>{}, std::vector<double>{}), MetricsError);
  EXPECT_THROW(mse(std::vector<double>{1}, std::vector<double>{1, 2}), MetricsError);
}

TEST(Mse, CancellationAgainstNaiveOracle) {
  std::vector<double> a;
  std::vector<double> b;
  for (int i = 0; i < 100000; ++i) {
    a.push_back(1e8 + i * 1e-3);
    b.push_back(1e8 + i * 1e-3 + ((i % 7) - 3) * 1e-6);
  }
  const long double want = testing::naive_mse(a, b);
  EXPECT_NEAR(mse(a, b), double(want), 1e-12 * double(want));
}

TEST(Summarize, HoverIsStill) {
  const auto t = scripted("cf1", {0, 0, 1}, {}, 20);
  const auto s = summarize(t, Vec3(0, 0, 1));
  EXPECT_EQ(s.peakSpeed, 0.0);
  EXPECT_EQ(s.peakYawRate, 0.0);
  ASSERT_TRUE(s.finalPositionError);
  EXPECT_EQ(*s.finalPositionError, 0.0);
  EXPECT_FALSE(s.timeToZeroCharge);
}

TEST(Summarize, TimeToZeroCharge) {
  const auto t = scripted("cf1", {0, 0, 1}, {}, 20, 0.301);
  const auto s = summarize(t);
  ASSERT_TRUE(s.timeToZeroCharge);
  EXPECT_GT(*s.timeToZeroCharge, 0.0);
  EXPECT_EQ(t.rows.back().charge, 0.0);
}

TEST(PlotColumns, HoverTimeZ) {
  const auto t = scripted("cf1", {0, 0, 1}, {}, 3);
  std::ostringstream out;
  export_plot_columns(std::vector<Trajectory>{t}, PlotProjection::TimeZ, out);
  EXPECT_EQ(out.str(),
            "0.000000 1.000000\n0.100000 1.000000\n0.200000 1.000000\n0.300000 1.000000\n");
}

TEST(PlotColumns, BlocksSeparatedByOneBlankLine) {
  const auto a = scripted("a", {0, 0, 1}, {}, 1);
  const auto b = scripted("b", {0, 0, 2}, {}, 1);
  std::ostringstream out;
  export_plot_columns(std::vector<Trajectory>{a, b}, PlotProjection::XZ, out);
  EXPECT_EQ(out.str(),
            "0.000000 1.000000\n0.000000 1.000000\n\n0.000000 2.000000\n0.000000 2.000000\n");
}

TEST(PlotColumns, DiagonalLegXY) {
  const auto t = scripted("cf1", {0, 0, 1}, {{0, Command::position({1, 1, 1})}}, 100);
  std::ostringstream out;
  export_plot_columns(std::vector<Trajectory>{t}, PlotProjection::XY, out);
  std::istringstream in(out.str());
  double x0, y0, x, y;
  in >> x0 >> y0;
  EXPECT_EQ(x0, 0.0);
  EXPECT_EQ(y0, 0.0);
  while (in >> x >> y) {
  }
  EXPECT_NEAR(x, 1.0, 0.01);
  EXPECT_NEAR(y, 1.0, 0.01);
}

TEST(PlotColumns, ProjectionNames) {
  for (auto p : {PlotProjection::XY, PlotProjection::XZ, PlotProjection::TimeZ,
                 PlotProjection::TimeYaw, PlotProjection::TimeCharge}) {
    EXPECT_EQ(parse_projection(projection_name(p)), p);
  }
  EXPECT_FALSE(parse_projection("yz"));
}

}  // namespace
}  // namespace cfsim
