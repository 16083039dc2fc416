#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "sirlyap/errors.hpp"
#include "sirlyap/levelset.hpp"

namespace sirlyap {
namespace {

TEST(Levelset, CircleIsOneClosedLoop) {
  const PlaneField f = [](double u, double v) { return std::hypot(u, v); };
  const auto cs = extract_contours(f, {1.0, 2.0}, Plane{}, Window{-3, 3, -3, 3}, {200, 200});
  ASSERT_EQ(cs.size(), 2u);
  for (const Contour& c : cs) {
    ASSERT_EQ(c.polylines.size(), 1u);
    EXPECT_TRUE(is_closed(c.polylines[0], 1e-9));
    for (const Point2& q : c.polylines[0]) EXPECT_NEAR(std::hypot(q.u, q.v), c.level, 1e-6);
  }
  EXPECT_FALSE(contours_cross(cs[0], cs[1]));
}

TEST(Levelset, InfinityIsOutside) {
  const PlaneField f = [](double u, double v) {
    return u < -0.5 ? std::numeric_limits<double>::infinity() : std::hypot(u, v);
  };
  const auto cs = extract_contours(f, {1.0}, Plane{}, Window{-2, 2, -2, 2}, {100, 100});
  ASSERT_EQ(cs.size(), 1u);
  ASSERT_FALSE(cs[0].polylines.empty());
  for (const auto& line : cs[0].polylines) {
    for (const Point2& q : line) EXPECT_GE(q.u, -0.5 - 0.05);
  }
}

TEST(Levelset, ZeroLevelGivesPointMarker) {
  const PlaneField f = [](double u, double v) { return std::abs(u) + std::abs(v); };
  const auto cs = extract_contours(f, {0.0}, Plane{}, Window{-1, 1, -1, 1}, {10, 10});
  ASSERT_TRUE(cs[0].point_marker.has_value());
  EXPECT_EQ(cs[0].point_marker->u, 0.0);
}

TEST(Levelset, CrossingDetection) {
  Contour a, b;
  a.polylines = {{{0, 0}, {1, 1}}};
  b.polylines = {{{0, 1}, {1, 0}}};
  EXPECT_TRUE(contours_cross(a, b));
  b.polylines = {{{2, 2}, {3, 3}}};
  EXPECT_FALSE(contours_cross(a, b));
  EXPECT_NEAR(distance_to_contour(a, {0.0, 1.0}), std::sqrt(0.5), 1e-12);
}

TEST(Levelset, DiseaseFreeMatchesAnalyticContour) {
  DfOverrides o;
  o.mu0 = 0.0148;
  o.eps = 0.0745;
  const ModelParams p = disease_free_example_params();
  const DiseaseFreeLyapunov v(p, select_df_params(p, o));
  const Window w{-200.0, 600.0, 0.0, 600.0};
  const Resolution res{400, 300};
  const double cell = std::max((w.u_max - w.u_min) / res.nu, (w.v_max - w.v_min) / res.nv);
  const auto cs = extract_contours(LyapunovFunction{v}, {30.0, 180.0}, Plane{}, w, res);
  for (const Contour& c : cs) {
    const Contour exact = analytic_contour_df(v, c.level);
    for (const auto& line : c.polylines) {
      for (const Point2& q : line) EXPECT_LE(distance_to_contour(exact, q), 2.0 * cell);
    }
  }
  EXPECT_THROW(extract_contours(LyapunovFunction{v}, {30.0}, Plane{}, Window{-300, 600, 0, 600}),
               DomainError);
}

TEST(Levelset, CsvHeader) {
  Contour c;
  c.level = 2.0;
  c.polylines = {{{0, 0}, {1, 1}}};
  std::ostringstream os;
  write_contours_csv(os, {c});
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "level,polyline_id,x1,x2");
}

}  // namespace
}  // namespace sirlyap
