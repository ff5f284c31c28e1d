#include <cmath>
#include <filesystem>
#include <fstream>

#include "carnot/io.hpp"
#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

TEST(Io, GroupRoundTrip) {
  for (const auto& name : kGroups) {
    GroupPtr g = builtin_group(name);
    GroupPtr back = group_from_json(Json::parse(group_to_json(*g).dump()));
    EXPECT_EQ(*back, *g) << name;
  }
}

TEST(Io, GroupFileValidation) {
  Json j = group_to_json(*builtin_group("heisenberg1"));
  j["colour"] = "blue";
  expect_error(ErrorKind::FormatError, [&] { group_from_json(j); });
  Json broken = group_to_json(*builtin_group("engel"));
  broken["brackets"].erase(1);
  expect_error(ErrorKind::NotStratified, [&] { group_from_json(broken); });
  expect_error(ErrorKind::NotFound, [&] { read_group_file("/nonexistent/group.json"); });
  auto path = std::filesystem::temp_directory_path() / "carnot_group_test.json";
  std::ofstream(path) << group_to_json(*builtin_group("engel")).dump(2);
  EXPECT_EQ(*read_group_file(path.string()), *builtin_group("engel"));
  std::filesystem::remove(path);
}

TEST(Io, PolynomialAndOperatorRoundTrip) {
  GroupPtr g = builtin_group("engel");
  Engine rng(97);
  for (int i = 0; i < 10; ++i) {
    StratifiedPolynomial p = random_polynomial(g, 5, 6, rng);
    EXPECT_EQ(polynomial_from_json(Json::parse(polynomial_to_json(p).dump()), g), p);
  }
  CoefficientMatrix a = identity_matrix(g);
  a[0][1] = a[1][0] = poly("x/3", g);
  DiffOperator op = operator_from_matrix(a, g);
  EXPECT_EQ(operator_from_json(Json::parse(operator_to_json(op).dump()), g), op);
  expect_error(ErrorKind::ArityMismatch,
               [&] { polynomial_from_json(polynomial_to_json(poly("x", builtin_group("heisenberg1"))), g); });
}

TEST(Io, ApproxResultRoundTrip) {
  GroupPtr h = builtin_group("heisenberg1");
  ApproxResult r = solve_approximating(sub_laplacian(h), flat_distance(h, 4), poly("x + y^2", h), 4);
  ApproxResult back = approx_result_from_json(Json::parse(approx_result_to_json(r, h).dump()), h);
  EXPECT_EQ(back.p, r.p);
  EXPECT_EQ(back.residuals, r.residuals);
  EXPECT_EQ(back.free_assignment, r.free_assignment);
  FreeAssignment free = r.free_assignment;
  free.begin()->second = Rational(-7, 3);
  EXPECT_EQ(free_assignment_from_json(free_assignment_to_json(free, h), h), free);
}

TEST(Io, DecayReportRoundTrip) {
  DecayReport r{{0.5, 0.25}, {1e-3, 2.5e-5}, 5.32, -1.0};
  DecayReport back = decay_report_from_json(Json::parse(decay_report_to_json(r).dump()));
  EXPECT_EQ(back.radii, r.radii);
  EXPECT_EQ(back.residuals, r.residuals);
  EXPECT_EQ(back.slope, r.slope);
  DecayReport inf{{0.5}, {0.0}, std::numeric_limits<double>::infinity(), 0};
  EXPECT_TRUE(std::isinf(decay_report_from_json(Json::parse(decay_report_to_json(inf).dump())).slope));
}

TEST(Io, OtherReportsAreJson) {
  GroupPtr h = builtin_group("heisenberg1");
  Json mc = mc_estimate_to_json({0.06, 0.001, 1000, 7});
  EXPECT_EQ(mc["n_paths"], 1000);
  Json barrier = barrier_report_to_json({std::nullopt, -0.5, 400});
  EXPECT_TRUE(barrier["k_found"].is_null());
  CharScanResult scan{0.5, nelem(h, {0, 0, 0}), false, 10};
  EXPECT_EQ(char_scan_to_json(scan)["samples"], 10);
}
