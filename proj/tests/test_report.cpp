// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/report.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace oevqe;

namespace {

RunReport small_run() {
  SolverConfig c;
  c.grad_threshold = 1e-3;
  auto rep = oe_run(fx::load("h4_1.00"), FragmentSpec{{0}}, c);
  rep.e_fci = fx::reference("h4_1.00").e_fci;
  return rep;
}

}  // namespace

TEST(Report, JsonRoundTrip) {
  const auto rep = small_run();
  const auto back = report_from_json(report_json(rep));
  EXPECT_EQ(back.mode, rep.mode);
  EXPECT_EQ(back.stages.size(), rep.stages.size());
  EXPECT_EQ(back.e_final, rep.e_final);
  EXPECT_EQ(back.total_ops, rep.total_ops);
  EXPECT_EQ(back.delta_lambda, rep.delta_lambda);
  ASSERT_EQ(back.direction.size(), rep.direction.size());
  for (std::size_t i = 0; i < rep.direction.size(); ++i) {
    EXPECT_EQ(back.direction.records[i].op, rep.direction.records[i].op);
    EXPECT_EQ(back.direction.records[i].theta, rep.direction.records[i].theta);
  }
  for (std::size_t i = 0; i < rep.stages.size(); ++i) {
    EXPECT_EQ(back.stages[i].e_g, rep.stages[i].e_g);
    EXPECT_EQ(back.stages[i].e_sub, rep.stages[i].e_sub);
  }
  EXPECT_EQ(report_json(back), report_json(rep));
  EXPECT_LE(rederivation_error(back), 1e-12);
}

TEST(Report, RederivationCatchesTampering) {
  auto rep = small_run();
  rep.stages.back().e_g += 1e-9;
  EXPECT_GT(rederivation_error(report_from_json(report_json(rep))), 1e-12);
}

TEST(Report, RejectsForeignDocuments) {
  EXPECT_THROW(report_from_json("not json"), InputError);
  EXPECT_THROW(report_from_json(R"({"schema":"other"})"), InputError);
  EXPECT_THROW(report_from_json(R"({"schema":"oevqe.report","version":99})"), InputError);
  EXPECT_THROW(report_from_json(R"({"schema":"oevqe.report","version":1})"), InputError);
}

TEST(Report, Tables) {
  const auto rep = small_run();
  const auto csv = stage_csv(rep);
  EXPECT_EQ(csv.rfind("n_s,norb,n_elec,ops,pool,e_reference,e_sub,e_core,e_nuc,e_g,error\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(rep.stages.size()) + 1);
  const auto rk = ranking_csv(rep);
  EXPECT_EQ(std::count(rk.begin(), rk.end(), '\n'), static_cast<long>(rep.delta_lambda.size()) + 1);
  EXPECT_EQ(format_energy(-1.137283834488), "-1.13728383449");
}

TEST(Report, CurveTable) {
  CurvePoint p;
  p.distance = 1.5;
  p.path = "x";
  p.e_oe = -3.0;
  p.e_fci = -3.001;
  const auto a = curve_csv({p}, false), b = curve_csv({p}, true);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2);
  EXPECT_GT(b.find('\n'), a.find('\n'));
}
