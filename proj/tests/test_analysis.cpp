#include <doctest.h>

#include "gfd/analysis.hpp"
#include "gfd/errors.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace gfd;
using gfd::test::Rng;

TEST_CASE("linf_vs_one") {
  const PointCloud g = add_fictitious_nodes(build_regular_grid(19));
  const auto n = static_cast<Eigen::Index>(g.size());
  CHECK(linf_vs_one(Eigen::VectorXd::Ones(n), g) == 0.0);
  CHECK(linf_vs_one(Eigen::VectorXd::Constant(n, 1.5), g) == 0.5);

  // Ghost values never count.
  Eigen::VectorXd f = Eigen::VectorXd::Ones(n);
  f(n - 1) = 100.0;
  CHECK(linf_vs_one(f, g) == 0.0);

  // Example 1 data: the background 0.1 is further from 1 than the peak.
  const Eigen::VectorXd u0 = eval_initial(initial_bump(0.1, 5.0), g);
  CHECK(linf_vs_one(u0, g) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("error csv") {
  ErrorReport r;
  r.push(0.05, 0.87766534, 1.0 / 3.0);
  r.push(1.0, 1e-13, 2.5e-300);
  std::ostringstream out;
  write_error_csv(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,err_u,err_v");
  std::getline(in, line);
  CHECK(line == "0.050000000000000003,0.87766533999999996,0.33333333333333331");
  std::getline(in, line);
  CHECK(line == "1,1e-13,2.5e-300");
}

TEST_CASE("fit_order") {
  CHECK(fit_order({0.1, 0.05, 0.025}, {1e-2, 2.5e-3, 6.25e-4}) == doctest::Approx(2.0));
  CHECK(fit_order({1.0, 0.5}, {3.0, 1.5}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_order({0.1}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_order({0.1, 0.2}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("manufactured elliptic study") {
  const ConvergenceStudy s = manufactured_elliptic_study({11, 21, 41});
  REQUIRE(s.errors.size() == 3);
  CHECK(s.errors[0] > s.errors[1]);
  CHECK(s.errors[1] > s.errors[2]);
  CHECK(s.order >= 1.0);
  CHECK(s.spacings[1] == doctest::Approx(0.05));

  const ConvergenceStudy coarse = manufactured_elliptic_study({5});
  CHECK(coarse.errors[0] > 0.0);
  CHECK(std::isfinite(coarse.errors[0]));

  CHECK_THROWS_AS(manufactured_elliptic_study({21, 11}), std::invalid_argument);
  CHECK_THROWS_AS(manufactured_elliptic_study({3}), std::invalid_argument);

  std::ostringstream out;
  write_convergence_csv(s, out);
  CHECK(out.str().rfind("n,h,max_error\n11,0.10000000000000001,", 0) == 0);
}

TEST_CASE("rhs oracle at equilibrium") {
  const PointCloud g = add_fictitious_nodes(build_regular_grid(11));
  const StencilSet st = build_stencil_set(g, 8, WeightScheme{});
  const auto n = static_cast<Eigen::Index>(g.size());
  const State s{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Ones(n), 0, 0.0};
  const ModelParams p{3.0, gamma_exponential()};
  // The oracle sums -lambda0 f0 + sum lambda f, so it only cancels to roundoff.
  CHECK(rhs_oracle_compare(s, st, p) <= 1e-12);
  CHECK(parabolic_rhs(s, st, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("property: rhs oracle agrees on random smooth states") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const bool irregular = trial % 2 == 1;
    const int n = rng.integer(7, 15);
    const PointCloud g = add_fictitious_nodes(
        irregular ? build_perturbed_grid(n, unit_square, 0.25, static_cast<std::uint64_t>(trial))
                  : build_regular_grid(n));
    const StencilSet st = build_stencil_set(g, rng.pick(std::vector<int>{8, 9, 12}), WeightScheme{});
    const double a = rng.uniform(1.5, 3), b = rng.uniform(0.1, 1), kx = rng.uniform(0, 4),
                 ky = rng.uniform(0, 4);
    const State s{test::sample(g, [&](double x, double y) { return a + b * std::sin(kx * x) * std::cos(ky * y); }),
                  test::sample(g, [&](double x, double y) { return a + 0.5 * b * std::cos(kx * x + ky * y); }),
                  0, 0.0};
    const ModelParams p{rng.uniform(0.0, 6.0), trial % 3 ? gamma_exponential() : gamma_inverse_square()};
    const Eigen::VectorXd rhs = parabolic_rhs(s, st, p);
    CHECK(rhs_oracle_compare(s, st, p) <= 1e-12 * (1 + rhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("property: linf_vs_one scales with the offset") {
  Rng rng(66);
  const PointCloud g = add_fictitious_nodes(build_regular_grid(9));
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd shape =
        test::sample(g, [&](double x, double y) { return std::sin(7 * x + trial) * std::cos(3 * y); });
    const double c = rng.uniform(-10, 10);
    const Eigen::VectorXd f = (1.0 + c * shape.array()).matrix();
    const double base = linf_vs_one((1.0 + shape.array()).matrix(), g);
    CHECK(linf_vs_one(f, g) == doctest::Approx(std::abs(c) * base).epsilon(1e-12));
  }
}

TEST_CASE("comparison report") {
  ErrorReport a;
  ErrorReport b;
  for (double t : {0.05, 0.1, 1.0}) {
    a.push(t, 0.1 * t, 0.2 * t);
    b.push(t, 0.3 * t, 0.4 * t);
  }
  const DominanceTable ab = comparison_report(a, b);
  CHECK(ab.full_dominance());
  const DominanceTable ba = comparison_report(b, a);
  CHECK_FALSE(ba.u_dominates);
  CHECK_FALSE(ba.v_dominates);

  const DominanceTable same = comparison_report(a, a);
  CHECK_FALSE(same.u_dominates);
  CHECK_FALSE(same.v_dominates);

  ErrorReport zero;
  for (double t : a.times) zero.push(t, 0.0, 0.0);
  CHECK(comparison_report(zero, b).full_dominance());

  ErrorReport shifted;
  shifted.push(0.5, 1, 1);
  CHECK_THROWS_AS(comparison_report(a, shifted), ComparisonError);

  std::ostringstream out;
  write_dominance_csv(a, b, ab, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,err_u_a,err_u_b,u_a_smaller,err_v_a,err_v_b,v_a_smaller");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
