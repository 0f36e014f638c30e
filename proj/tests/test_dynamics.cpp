#include <doctest.h>

#include <cmath>
#include <random>

#include "qlat/catalog.hpp"
#include "qlat/dynamics.hpp"

using namespace qlat;

namespace {

FiniteVolumeGenerator xyz_chain(double j, int len, bool periodic) {
  return assemble(model_xyz(j, j, j), Volume({len}, periodic));
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("flow satisfies the semigroup law") {
  const FiniteVolumeGenerator g = xyz_chain(0.1, 2, false);
  const Mat lh = heisenberg_generator(g);
  const Mat p1 = expm(Mat(lh * 0.3));
  const Mat p2 = expm(Mat(lh * 0.5));
  const Mat p3 = expm(Mat(lh * 0.8));
  CHECK(op_norm(Mat(p1 * p2 - p3)) < 1e-11);
  // t = 0 is the identity
  CHECK(op_norm(Mat(expm(Mat(lh * 0.0)) - Mat::Identity(16, 16))) < 1e-13);
}

TEST_CASE("propagator route matches direct integration") {
  const FiniteVolumeGenerator g = xyz_chain(0.1, 2, false);
  const Mat lh = heisenberg_generator(g);
  std::mt19937_64 gen(3);
  const Mat f = random_matrix(4, gen);
  const EvolutionResult r = evolve(lh, f, 0.0, 1.0, 5);
  REQUIRE(r.times.size() == 5);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const Mat rk = evolve_rk4(lh, f, r.times[k], 400);
    const double rel =
        (r.values[k] - rk).norm() / std::max(1.0, rk.norm());
    CHECK(rel < 1e-6);
  }
}

TEST_CASE("flow is unital and positivity preserving") {
  const FiniteVolumeGenerator g = xyz_chain(0.15, 2, true);
  const Mat lh = heisenberg_generator(g);
  const Mat pt = expm(Mat(lh * 0.7));
  const Vec one = vec_stack(Mat(Mat::Identity(4, 4)));
  CHECK((pt * one - one).norm() < 1e-12);
  const CheckResult choi = check_choi(g, {0.1, 0.7, 2.0}, 1e-9);
  CHECK(choi.pass);
}

TEST_CASE("stationary state is found with a small residual") {
  const FiniteVolumeGenerator g = xyz_chain(0.05, 3, true);
  const StationaryState st = stationary_state(schrodinger_generator(g));
  CHECK(st.kernel_dim == 1);
  CHECK(st.residual < 1e-9);
  CHECK(std::abs(st.rho.trace() - cplx(1.0)) < 1e-10);
  // the exchange couplings preserve the uniform state exactly
  CHECK((st.rho - Mat::Identity(8, 8) / 8.0).norm() < 1e-8);
}

TEST_CASE("site components shift the free flow by their decay rate") {
  const CheckResult r = check_intertwining(xyz_chain(0.1, 3, false), 1e-9);
  CHECK(r.pass);
  CHECK(r.worst_slack > -1e-9);
}

TEST_CASE("resolvent solutions inherit the dependence profile bound") {
  const CheckResult r = check_resolvent(xyz_chain(0.01, 3, true), 1.0, 8, 7, 1e-9);
  CHECK(r.pass);
}

TEST_CASE("resolvent rejects rates below the coupling threshold") {
  // strong coupling: lambda + gap stays below the coupling constant
  const FiniteVolumeGenerator g = xyz_chain(0.8, 3, true);
  CHECK_THROWS_AS(check_resolvent(g, 0.01, 2, 1, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("seminorm contracts along the flow") {
  const CheckResult r =
      check_contraction(xyz_chain(0.01, 3, true), 0.0, 2.0, 5, 4, 11, 1e-8);
  CHECK(r.pass);
}

TEST_CASE("local observables converge to their stationary value") {
  const CheckResult r =
      check_convergence(xyz_chain(0.002, 4, false), 0.0, 3.0, 6, 4, 13, 1e-6);
  CHECK(r.pass);
}

TEST_CASE("disjoint evolved observables stay nearly independent") {
  const CheckResult r =
      check_propagation(xyz_chain(0.01, 4, false), 0.5, 0.0, 1.5, 4, 17, 1e-8);
  CHECK(r.pass);
}

TEST_CASE("stationary correlations decay at the certified rate") {
  const CheckResult r = check_correlation_decay(xyz_chain(0.005, 4, false),
                                                {1, 2, 3}, 19, 1e-9);
  CHECK(r.pass);
  REQUIRE(r.samples.size() == 3);
  for (const CheckSample& s : r.samples) CHECK(s.value <= s.bound + 1e-9);
}

TEST_CASE("certificate constants stabilize as the volume grows") {
  const CheckResult r =
      check_volume_limit(model_xyz(0.01, 0.01, 0.01), {4, 5, 6}, 1e-9);
  CHECK(r.pass);
}

TEST_CASE("check bookkeeping tracks the worst sample") {
  CheckResult r;
  r.name = "bookkeeping";
  r.add(0.0, "a", 1.0, 2.0);
  r.add(1.0, "b", 3.0, 2.5);
  r.finish(0.1);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_slack == doctest::Approx(-0.5).epsilon(1e-14));
  r.samples.pop_back();
  r.finish(0.1);
  CHECK(r.pass);
  CHECK(r.worst_slack == doctest::Approx(1.0).epsilon(1e-14));
}

}  // TEST_SUITE
