#include <doctest.h>

#include <cmath>
#include <random>

#include "qlat/fermion.hpp"

using namespace qlat;

TEST_SUITE("fermion-car") {

TEST_CASE("anticommutation relations hold exactly") {
  for (int m : {2, 3, 4}) {
    const CarRep rep = build_car(Volume({m}, false), 0.4);
    const CheckResult r = fermion_car_suite(rep, 1e-12);
    CHECK(r.pass);
    CHECK(r.worst_slack > -1e-12);
  }
}

TEST_CASE("mode operators square to zero and count particles") {
  const CarRep rep = build_car(Volume({3}, false), 0.0);
  for (int x = 0; x < 3; ++x) {
    CHECK((rep.a[x] * rep.a[x]).norm() == 0.0);
    CHECK((rep.ad[x] * rep.ad[x]).norm() == 0.0);
    const Mat n = rep.ad[x] * rep.a[x];
    CHECK((n * n - n).norm() < 1e-14);
  }
  // total parity anticommutes with every annihilator
  for (int x = 0; x < 3; ++x)
    CHECK(acomm(rep.w, rep.a[x]).norm() == 0.0);
}

TEST_CASE("dressed operators commute across modes") {
  const CarRep rep = build_car(Volume({3}, false), 0.0);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (x == y) continue;
      CHECK(comm(rep.v[x], rep.a[y]).norm() == 0.0);
      CHECK(comm(rep.v[x], rep.ad[y]).norm() == 0.0);
      CHECK(comm(rep.vd[x], rep.a[y]).norm() == 0.0);
    }
}

TEST_CASE("gradient decomposition reconstructs observables") {
  const CarRep rep = build_car(Volume({3}, false), 0.6);
  const CheckResult r = fermion_decomposition_check(rep, 12, 21, 1e-10);
  CHECK(r.pass);
}

TEST_CASE("gradients annihilate operators supported away from the mode") {
  const CarRep rep = build_car(Volume({3}, false), 0.0);
  // operators built from the other modes' letters are flat for mode 0
  const Mat f = rep.ad[1] * rep.a[2] + rep.a[2].adjoint() * rep.a[1];
  CHECK(grad(rep, 0, f).norm() < 1e-13);
  CHECK(grad_bar(rep, 0, f).norm() < 1e-13);
  CHECK(grad_bare(rep, 0, f).norm() < 1e-13);
}

TEST_CASE("free generator shifts gradients by its relaxation rate") {
  for (double h : {0.0, 0.8}) {
    const CarRep rep = build_car(Volume({2}, false), h);
    const CheckResult r = fermion_intertwining(rep, 1e-9);
    CHECK(r.pass);
  }
}

TEST_CASE("free mode has the four-point spectrum") {
  const double h = 0.7;
  const CarRep rep = build_car(Volume({1}, false), h);
  const Mat l0 = fermi_ou_mode(rep, 0);
  Eigen::ComplexEigenSolver<Mat> es(Mat(-l0));
  RVec ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  const double c = std::cosh(h / 2.0);
  CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(ev(1) == doctest::Approx(2.0 * c).epsilon(1e-10));
  CHECK(ev(2) == doctest::Approx(2.0 * c).epsilon(1e-10));
  CHECK(ev(3) == doctest::Approx(4.0 * c).epsilon(1e-10));
  CHECK(fermi_gap(h) == doctest::Approx(2.0 * c).epsilon(1e-14));
}

TEST_CASE("product state is stationary and reversible for the free flow") {
  const CarRep rep = build_car(Volume({3}, false), 0.5);
  const Mat pi = gibbs_state(rep);
  CHECK(std::abs(pi.trace() - cplx(1.0)) < 1e-12);
  CHECK((fermi_ou_dual(rep) * vec_stack(pi)).norm() < 1e-11);
}

TEST_CASE("commutator norms match the gradient norms") {
  const CarRep rep = build_car(Volume({3}, false), 0.3);
  const CheckResult r = fermion_commutator_bounds(rep, 10, 31, 1e-9);
  CHECK(r.pass);
}

TEST_CASE("hopping certificate has the closed coupling constant") {
  const double h = 0.4;
  for (double J : {0.01, 0.05}) {
    const CarRep rep = build_car(Volume({4}, true), h);
    const FermionCertificateReport cert =
        fermion_certify(fermion_hopping(J, h, rep), rep);
    CHECK(cert.M == doctest::Approx(32.0 * J).epsilon(1e-9));
    CHECK(cert.gap == doctest::Approx(2.0 * std::cosh(h / 2.0)).epsilon(1e-12));
    CHECK(cert.pass == (cert.margin > 0.0));
  }
}

TEST_CASE("interaction commutation defects respect the weights") {
  const CarRep rep = build_car(Volume({3}, false), 0.2);
  const FermionVolumeGenerator g =
      fermion_assemble(fermion_hopping(0.05, 0.2, rep), rep);
  const CheckResult r = fermion_generator_commutator(g, 8, 41, 1e-9);
  CHECK(r.pass);
}

TEST_CASE("hopping conserves particle number and keeps the product state") {
  const CarRep rep = build_car(Volume({3}, true), 0.6);
  const FermionVolumeGenerator g =
      fermion_assemble(fermion_hopping(0.08, 0.6, rep), rep);
  const CheckResult r = fermion_stationarity(g, 1e-10);
  CHECK(r.pass);
}

TEST_CASE("seminorm contracts and observables converge for weak hopping") {
  const CarRep rep = build_car(Volume({3}, false), 0.0);
  const FermionVolumeGenerator g =
      fermion_assemble(fermion_hopping(0.01, 0.0, rep), rep);
  const CheckResult rc = fermion_contraction(g, 0.0, 2.0, 5, 4, 51, 1e-8);
  CHECK(rc.pass);
  const CheckResult rv = fermion_convergence(g, 0.0, 3.0, 6, 4, 53, 1e-6);
  CHECK(rv.pass);
}

TEST_CASE("battery aggregates the full fermionic suite") {
  const CarRep rep = build_car(Volume({2}, false), 1.0);
  const std::vector<CheckResult> rs =
      fermion_checks(fermion_hopping(0.02, 1.0, rep), rep, 61, 1.0);
  REQUIRE(!rs.empty());
  for (const CheckResult& r : rs) {
    INFO(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("free flow on a mode matches the two-sided jump form") {
  const CarRep rep = build_car(Volume({2}, false), 0.9);
  const Mat direct = std::exp(0.45) * sop_dissipator(rep.vd[0]) +
                     std::exp(-0.45) * sop_dissipator(rep.v[0]);
  CHECK(op_norm(Mat(fermi_ou_mode(rep, 0) - direct)) < 1e-12);
}

}  // TEST_SUITE
