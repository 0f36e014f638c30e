#include <doctest.h>

#include <random>

#include "qlat/lattice.hpp"
#include "qlat/linalg.hpp"
#include "qlat/local_op.hpp"

using namespace qlat;

TEST_SUITE("operator-core") {

TEST_CASE("kron and vec conventions agree") {
  std::mt19937_64 gen(7);
  const Mat a = random_matrix(3, gen);
  const Mat b = random_matrix(2, gen);
  const Mat x = random_matrix(2, gen);
  // column stacking: vec(a x b) = (b^T (x) a) vec(x) with matching shapes
  const Mat axb = a.block(0, 0, 2, 2) * x * b;
  const Vec lhs = vec_stack(axb);
  const Vec rhs = kron(b.transpose(), a.block(0, 0, 2, 2)) * vec_stack(x);
  CHECK((lhs - rhs).norm() < 1e-13);
  // unvec inverts vec
  CHECK((unvec(vec_stack(x), 2, 2) - x).norm() == 0.0);
}

TEST_CASE("superoperator builders act as advertised") {
  std::mt19937_64 gen(11);
  const Mat a = random_matrix(3, gen);
  const Mat b = random_matrix(3, gen);
  const Mat x = random_matrix(3, gen);
  CHECK((unvec(sop_left(a) * vec_stack(x), 3, 3) - a * x).norm() < 1e-13);
  CHECK((unvec(sop_right(b) * vec_stack(x), 3, 3) - x * b).norm() < 1e-13);
  CHECK((unvec(sop_sandwich(a, b) * vec_stack(x), 3, 3) - a * x * b).norm() <
        1e-13);
  CHECK((unvec(sop_comm(a) * vec_stack(x), 3, 3) - comm(a, x)).norm() < 1e-13);
}

TEST_CASE("jump superoperator matches its definition and its dual") {
  std::mt19937_64 gen(13);
  const Mat l = random_matrix(3, gen);
  const Mat x = random_matrix(3, gen);
  const Mat rho = random_density(3, gen);
  const Mat dx = unvec(sop_dissipator(l) * vec_stack(x), 3, 3);
  const Mat direct = 2.0 * dagger(l) * x * l - dagger(l) * l * x - x * dagger(l) * l;
  CHECK((dx - direct).norm() < 1e-13);
  // trace duality against the state-side form
  const Mat drho = unvec(sop_dissipator_dual(l) * vec_stack(rho), 3, 3);
  const cplx lhs = (rho * dx).trace();
  const cplx rhs = (drho * x).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("matrix exponential agrees with the series on small inputs") {
  Mat nil = Mat::Zero(3, 3);
  nil(0, 1) = 2.0;
  nil(1, 2) = -1.5;
  const Mat e = expm(nil);
  const Mat series =
      Mat::Identity(3, 3) + nil + 0.5 * nil * nil;  // nilpotent of order 3
  CHECK((e - series).norm() < 1e-12);
  CHECK((expm(Mat(Mat::Zero(4, 4))) - Mat::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("norms behave on known operators") {
  std::mt19937_64 gen(17);
  const Mat u = pauli(1);  // unitary
  CHECK(op_norm(u) == doctest::Approx(1.0).epsilon(1e-12));
  const Mat h = random_hermitian(4, gen);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  CHECK(trace_norm(h) ==
        doctest::Approx(es.eigenvalues().cwiseAbs().sum()).epsilon(1e-12));
  CHECK(op_norm(h) ==
        doctest::Approx(es.eigenvalues().cwiseAbs().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("weighted inner product is positive and sesquilinear") {
  std::mt19937_64 gen(19);
  const Mat rho = random_density(3, gen);
  const Mat a = random_matrix(3, gen);
  const Mat b = random_matrix(3, gen);
  CHECK(gns_inner(rho, a, a).real() > 0.0);
  CHECK(std::abs(gns_inner(rho, a, a).imag()) < 1e-14);
  const cplx ab = gns_inner(rho, a, b);
  const cplx ba = gns_inner(rho, b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
}

TEST_CASE("pauli algebra") {
  CHECK((pauli(1) * pauli(2) - cplx(0, 1) * pauli(3)).norm() < 1e-15);
  CHECK((pauli(2) * pauli(3) - cplx(0, 1) * pauli(1)).norm() < 1e-15);
  for (int j = 1; j <= 3; ++j)
    CHECK((pauli(j) * pauli(j) - pauli(0)).norm() < 1e-15);
}

TEST_CASE("volume indexing round-trips and measures distance") {
  const Volume vol({3, 4}, true);
  CHECK(vol.num_sites() == 12);
  for (int i = 0; i < vol.num_sites(); ++i)
    CHECK(vol.index(vol.coords(i)) == i);
  // sup metric with wrap-around on the ring
  const Volume ring({6}, true);
  CHECK(ring.distance(0, 5) == 1);
  CHECK(ring.distance(1, 4) == 3);
  const Volume open_chain({6}, false);
  CHECK(open_chain.distance(0, 5) == 5);
}

TEST_CASE("translation wraps on rings and leaves open boxes") {
  const Volume ring({4}, true);
  CHECK(ring.translate(3, {1}) == 0);
  const Volume box({4}, false);
  CHECK(box.translate(3, {1}) < 0);
  CHECK(box.translate(2, {1}) == 3);
}

TEST_CASE("embedding is a homomorphism that preserves norms") {
  std::mt19937_64 gen(23);
  const Space sp(Volume({3}, false), 2);
  const Mat a = random_matrix(2, gen);
  const Mat b = random_matrix(2, gen);
  // multiplicative on a fixed site
  CHECK((embed(Mat(a * b), {1}, sp) - embed(a, {1}, sp) * embed(b, {1}, sp))
            .norm() < 1e-13);
  // star preserving
  CHECK((embed(dagger(a), {1}, sp) - dagger(embed(a, {1}, sp))).norm() <
        1e-14);
  // isometric for the operator norm
  CHECK(op_norm(embed(a, {1}, sp)) == doctest::Approx(op_norm(a)).epsilon(1e-12));
  // disjoint supports commute
  const Mat ea = embed(a, {0}, sp);
  const Mat eb = embed(b, {2}, sp);
  CHECK(comm(ea, eb).norm() < 1e-14);
  // two-site embedding factorizes over singletons
  const Mat ab2 = kron(a, b);
  CHECK((embed(ab2, {0, 2}, sp) - ea * eb).norm() < 1e-13);
}

TEST_CASE("embedding with an empty support is a scalar") {
  const Space sp(Volume({2}, false), 2);
  Mat c(1, 1);
  c(0, 0) = cplx(0.5, -2.0);
  CHECK((embed(c, {}, sp) - c(0, 0) * Mat::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("weighted partial trace reduces embedded factors to expectations") {
  std::mt19937_64 gen(29);
  const Space sp(Volume({3}, false), 2);
  const Mat rho = random_density(2, gen);
  const Mat a = random_matrix(2, gen);
  // tracing the support of an embedded one-site operator yields tr(rho a) I
  const Mat red = partial_trace(embed(a, {1}, sp), {1}, {rho}, sp);
  const cplx mean = (rho * a).trace();
  CHECK((red - mean * Mat::Identity(4, 4)).norm() < 1e-13);
  // tracing an uninvolved site is harmless
  const Mat red2 = partial_trace(embed(a, {1}, sp), {0}, {rho}, sp);
  CHECK((red2 - embed(a, {0}, Space(Volume({2}, false), 2))).norm() < 1e-13);
}

TEST_CASE("conditional expectation is a unital idempotent contraction") {
  std::mt19937_64 gen(31);
  const Space sp(Volume({2}, false), 2);
  const Mat rho = random_density(2, gen);
  const Mat f = random_matrix(4, gen);
  const Mat ef = cond_expectation(f, 0, rho, sp);
  CHECK((cond_expectation(ef, 0, rho, sp) - ef).norm() < 1e-12);
  CHECK((cond_expectation(Mat(Mat::Identity(4, 4)), 0, rho, sp) -
         Mat::Identity(4, 4))
            .norm() < 1e-13);
  CHECK(op_norm(ef) <= op_norm(f) + 1e-12);
}

TEST_CASE("kron accumulation matches the dense formula") {
  std::mt19937_64 gen(37);
  const Mat a = random_matrix(2, gen);
  const Mat b = random_matrix(2, gen);
  Mat acc = Mat::Zero(4, 4);
  accumulate_kron(acc, a, b, cplx(2.0, 1.0));
  CHECK((acc - cplx(2.0, 1.0) * kron(a, b)).norm() < 1e-13);
  // zero blocks are skipped without touching the accumulator
  Mat acc2 = acc;
  accumulate_kron(acc2, Mat(Mat::Zero(2, 2)), b, 1.0);
  CHECK((acc2 - acc).norm() == 0.0);
}

TEST_CASE("site lists must be strictly increasing and in range") {
  const Space sp(Volume({3}, false), 2);
  std::mt19937_64 gen(41);
  const Mat a = random_matrix(4, gen);
  CHECK_THROWS_AS(embed(a, {1, 1}, sp), std::invalid_argument);
  CHECK_THROWS_AS(embed(a, {2, 1}, sp), std::invalid_argument);
  CHECK_THROWS_AS(embed(a, {1, 3}, sp), std::invalid_argument);
}

}  // TEST_SUITE
