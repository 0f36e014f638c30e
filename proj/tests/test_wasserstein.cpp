#include <doctest.h>

#include <cmath>
#include <random>

#include "qlat/catalog.hpp"
#include "qlat/wasserstein.hpp"

using namespace qlat;

namespace {

Mat random_state(int d, std::mt19937_64& gen) { return random_density(d, gen); }

}  // namespace

TEST_SUITE("wasserstein") {

TEST_CASE("forgetting a site is a unital projection") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(3);
  const Mat f = random_matrix(4, gen);
  const Mat tf = forget_site(f, 0, sp);
  CHECK((forget_site(tf, 0, sp) - tf).norm() < 1e-12);
  CHECK((forget_site(Mat(Mat::Identity(4, 4)), 0, sp) - Mat::Identity(4, 4))
            .norm() < 1e-13);
  // the partial trace over the forgotten site is preserved
  const Mat pt_f = partial_trace(f, {0}, {}, sp);
  const Mat pt_tf = partial_trace(tf, {0}, {}, sp);
  CHECK((pt_f - pt_tf).norm() < 1e-12);
}

TEST_CASE("variation bracket is ordered and tight on one site") {
  const Space sp(Volume({1}, false), 2);
  std::mt19937_64 gen(5);
  for (int rep = 0; rep < 5; ++rep) {
    const Mat f = hermitize(random_matrix(2, gen));
    const LipschitzBracket lb = lipschitz_seminorm(f, sp);
    CHECK(lb.site_lower(0) <= lb.site_upper(0) + 1e-12);
    CHECK(lb.site_upper(0) <= 2.0 * lb.site_lower(0) + 1e-10);
    CHECK(lb.lower <= lb.upper + 1e-12);
  }
}

TEST_CASE("descent value never exceeds random feasible probes") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(7);
  const Mat f = hermitize(random_matrix(4, gen));
  const LipschitzBracket lb = lipschitz_seminorm(f, sp);
  for (int x = 0; x < 2; ++x) {
    double best_probe = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 1000; ++p) {
      // random element that ignores site x
      const Mat g0 = hermitize(random_matrix(2, gen));
      const Mat g = embed(g0, {1 - x}, sp);
      best_probe = std::min(best_probe, op_norm(Mat(f - g)));
    }
    // the refined upper bound is half of twice the found infimum
    CHECK(lb.site_upper(x) <= 2.0 * best_probe + 1e-9);
  }
}

TEST_CASE("transport bracket collapses to the trace distance on one site") {
  for (int n : {2, 3}) {
    const Space sp(Volume({1}, false), n);
    std::mt19937_64 gen(11 + n);
    for (int rep = 0; rep < 6; ++rep) {
      const Mat mu = random_state(n, gen);
      const Mat nu = random_state(n, gen);
      const WassersteinBracket wb = w1_bracket(mu, nu, sp);
      const double target = 0.5 * trace_norm(Mat(mu - nu));
      CHECK(std::abs(wb.upper - target) < 1e-8);
      CHECK(std::abs(wb.lower - target) < 1e-8);
    }
  }
}

TEST_CASE("bracket is ordered and symmetric on two sites") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 5; ++rep) {
    const Mat mu = random_state(4, gen);
    const Mat nu = random_state(4, gen);
    const WassersteinBracket ab = w1_bracket(mu, nu, sp);
    const WassersteinBracket ba = w1_bracket(nu, mu, sp);
    CHECK(ab.lower <= ab.upper + 1e-10);
    CHECK(std::abs(ab.upper - ba.upper) < 1e-10);
    CHECK(std::abs(ab.lower - ba.lower) < 1e-10);
  }
}

TEST_CASE("upper witness is feasible: pieces are site-local and telescope") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(17);
  const Mat mu = random_state(4, gen);
  const Mat nu = random_state(4, gen);
  const WassersteinBracket wb = w1_bracket(mu, nu, sp);
  REQUIRE(wb.witness_decomposition.size() == 2);
  Mat sum = Mat::Zero(4, 4);
  double half_tr = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const Mat& piece = wb.witness_decomposition[j];
    sum += piece;
    half_tr += 0.5 * trace_norm(piece);
    // each piece vanishes after tracing out its own site
    const Mat traced = partial_trace(piece, {wb.site_order[j]}, {}, sp);
    CHECK(traced.norm() < 1e-10);
  }
  CHECK((sum - (mu - nu)).norm() < 1e-10);
  CHECK(half_tr == doctest::Approx(wb.upper).epsilon(1e-12));
}

TEST_CASE("triangle inequality holds across the bracket") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(19);
  for (int rep = 0; rep < 4; ++rep) {
    const Mat a = random_state(4, gen);
    const Mat b = random_state(4, gen);
    const Mat c = random_state(4, gen);
    const double ab = w1_bracket(a, b, sp).lower;
    const double ac = w1_bracket(a, c, sp).upper;
    const double cb = w1_bracket(c, b, sp).upper;
    CHECK(ab <= ac + cb + 1e-8);
  }
}

TEST_CASE("identical states have zero distance") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(23);
  const Mat mu = random_state(4, gen);
  const WassersteinBracket wb = w1_bracket(mu, mu, sp);
  CHECK(wb.upper < 1e-12);
  CHECK(wb.lower < 1e-12);
}

TEST_CASE("dual witness certifies its lower bound") {
  const Space sp(Volume({2}, false), 2);
  std::mt19937_64 gen(29);
  const Mat mu = random_state(4, gen);
  const Mat nu = random_state(4, gen);
  const WassersteinBracket wb = w1_bracket(mu, nu, sp);
  if (wb.lower > 1e-12) {
    REQUIRE(wb.witness_observable.size() > 0);
    // the recorded pairing reproduces the bound against the witness
    const double pair =
        std::abs(((mu - nu) * wb.witness_observable).trace().real());
    CHECK(pair == doctest::Approx(std::abs(wb.witness_pairing)).epsilon(1e-8));
    CHECK(std::abs(wb.witness_pairing) ==
          doctest::Approx(wb.lower).epsilon(1e-12));
  }
}

TEST_CASE("states further apart than their marginals suggest") {
  // maximally correlated vs product: transport must move every site
  const Space sp(Volume({2}, false), 2);
  Mat bell = Mat::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const Mat prod = 0.25 * Mat::Identity(4, 4);
  const WassersteinBracket wb = w1_bracket(bell, prod, sp);
  CHECK(wb.lower > 0.1);
  CHECK(wb.upper <= 2.0 + 1e-9);  // never more than half a trace norm per site
}

TEST_CASE("transport decay follows a passing certificate") {
  const FiniteVolumeGenerator g =
      assemble(model_xyz(0.002, 0.002, 0.002), Volume({3}, true));
  const CertificateReport cert = certify_instance(g);
  REQUIRE(cert.pass);
  Mat mu = Mat::Zero(8, 8);
  mu(0, 0) = 1.0;
  const CheckResult r = check_w_decay(g, cert, mu, 0.0, 2.5, 4, 31, 1e-9);
  CHECK(r.pass);
}

}  // TEST_SUITE
