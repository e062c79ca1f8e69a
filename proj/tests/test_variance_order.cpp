#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "varorder/error.hpp"
#include "varorder/sampling.hpp"
#include "varorder/variance_order.hpp"

using namespace varorder;
using namespace testing;

namespace {

// A <= B by brute force: sampled gap plus a few structured probes.
double probed_gap(const HermitianObservable& a, const HermitianObservable& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sampled_gap(a.matrix(), b.matrix(), 10000, rng);
}

void check_certificate(const HermitianObservable& a, const HermitianObservable& b,
                       const OrderVerdict& v) {
  REQUIRE(v.holds);
  REQUIRE(v.certificate);
  CHECK_FALSE(v.witness);
  const auto rebuilt = apply_function(eigendecompose(b), *v.certificate);
  CHECK((rebuilt.matrix() - a.matrix()).norm() <= 1e-7 * std::max(1.0, a.frobenius()));
  CHECK_FALSE(v.certificate->lipschitz_violation(1.0, v.tol));
}

void check_witness(const HermitianObservable& a, const HermitianObservable& b,
                   const OrderVerdict& v) {
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK_FALSE(v.certificate);
  const double gap = oracle_variance(a.matrix(), v.witness->vector()) -
                     oracle_variance(b.matrix(), v.witness->vector());
  CHECK(v.margin > kFailMarginTol);
  CHECK(gap == doctest::Approx(v.margin).epsilon(1e-9));
}

}  // namespace

TEST_CASE("decide_order: relabelled diagonal holds") {
  const auto a = diag({0.0, 1.0, 2.0});
  const auto b = diag({0.0, 1.0, 3.0});
  const auto v = decide_order(a, b);
  check_certificate(a, b, v);
  const auto& pts = v.certificate->points();
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].x == 0.0);
  CHECK(pts[0].value == 0.0);
  CHECK(pts[1].value == 1.0);
  CHECK(pts[2].x == 3.0);
  CHECK(pts[2].value == 2.0);
  CHECK(probed_gap(a, b, 1) <= 1e-12);
}

TEST_CASE("decide_order: steep gap fails with the superposition witness") {
  const auto a = diag({0.0, 2.0, 3.0});
  const auto b = diag({0.0, 1.0, 3.0});
  const auto v = decide_order(a, b);
  check_witness(a, b, v);
  CHECK(v.violation == Violation::kLipschitzGap);
  CHECK(v.margin == doctest::Approx(0.75));
  const ComplexVector& w = v.witness->vector();
  CHECK(std::abs(w(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(w(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(w(2)) < 1e-12);
}

TEST_CASE("decide_order: Pauli X against Pauli Z fails at e1") {
  const auto v = decide_order(pauli_x(), pauli_z());
  check_witness(pauli_x(), pauli_z(), v);
  CHECK(v.violation == Violation::kNotReducing);
  CHECK(v.margin == doctest::Approx(1.0));
  const ComplexVector& w = v.witness->vector();
  // lowest eigenvalue of Z is -1, eigenvector e2; both basis vectors tie, lowest index wins
  CHECK(std::abs(std::abs(w(0)) + std::abs(w(1)) - 1.0) < 1e-12);
  CHECK(variance(pauli_z(), *v.witness) == doctest::Approx(0.0));
}

TEST_CASE("decide_order: reflexive") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_hermitian(1 + static_cast<std::size_t>(trial) % 8, rng);
    check_certificate(a, a, decide_order(a, a));
  }
}

TEST_CASE("decide_order: non-scalar compression on a degenerate eigenspace") {
  const auto b = HermitianObservable::identity(2);
  const auto a = diag({0.0, 1.0});
  const auto v = decide_order(a, b);
  check_witness(a, b, v);
  CHECK(v.violation == Violation::kNotScalar);
  CHECK(v.margin == doctest::Approx(0.25));
}

TEST_CASE("decide_order rejects mismatched dimensions") {
  CHECK_THROWS_AS(decide_order(diag({0.0, 1.0}), diag({0.0, 1.0, 2.0})), DimensionMismatch);
}

TEST_CASE("witness search examples") {
  SUBCASE("A = 2B on diag(0,1) peaks at 3/4 on the equal superposition") {
    const auto b = diag({0.0, 1.0});
    const auto r = witness_search(b.scaled(2.0), b);
    CHECK(r.best_value == doctest::Approx(0.75).epsilon(1e-9));
    const ComplexVector& x = r.best_state.vector();
    CHECK(std::abs(x(0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-5));
  }
  SUBCASE("a holding pair leaves nothing to find") {
    const auto r = witness_search(diag({0.0, 1.0, 2.0}), diag({0.0, 1.0, 3.0}));
    CHECK(r.best_value <= 1e-6);
  }
  SUBCASE("the steep-gap pair reaches at least the known witness") {
    const auto r = witness_search(diag({0.0, 2.0, 3.0}), diag({0.0, 1.0, 3.0}));
    CHECK(r.best_value >= 0.75 - 1e-9);
  }
}

TEST_CASE("witness search is deterministic for a seed") {
  Rng rng(2);
  const auto a = random_hermitian(4, rng);
  const auto b = random_hermitian(4, rng);
  OracleConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 99;
  const auto r1 = witness_search(a, b, cfg);
  const auto r2 = witness_search(a, b, cfg);
  CHECK(r1.best_value == r2.best_value);
  CHECK(r1.best_restart == r2.best_restart);
  CHECK((r1.best_state.vector() - r2.best_state.vector()).norm() == 0.0);

  // restart r with more restarts sees the same start, so the optimum can only improve
  cfg.restarts = 12;
  CHECK(witness_search(a, b, cfg).best_value >= r1.best_value);
  cfg.restarts = 0;
  CHECK_THROWS_AS(witness_search(a, b, cfg), InputError);
}

TEST_CASE("extract_function examples") {
  const auto f = extract_function(diag({0.0, 1.0, 2.0}), diag({0.0, 1.0, 3.0}));
  CHECK(f.points()[2].value == 2.0);

  Rng rng(3);
  const auto a = random_hermitian(4, rng);
  const auto id = extract_function(a, a);
  for (const auto& p : id.points()) CHECK(p.value == doctest::Approx(p.x).epsilon(1e-9));

  const auto c = extract_function(HermitianObservable::identity(4).scaled(2.5), a);
  for (const auto& p : c.points()) CHECK(p.value == doctest::Approx(2.5));

  try {
    (void)extract_function(diag({0.0, 2.0, 3.0}), diag({0.0, 1.0, 3.0}));
    FAIL("expected OrderDoesNotHold");
  } catch (const OrderDoesNotHold& e) {
    CHECK(e.margin() == doctest::Approx(0.75));
    CHECK(e.witness().dim() == 3);
  }
}

TEST_CASE("class equality") {
  Rng rng(4);
  const auto a = random_hermitian(3, rng);
  CHECK(class_equal(a, a.shifted(3.0)));
  CHECK(class_equal(a, -a));
  CHECK(class_equal(a, (-a).shifted(-1.5)));
  CHECK_FALSE(class_equal(diag({0.0, 1.0}), diag({0.0, 2.0})));
}

TEST_CASE("canonical representative examples") {
  const auto c = canonical_representative(diag({1.0, 2.0, 4.0}));
  CHECK((c.matrix() - diag_matrix({0.0, 1.0, 3.0})).norm() < 1e-12);
  const auto z = canonical_representative(HermitianObservable::identity(3).scaled(7.0));
  CHECK(z.matrix().norm() < 1e-12);
  const auto s = canonical_representative(diag({0.0, 1.0}));
  CHECK((s.matrix() - diag_matrix({0.0, 1.0})).norm() < 1e-12);
  const auto neg = canonical_representative(diag({0.0, -1.0}).shifted(5.0));
  CHECK((neg.matrix() - diag_matrix({0.0, 1.0})).norm() < 1e-12);
  // reflected side wins
  const auto r = canonical_representative(diag({0.0, 2.0, 3.0}));
  CHECK((r.matrix() - diag_matrix({3.0, 1.0, 0.0})).norm() < 1e-12);
}

TEST_CASE("canonical representative is constant on the class") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_hermitian(2 + static_cast<std::size_t>(trial) % 6, rng);
    const auto base = canonical_representative(a);
    CHECK(class_equal(a, base));
    const auto again = canonical_representative(base);
    CHECK((again.matrix() - base.matrix()).norm() <= 1e-9);
    for (double sign : {1.0, -1.0}) {
      const auto member = a.scaled(sign).shifted(u(rng));
      CHECK((canonical_representative(member).matrix() - base.matrix()).norm() <= 1e-8);
    }
  }
}

TEST_CASE("check_state_order examples") {
  const auto holds = check_state_order(diag({0.0, 1.0, 2.0}), diag({0.0, 1.0, 3.0}), 1000, 1);
  CHECK(holds.holds);
  CHECK_FALSE(holds.worst_state);

  const auto fails = check_state_order(diag({0.0, 2.0, 3.0}), diag({0.0, 1.0, 3.0}), 1000, 1);
  CHECK_FALSE(fails.holds);
  REQUIRE(fails.worst_state);
  const double gap = oracle_variance(diag_matrix({0.0, 2.0, 3.0}), fails.worst_state->matrix()) -
                     oracle_variance(diag_matrix({0.0, 1.0, 3.0}), fails.worst_state->matrix());
  CHECK(gap == doctest::Approx(fails.worst_gap));
  CHECK(gap > 1e-9);

  Rng rng(6);
  const auto b = random_hermitian(4, rng);
  CHECK(check_state_order(HermitianObservable::identity(4).scaled(3.0), b, 200, 2).holds);
}

TEST_CASE("verdict soundness on random pairs") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 7;
    const auto b = random_hermitian(n, rng);
    HermitianObservable a = random_hermitian(n, rng);
    if (trial % 2 == 0) {
      const auto d = eigendecompose(b);
      a = apply_function(d, random_lipschitz_table(d.eigenvalues(), trial % 4 == 0 ? 1.0 : 1.6, rng));
    }
    const auto v = decide_order(a, b);
    if (v.holds) {
      check_certificate(a, b, v);
    } else {
      check_witness(a, b, v);
    }
  }
}

TEST_CASE("decision agrees with the gradient oracle") {
  Rng rng(8);
  OracleConfig cfg;
  cfg.restarts = 16;
  cfg.steps = 300;
  int holds = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 5;
    const auto b = random_hermitian(n, rng);
    HermitianObservable a = random_hermitian(n, rng);
    if (trial % 2 == 0) {
      const auto d = eigendecompose(b);
      a = apply_function(d, random_lipschitz_table(d.eigenvalues(), 1.0, rng));
    }
    cfg.seed = static_cast<std::uint64_t>(trial);
    const bool decided = decide_order(a, b).holds;
    const bool oracle = witness_search(a, b, cfg).best_value <= 1e-6;
    CHECK(decided == oracle);
    holds += decided ? 1 : 0;
  }
  CHECK(holds == 30);
}

TEST_CASE("pre-order and class laws") {
  Rng rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 4;
    const auto c = random_hermitian(n, rng);
    const auto dc = eigendecompose(c);
    const auto g = random_lipschitz_table(dc.eigenvalues(), 1.0, rng);
    const auto gc = apply_function(dc, g);
    const auto dg = eigendecompose(gc);
    const auto f = random_lipschitz_table(dg.eigenvalues(), 1.0, rng);
    const auto fgc = apply_function(dg, f);
    CHECK(decide_order(gc, c).holds);
    CHECK(decide_order(fgc, gc).holds);
    CHECK(decide_order(fgc, c).holds);

    const double shift = u(rng);
    for (double eps : {1.0, -1.0}) {
      const auto m = c.scaled(eps).shifted(shift);
      CHECK(decide_order(c, m).holds);
      CHECK(decide_order(m, c).holds);
    }
  }
}

TEST_CASE("holding verdicts survive random mixed states") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 5;
    const auto b = random_hermitian(n, rng);
    const auto d = eigendecompose(b);
    const auto a = apply_function(d, random_lipschitz_table(d.eigenvalues(), 1.0, rng));
    REQUIRE(decide_order(a, b).holds);
    CHECK(check_state_order(a, b, 300, static_cast<std::uint64_t>(trial)).holds);
  }
}
