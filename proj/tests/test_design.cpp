#include <cmath>
#include <vector>

#include "doctest.h"
#include "qcrb/design.hpp"
#include "test_helpers.hpp"

using namespace qcrb;

namespace {

// Random strictly admissible target at θ⁰: PSD with tr(H⁻¹G) = u ∈ (0, 1].
InfoMatrix random_admissible_target(const BlochVector& theta0, RngStream& rng,
                                    double budget) {
  RealSymMatrix a = test::random_pd_sym(3, rng);
  RealSymMatrix h_inv = mixed_qubit_helstrom_power(theta0, -1.0);
  double tr = trace_product(h_inv, a);
  return InfoMatrix(a * (budget / tr), InfoKind::target);
}

BlochVector random_interior_point(RngStream& rng, double max_radius) {
  double z = rng.uniform(-1.0, 1.0);
  double ph = rng.uniform(0.0, 6.283185307179586);
  double r = max_radius * std::cbrt(rng.uniform());
  double s = std::sqrt(1.0 - z * z);
  return BlochVector(r * s * std::cos(ph), r * s * std::sin(ph), r * z);
}

}  // namespace

TEST_CASE("cost equal to information: the optimum is a multiple of the inverse") {
  RngStream rng(41);
  for (std::size_t p : {2u, 3u}) {
    RealSymMatrix h = test::random_pd_sym(p, rng, 0.1);
    InfoMatrix hm(h, InfoKind::helstrom);
    OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(h, InfoKind::cost), hm, 2);
    RealSymMatrix expected = psd_function(h, PsdMap::inv) * static_cast<double>(p);
    CHECK((opt.w_opt.mat - expected).frobenius_norm() <= 1e-9);
    CHECK(opt.min_cost == doctest::Approx(static_cast<double>(p * p)).epsilon(1e-9));
  }
}

TEST_CASE("the optimal scaled MQE spends the whole information budget") {
  RngStream rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t p = 2 + trial % 2;
    RealSymMatrix c = test::random_pd_sym(p, rng, 0.05);
    RealSymMatrix h = test::random_pd_sym(p, rng, 0.05);
    OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost),
                                        InfoMatrix(h, InfoKind::helstrom), 2);
    double budget = trace_product(psd_function(h, PsdMap::inv),
                                  psd_function(opt.w_opt.mat, PsdMap::inv));
    CHECK(budget == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(trace_product(c, opt.w_opt.mat) == doctest::Approx(opt.min_cost).epsilon(1e-9));
  }
}

TEST_CASE("no random feasible MQE matrix beats the optimum") {
  RngStream rng(43);
  for (int pair = 0; pair < 5; ++pair) {
    RealSymMatrix c = test::random_pd_sym(3, rng, 0.05);
    RealSymMatrix h = test::random_pd_sym(3, rng, 0.05);
    RealSymMatrix h_inv = psd_function(h, PsdMap::inv);
    OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost),
                                        InfoMatrix(h, InfoKind::helstrom), 2);
    for (int trial = 0; trial < 200; ++trial) {
      RealSymMatrix a = test::random_pd_sym(3, rng, 0.02);
      a *= 1.0 / trace_product(h_inv, a);  // now tr(H⁻¹ W⁻¹) = 1 for W = a⁻¹
      double cost = trace_product(c, psd_function(a, PsdMap::inv));
      CHECK(cost >= opt.min_cost - 1e-6);
    }
  }
}

TEST_CASE("ill-conditioned information still satisfies the optimality certificate") {
  // Forces the cost-side evaluation path (the information matrix has the
  // smaller minimum eigenvalue by far).
  RealSymMatrix h(3);
  h.set_sym(0, 0, 1e-4);
  h.set_sym(1, 1, 1.0);
  h.set_sym(2, 2, 3.0);
  h.set_sym(0, 1, 1e-3);
  RealSymMatrix c = RealSymMatrix::identity(3);
  OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost),
                                      InfoMatrix(h, InfoKind::helstrom), 2);
  double budget = trace_product(psd_function(h, PsdMap::inv),
                                psd_function(opt.w_opt.mat, PsdMap::inv));
  CHECK(budget == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("singular inputs are rejected") {
  RealSymMatrix h = RealSymMatrix::identity(3);
  RealSymMatrix c(3);
  c.set_sym(0, 0, 1.0);
  c.set_sym(1, 1, 1.0);  // third eigenvalue exactly zero
  CHECK_THROWS_AS(optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost),
                                     InfoMatrix(h, InfoKind::helstrom), 2),
                  Error);
}

TEST_CASE("target validation measures the information budget") {
  RngStream rng(44);
  RealSymMatrix h = test::random_pd_sym(3, rng, 0.1);
  InfoMatrix hm(h, InfoKind::helstrom);

  TargetCheck third = validate_target(InfoMatrix(h * (1.0 / 3.0), InfoKind::target), hm);
  CHECK(third.admissible);
  CHECK(third.trace == doctest::Approx(1.0).epsilon(1e-12));

  TargetCheck doubled = validate_target(InfoMatrix(h * 2.0, InfoKind::target), hm);
  CHECK(!doubled.admissible);
  CHECK(doubled.trace == doctest::Approx(6.0).epsilon(1e-12));

  // The inverse of the cost optimum is itself an admissible target.
  RealSymMatrix c = test::random_pd_sym(3, rng, 0.1);
  OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost), hm, 2);
  TargetCheck from_opt =
      validate_target(InfoMatrix(psd_function(opt.w_opt.mat, PsdMap::inv), InfoKind::target), hm);
  CHECK(from_opt.admissible);
  CHECK(from_opt.trace == doctest::Approx(1.0).epsilon(1e-9));

  // Indefinite matrices are never admissible regardless of trace.
  RealSymMatrix neg(3);
  neg.set_sym(0, 0, 0.5);
  neg.set_sym(1, 1, -0.1);
  CHECK(!validate_target(InfoMatrix(neg, InfoKind::target), hm).admissible);
}

TEST_CASE("closed-form information powers match the generic eigendecomposition") {
  RngStream rng(45);
  ParametricModel model = full_mixed_qubit();
  for (int trial = 0; trial < 10; ++trial) {
    BlochVector th = random_interior_point(rng, 0.95);
    RealSymMatrix h = helstrom_matrix(model, th.to_vector()).mat;
    CHECK((mixed_qubit_helstrom_power(th, 1.0) - h).frobenius_norm() <= 1e-9);
    CHECK((mixed_qubit_helstrom_power(th, -1.0) - psd_function(h, PsdMap::inv))
              .frobenius_norm() <= 1e-9);
    CHECK((mixed_qubit_helstrom_power(th, 0.5) - psd_function(h, PsdMap::sqrt))
              .frobenius_norm() <= 1e-9);
    CHECK((mixed_qubit_helstrom_power(th, -0.5) - psd_function(h, PsdMap::inv_sqrt))
              .frobenius_norm() <= 1e-9);
  }
  CHECK_THROWS_AS(mixed_qubit_helstrom_power(BlochVector(0, 0, 1), 0.5), Error);
}

TEST_CASE("isotropic design at the center measures three orthogonal axes equally") {
  InfoMatrix g(RealSymMatrix::identity(3) * (1.0 / 3.0), InfoKind::target);
  MixedQubitDesign d = design_mixed_qubit(g, BlochVector());
  for (double gamma : d.gammas) CHECK(gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  for (const BlochVector& m : d.directions) CHECK(m.norm() == doctest::Approx(1.0));
  InfoMatrix realized =
      fisher_information(realize_povm(d), full_mixed_qubit(), {0.0, 0.0, 0.0}, 1);
  CHECK((realized.mat - g.mat).frobenius_norm() <= 1e-9);
}

TEST_CASE("design realizes a third of the information matrix on the z axis") {
  BlochVector th(0.0, 0.0, 0.5);
  RealSymMatrix h = mixed_qubit_helstrom_power(th, 1.0);
  InfoMatrix g(h * (1.0 / 3.0), InfoKind::target);
  MixedQubitDesign d = design_mixed_qubit(g, th);
  InfoMatrix realized = fisher_information(realize_povm(d), full_mixed_qubit(), th.to_vector(), 1);
  CHECK((realized.mat - g.mat).frobenius_norm() <= 1e-9);
}

TEST_CASE("rank-deficient targets drop a measurement direction") {
  RealSymMatrix g(3);
  g.set_sym(0, 0, 0.5);
  g.set_sym(1, 1, 0.5);
  MixedQubitDesign d = design_mixed_qubit(InfoMatrix(g, InfoKind::target), BlochVector());
  int zero_count = 0;
  for (double gamma : d.gammas) zero_count += gamma <= 1e-14;
  CHECK(zero_count == 1);
  Povm povm = realize_povm(d);
  CHECK(povm.elements.size() == 4);  // two directions, no remainder
  CHECK(validate_povm(povm).pass);
  InfoMatrix realized = fisher_information(povm, full_mixed_qubit(), {0.0, 0.0, 0.0}, 1);
  CHECK((realized.mat - g).frobenius_norm() <= 1e-9);
}

TEST_CASE("designs reject boundary points and oversized targets") {
  InfoMatrix g(RealSymMatrix::identity(3) * 0.2, InfoKind::target);
  CHECK_THROWS_AS(design_mixed_qubit(g, BlochVector(0.0, 0.0, 1.0)), Error);

  BlochVector th(0.1, 0.0, 0.2);
  InfoMatrix too_big(mixed_qubit_helstrom_power(th, 1.0) * 2.0, InfoKind::target);
  try {
    design_mixed_qubit(too_big, th);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == errc::inadmissible_target);
  }
}

TEST_CASE("design fidelity: realized information equals the target") {
  RngStream rng(46);
  for (int trial = 0; trial < 100; ++trial) {
    BlochVector th = random_interior_point(rng, 0.9);
    InfoMatrix g = random_admissible_target(th, rng, rng.uniform(0.2, 1.0));
    MixedQubitDesign d = design_mixed_qubit(g, th);
    Povm povm = realize_povm(d);
    CHECK(validate_povm(povm).pass);
    InfoMatrix realized = fisher_information(povm, full_mixed_qubit(), th.to_vector(), 1);
    CHECK((realized.mat - g.mat).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("each design direction alone saturates the single-axis budget") {
  RngStream rng(47);
  ParametricModel model = full_mixed_qubit();
  BlochVector th = random_interior_point(rng, 0.8);
  InfoMatrix g = random_admissible_target(th, rng, 0.9);
  MixedQubitDesign d = design_mixed_qubit(g, th);
  InfoMatrix h = helstrom_matrix(model, th.to_vector());
  for (std::size_t i = 0; i < 3; ++i) {
    Povm axis = make_povm(2, 1,
                          {spin_projector(d.directions[i].r, +1),
                           spin_projector(d.directions[i].r, -1)});
    InfoMatrix info = fisher_information(axis, model, th.to_vector(), 1);
    CHECK(gill_massar_trace(h, info) == doctest::Approx(1.0).epsilon(1e-10));
    // The single-axis information is the rank-one square of gᵢ = ‖gᵢ‖·mᵢ.
    std::vector<double> gi{d.gnorms[i] * d.directions[i].r[0],
                           d.gnorms[i] * d.directions[i].r[1],
                           d.gnorms[i] * d.directions[i].r[2]};
    CHECK((info.mat - outer(gi)).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("degenerate targets are realized exactly despite eigenbasis freedom") {
  RngStream rng(48);
  for (int trial = 0; trial < 10; ++trial) {
    BlochVector th = random_interior_point(rng, 0.85);
    double u = rng.uniform(0.3, 1.0);
    InfoMatrix g(mixed_qubit_helstrom_power(th, 1.0) * (u / 3.0), InfoKind::target);
    MixedQubitDesign d = design_mixed_qubit(g, th);
    InfoMatrix realized =
        fisher_information(realize_povm(d), full_mixed_qubit(), th.to_vector(), 1);
    CHECK((realized.mat - g.mat).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("pure design: single-direction target measures one observable always") {
  RngStream rng(49);
  std::vector<cplx> psi0 = test::random_state(2, rng);
  RealSymMatrix g(2);
  g.set_sym(0, 0, 1.0);
  PureQubitDesign d = design_pure_qubit(InfoMatrix(g, InfoKind::target), psi0);
  CHECK(d.probs[0] == doctest::Approx(1.0));
  CHECK(d.probs[1] == doctest::Approx(0.0));
  Povm povm = realize_povm(d);
  CHECK(povm.elements.size() == 2);
  CHECK(validate_povm(povm).pass);
  ParametricModel model = pure_qubit_tangent(psi0, orthogonal_spinor(psi0));
  InfoMatrix realized = fisher_information(povm, model, {0.0, 0.0}, 1);
  CHECK((realized.mat - g).frobenius_norm() <= 1e-9);
}

TEST_CASE("pure design: realized information equals random admissible targets") {
  RngStream rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> psi0 = test::random_state(2, rng);
    RealSymMatrix a = test::random_pd_sym(2, rng);
    a *= rng.uniform(0.2, 1.0) / a.trace();
    PureQubitDesign d = design_pure_qubit(InfoMatrix(a, InfoKind::target), psi0);
    CHECK(d.probs[0] >= d.probs[1]);
    Povm povm = realize_povm(d);
    CHECK(validate_povm(povm).pass);
    ParametricModel model = pure_qubit_tangent(psi0, orthogonal_spinor(psi0));
    InfoMatrix realized = fisher_information(povm, model, {0.0, 0.0}, 1);
    CHECK((realized.mat - a).frobenius_norm() <= 1e-9);
  }
}

TEST_CASE("pure design observables have zero diagonal in the reference frame") {
  RngStream rng(51);
  std::vector<cplx> psi0 = test::random_state(2, rng);
  RealSymMatrix g(2);
  g.set_sym(0, 0, 0.4);
  g.set_sym(1, 1, 0.3);
  g.set_sym(0, 1, 0.1);
  PureQubitDesign d = design_pure_qubit(InfoMatrix(g, InfoKind::target), psi0);
  for (const HermitianMatrix* a : {&d.a1, &d.a2}) {
    std::vector<cplx> w = qcrb::apply(a->matrix(), psi0);
    cplx diag0 = std::conj(psi0[0]) * w[0] + std::conj(psi0[1]) * w[1];
    CHECK(std::abs(diag0) <= 1e-12);
    // ±1-valued observables square to the identity.
    CHECK((a->matrix() * a->matrix() - HermitianMatrix::identity(2).matrix())
              .frobenius_norm() <= 1e-12);
  }
  RealSymMatrix too_big = RealSymMatrix::identity(2);
  CHECK_THROWS_AS(design_pure_qubit(InfoMatrix(too_big, InfoKind::target), psi0), Error);
}

TEST_CASE("collective two-copy POVM exceeds the separable information budget") {
  Povm povm = counterexample_povm();
  CHECK(povm.dim == 4);
  CHECK(povm.copies == 2);
  CHECK(povm.elements.size() == 7);
  CHECK(validate_povm(povm).pass);

  ParametricModel model = full_mixed_qubit();
  std::vector<double> zero{0.0, 0.0, 0.0};
  InfoMatrix info = fisher_information(povm, model, zero, 2);
  CHECK((info.mat - RealSymMatrix::identity(3)).frobenius_norm() <= 1e-10);
  double tr = gill_massar_trace(helstrom_matrix(model, zero), info);
  CHECK(tr == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(tr > 2.0);
}

TEST_CASE("designs round-trip through JSON") {
  RngStream rng(52);
  BlochVector th = random_interior_point(rng, 0.7);
  InfoMatrix g = random_admissible_target(th, rng, 0.8);
  MixedQubitDesign d = design_mixed_qubit(g, th);
  MixedQubitDesign back = design_from_json(design_to_json(d));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.theta0.r[i] == doctest::Approx(d.theta0.r[i]).epsilon(1e-14));
    CHECK(back.gammas[i] == doctest::Approx(d.gammas[i]).epsilon(1e-14));
    CHECK(back.gnorms[i] == doctest::Approx(d.gnorms[i]).epsilon(1e-12));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(back.directions[i].r[k] == doctest::Approx(d.directions[i].r[k]).scale(1.0));
      CHECK(back.eigvecs[i][k] == doctest::Approx(d.eigvecs[i][k]).scale(1.0));
    }
  }
}
