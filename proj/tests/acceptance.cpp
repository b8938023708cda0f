// Acceptance gate: twelve end-to-end checks of the library against its
// quantitative contract, one report line each. Exit status is the number of
// failed checks. Every check runs from a pinned seed so the gate is
// deterministic; tolerances are stated inline next to each check.

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qcrb/design.hpp"
#include "qcrb/errors.hpp"
#include "qcrb/estimation.hpp"
#include "qcrb/information.hpp"
#include "qcrb/matkit.hpp"
#include "qcrb/quantum.hpp"
#include "qcrb/rng.hpp"
#include "test_helpers.hpp"

namespace {

using qcrb::BlochVector;
using qcrb::HermitianMatrix;
using qcrb::InfoKind;
using qcrb::InfoMatrix;
using qcrb::MixedQubitDesign;
using qcrb::ParametricModel;
using qcrb::Povm;
using qcrb::ProtocolConfig;
using qcrb::RealSymMatrix;
using qcrb::RngStream;
using qcrb::test::random_density;
using qcrb::test::random_pd_sym;
using qcrb::test::random_rank1_exhaustive_povm;

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", index, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return std::string(buf);
}

BlochVector random_interior(RngStream& rng, double radius) {
  double z = rng.uniform(-1.0, 1.0);
  double phi = rng.uniform(0.0, 2.0 * M_PI);
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  double r = radius * std::cbrt(rng.uniform());
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * z};
}

// Random information target on (or inside) the qubit admissibility surface
// tr √(H^{−1/2} G H^{−1/2}) = u ≤ 1, built from a random positive direction.
InfoMatrix random_admissible_target(const BlochVector& theta, double u, RngStream& rng) {
  RealSymMatrix a = random_pd_sym(3, rng, 1e-2);
  double t = qcrb::psd_function(a, qcrb::PsdMap::sqrt).trace();
  RealSymMatrix f = a * ((u / t) * (u / t));
  RealSymMatrix h_half = qcrb::mixed_qubit_helstrom_power(theta, 0.5);
  return InfoMatrix(qcrb::sandwich(h_half, f), InfoKind::target);
}

InfoMatrix scaled_helstrom_target(const BlochVector& theta, double share) {
  return InfoMatrix(qcrb::mixed_qubit_helstrom_power(theta, 1.0) * share, InfoKind::target);
}

// Random admissible target with balanced weights: a random frame with
// eigenvalues in [0.15, 0.5] scaled to tr F = u, so every measurement
// direction keeps an O(1) share of the copies.
InfoMatrix random_balanced_target(const BlochVector& theta, double u, RngStream& rng) {
  qcrb::EigSym frame = qcrb::eig_sym(random_pd_sym(3, rng, 1e-2));
  std::array<double, 3> lams{rng.uniform(0.15, 0.5), rng.uniform(0.15, 0.5),
                             rng.uniform(0.15, 0.5)};
  double total = lams[0] + lams[1] + lams[2];
  RealSymMatrix f(3);
  for (std::size_t i = 0; i < 3; ++i)
    f += qcrb::outer({frame.vectors[i][0], frame.vectors[i][1], frame.vectors[i][2]}) *
         (u * lams[i] / total);
  RealSymMatrix h_half = qcrb::mixed_qubit_helstrom_power(theta, 0.5);
  return InfoMatrix(qcrb::sandwich(h_half, f), InfoKind::target);
}

// ---------------------------------------------------------------------------

// 1. Exhaustive single-copy measurements on full mixed models attain the
//    information-trace budget d−1 exactly.
void check_mixed_trace_equality() {
  RngStream rng(101);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t d : {2, 3, 4}) {
    for (int point = 0; point < 20; ++point) {
      ParametricModel model = qcrb::full_mixed_qudit(random_density(d, rng));
      const std::vector<double> origin(model.param_dim, 0.0);
      InfoMatrix helstrom = qcrb::helstrom_matrix(model, origin);
      for (int k = 0; k < 20; ++k) {
        Povm povm = random_rank1_exhaustive_povm(d, 2 * d, rng);
        InfoMatrix fisher = qcrb::fisher_information(povm, model, origin, 1);
        double value = qcrb::gill_massar_trace(helstrom, fisher);
        worst = std::max(worst, std::abs(value - static_cast<double>(d - 1)));
        ++cases;
      }
    }
  }
  report(1, "single-copy trace equality across d = 2,3,4", worst <= 1e-8,
         fmt("max |tr - (d-1)| = %.2e over %.0f cases", worst, static_cast<double>(cases)));
}

// 2. Exhaustive joint measurements on N pure-state copies attain N(d−1).
void check_pure_joint_equality() {
  RngStream rng(202);
  double worst = 0.0;
  const std::array<std::array<std::size_t, 2>, 3> setups{{{2, 2}, {2, 3}, {3, 2}}};
  for (auto [d, n] : setups) {
    ParametricModel model = qcrb::pure_qudit_tangent(d);
    const std::vector<double> origin(model.param_dim, 0.0);
    InfoMatrix helstrom = qcrb::helstrom_matrix(model, origin);
    std::size_t joint = 1;
    for (std::size_t c = 0; c < n; ++c) joint *= d;
    for (int k = 0; k < 10; ++k) {
      Povm povm = random_rank1_exhaustive_povm(joint, joint + 3, rng, n);
      InfoMatrix fisher = qcrb::fisher_information(povm, model, origin, n);
      double value = qcrb::gill_massar_trace(helstrom, fisher);
      worst = std::max(worst, std::abs(value - static_cast<double>(n * (d - 1))));
    }
  }
  report(2, "joint pure-copy trace equality at N(d-1)", worst <= 1e-8,
         fmt("max |tr - N(d-1)| = %.2e over 30 joint cases", worst));
}

// 3. The collective two-copy qubit measurement reproduces unit Fisher
//    information per parameter and beats the separable budget of 2.
void check_collective_counterexample() {
  ParametricModel model = qcrb::full_mixed_qubit();
  const std::vector<double> origin(3, 0.0);
  Povm povm = qcrb::counterexample_povm();
  InfoMatrix fisher = qcrb::fisher_information(povm, model, origin, 2);
  double dev = (fisher.mat - RealSymMatrix::identity(3)).frobenius_norm();
  double value = qcrb::gill_massar_trace(qcrb::helstrom_matrix(model, origin), fisher);
  bool pass = dev <= 1e-10 && std::abs(value - 3.0) <= 1e-10 && value > 2.0;
  report(3, "collective two-copy measurement beats the separable budget", pass,
         fmt("|I - id| = %.2e, trace = 3 %+.1e > 2", dev, value - 3.0));
}

// 4. Products of exhaustive single-copy measurements on two mixed-qubit
//    copies sit exactly on the separable budget of 2.
void check_product_bound() {
  RngStream rng(404);
  ParametricModel model = qcrb::full_mixed_qubit();
  double worst_over = -1e300;
  double worst_eq = 0.0;
  for (int k = 0; k < 100; ++k) {
    Povm a = random_rank1_exhaustive_povm(2, 3 + k % 3, rng);
    Povm b = random_rank1_exhaustive_povm(2, 3 + (k + 1) % 3, rng);
    std::vector<HermitianMatrix> elements;
    for (const auto& ea : a.elements)
      for (const auto& eb : b.elements) elements.push_back(qcrb::tensor(ea, eb));
    Povm product = qcrb::make_povm(4, 2, std::move(elements));

    BlochVector theta = random_interior(rng, 0.85);
    std::vector<double> tv{theta.r[0], theta.r[1], theta.r[2]};
    InfoMatrix fisher = qcrb::fisher_information(product, model, tv, 2);
    double value = qcrb::gill_massar_trace(qcrb::helstrom_matrix(model, tv), fisher);
    worst_over = std::max(worst_over, value - 2.0);
    worst_eq = std::max(worst_eq, std::abs(value - 2.0));
  }
  bool pass = worst_over <= 1e-9 && worst_eq <= 1e-8;
  report(4, "product measurements respect the two-copy budget", pass,
         fmt("max tr - 2 = %+.2e, max |tr - 2| = %.2e over 100 products", worst_over, worst_eq));
}

// 5. The matrix bound I ≤ NH holds for arbitrary single-copy measurements.
void check_matrix_bound() {
  RngStream rng(505);
  double worst = 1e300;
  for (int k = 0; k < 500; ++k) {
    std::size_t d = 2 + k % 3;
    ParametricModel model = qcrb::full_mixed_qudit(random_density(d, rng));
    const std::vector<double> origin(model.param_dim, 0.0);
    Povm povm = random_rank1_exhaustive_povm(d, d + 1 + k % 3, rng);
    if (k % 3 == 0 && povm.elements.size() > 2) {
      // Fold two outcomes together so non-rank-1 elements are exercised too.
      std::vector<HermitianMatrix> merged(povm.elements.begin() + 1, povm.elements.end());
      merged[0] += povm.elements[0];
      povm = qcrb::make_povm(d, 1, std::move(merged));
    }
    InfoMatrix fisher = qcrb::fisher_information(povm, model, origin, 1);
    InfoMatrix helstrom = qcrb::helstrom_matrix(model, origin);
    qcrb::BoundCheck bc = qcrb::helstrom_bound_check(fisher, helstrom, 1);
    worst = std::min(worst, bc.min_eigenvalue);
  }
  report(5, "matrix information bound I <= NH", worst >= -1e-9,
         fmt("min eig(NH - I) = %+.2e over 500 cases", worst));
}

// 6. Measurement designs realize their information target exactly.
void check_design_fidelity() {
  RngStream rng(606);
  ParametricModel model = qcrb::full_mixed_qubit();
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    BlochVector theta = random_interior(rng, 0.9);
    InfoMatrix target = random_admissible_target(theta, rng.uniform(0.3, 0.98), rng);
    MixedQubitDesign design = qcrb::design_mixed_qubit(target, theta);
    Povm povm = qcrb::realize_povm(design);
    std::vector<double> tv{theta.r[0], theta.r[1], theta.r[2]};
    InfoMatrix realized = qcrb::fisher_information(povm, model, tv, 1);
    worst = std::max(worst, (realized.mat - target.mat).frobenius_norm());
  }
  report(6, "designs hit their information target", worst <= 1e-9,
         fmt("max ||I - G|| = %.2e over 100 designs", worst));
}

// 7. The stage-two error matrix matches its closed-form conditional value
//    entrywise within Monte Carlo resolution — no lower-order correction.
void check_conditional_mqe() {
  RngStream rng(707);
  const std::uint64_t n2 = 10000;
  const std::uint64_t trials = 10000;
  double worst_sigma = 0.0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    BlochVector truth = random_interior(rng, 0.8);
    BlochVector tilde{truth.r[0] + 0.05 * rng.normal(), truth.r[1] + 0.05 * rng.normal(),
                      truth.r[2] + 0.05 * rng.normal()};
    if (tilde.norm() > 0.9) tilde = tilde.scaled(0.9 / tilde.norm());
    InfoMatrix target = random_balanced_target(tilde, rng.uniform(0.5, 0.9), rng);
    MixedQubitDesign design = qcrb::design_mixed_qubit(target, tilde);
    RealSymMatrix predicted = qcrb::conditional_mqe(design, truth, n2).mat;

    std::array<std::uint64_t, 3> copies{};
    std::array<double, 3> p_plus{};
    for (std::size_t i = 0; i < 3; ++i) {
      copies[i] = static_cast<std::uint64_t>(design.gammas[i] * static_cast<double>(n2));
      p_plus[i] = 0.5 * (1.0 + truth.dot(design.directions[i]));
    }

    std::mt19937_64 gen(9100 + static_cast<std::uint64_t>(cfg));
    std::array<double, 6> sum{}, sumsq{};
    static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> entries{
        {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::array<double, 3> freq{};
      for (std::size_t i = 0; i < 3; ++i) {
        std::binomial_distribution<std::uint64_t> binom(copies[i], p_plus[i]);
        std::uint64_t plus = binom(gen);
        freq[i] = (2.0 * static_cast<double>(plus) - static_cast<double>(copies[i])) /
                  static_cast<double>(copies[i]);
      }
      BlochVector hat = qcrb::stage2_estimate(design, freq);
      std::array<double, 3> e{hat.r[0] - truth.r[0], hat.r[1] - truth.r[1],
                              hat.r[2] - truth.r[2]};
      for (std::size_t q = 0; q < 6; ++q) {
        double prod = e[entries[q].first] * e[entries[q].second];
        sum[q] += prod;
        sumsq[q] += prod * prod;
      }
    }
    for (std::size_t q = 0; q < 6; ++q) {
      double mean = sum[q] / static_cast<double>(trials);
      double var = sumsq[q] / static_cast<double>(trials) - mean * mean;
      double se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
      double dev = std::abs(mean - predicted(entries[q].first, entries[q].second));
      worst_sigma = std::max(worst_sigma, dev / se);
    }
  }
  report(7, "stage-two error matrix matches its conditional formula", worst_sigma <= 3.0,
         fmt("max entry deviation = %.2f sigma over 20 configs x 6 entries", worst_sigma));
}

// 8. The full protocol's scaled error matrix converges onto the target
//    inverse: relative deviation shrinks with N and ends below 5%.
void check_protocol_attainment() {
  const BlochVector theta(0.0, 0.0, 0.5);
  RealSymMatrix w = qcrb::psd_function(qcrb::mixed_qubit_helstrom_power(theta, 1.0) * (1.0 / 3.0),
                                       qcrb::PsdMap::inv);
  const double w_norm = w.frobenius_norm();

  std::array<double, 3> rel{};
  const std::array<std::uint64_t, 3> copies{1000, 10000, 100000};
  for (std::size_t k = 0; k < 3; ++k) {
    ProtocolConfig config;
    config.total_copies = copies[k];
    config.master_seed = 808;
    config.target = [](const BlochVector& th) { return scaled_helstrom_target(th, 1.0 / 3.0); };
    qcrb::MqeEstimate est = qcrb::monte_carlo_mqe(config, theta, 10000);
    rel[k] = (est.v_hat.mat * static_cast<double>(copies[k]) - w).frobenius_norm() / w_norm;
  }
  bool pass = rel[0] > rel[1] && rel[1] > rel[2] && rel[2] <= 0.05;
  report(8, "protocol error converges onto the target inverse", pass,
         fmt("rel dev = %.3f / %.3f / %.3f at N = 1e3/1e4/1e5", rel[0], rel[1], rel[2]));
}

// 9. The realized information never beats the per-copy budget: the trace of
//    H^{-1}(N V)^{-1} stays at or below d−1 up to Monte Carlo slack.
void check_budget_never_beaten() {
  RngStream rng(909);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    BlochVector theta = random_interior(rng, 0.8);
    ProtocolConfig config;
    config.total_copies = 100000;
    config.master_seed = 910 + static_cast<std::uint64_t>(k);
    config.target = [](const BlochVector& th) { return scaled_helstrom_target(th, 1.0 / 3.0); };
    qcrb::MqeEstimate est = qcrb::monte_carlo_mqe(config, theta, 1200);
    RealSymMatrix nv_inv =
        qcrb::psd_function(est.v_hat.mat * static_cast<double>(config.total_copies),
                           qcrb::PsdMap::inv);
    RealSymMatrix h_inv =
        qcrb::psd_function(qcrb::mixed_qubit_helstrom_power(theta, 1.0), qcrb::PsdMap::inv);
    worst = std::max(worst, qcrb::trace_product(h_inv, nv_inv));
  }
  report(9, "realized information stays inside the one-copy budget", worst <= 1.05,
         fmt("max tr H^-1 (N V)^-1 = %.4f <= 1.05 over 5 states", worst));
}

// 10. Covariant direction estimation reaches mean fidelity 1 − 1/N within
//     three standard errors plus a 0.2/N allowance for the residual term.
void check_covariant_cost() {
  bool pass = true;
  std::ostringstream detail;
  for (std::uint64_t n : {100, 1000}) {
    qcrb::CovariantResult res = qcrb::covariant_cost_experiment(n, 500, 7, 0.55);
    double target = 1.0 - 1.0 / static_cast<double>(n);
    double dev = std::abs(res.mean_cost - target);
    double budget = 3.0 * res.std_error + 0.2 / static_cast<double>(n);
    pass = pass && dev <= budget;
    if (n != 100) detail << ", ";
    detail << "N=" << n << ": |dev| " << fmt("%.2e vs %.2e", dev, budget);
  }
  report(10, "covariant mean fidelity tracks 1 - 1/N", pass, detail.str());
}

// 11. No feasible scaled error matrix on the information-budget surface
//     undercuts the closed-form optimum of the cost tradeoff.
void check_tradeoff_optimality() {
  RngStream rng(1111);
  double worst = 1e300;
  for (int k = 0; k < 50; ++k) {
    RealSymMatrix c = random_pd_sym(3, rng, 1e-2);
    RealSymMatrix h = random_pd_sym(3, rng, 1e-2);
    qcrb::OptimalMqe opt = qcrb::optimal_scaled_mqe(InfoMatrix(c, InfoKind::cost),
                                                    InfoMatrix(h, InfoKind::helstrom), 2);
    RealSymMatrix h_inv = qcrb::psd_function(h, qcrb::PsdMap::inv);
    for (int j = 0; j < 1000; ++j) {
      RealSymMatrix g = random_pd_sym(3, rng, 1e-2);
      g *= 1.0 / qcrb::trace_product(h_inv, g);  // information budget = d−1 = 1
      RealSymMatrix w = qcrb::psd_function(g, qcrb::PsdMap::inv);
      worst = std::min(worst, qcrb::trace_product(c, w) - opt.min_cost);
    }
  }
  report(11, "closed-form tradeoff optimum is never undercut", worst >= -1e-6,
         fmt("min cost - min_cost = %+.2e over 50 x 1000 draws", worst));
}

// 12. Standardized protocol errors are asymptotically normal: component
//     skewness and excess kurtosis vanish at N = 1e5.
void check_asymptotic_normality() {
  const BlochVector theta(0.0, 0.0, 0.5);
  const std::uint64_t trials = 10000;
  ProtocolConfig config;
  config.total_copies = 100000;
  config.master_seed = 1212;
  config.target = [](const BlochVector& th) { return scaled_helstrom_target(th, 1.0 / 3.0); };

  // Standardize with W^{-1/2} = G^{1/2}: z = sqrt(N) G^{1/2} (θ̂ − θ).
  RealSymMatrix g_half = qcrb::psd_function(
      qcrb::mixed_qubit_helstrom_power(theta, 1.0) * (1.0 / 3.0), qcrb::PsdMap::sqrt);
  const double root_n = std::sqrt(static_cast<double>(config.total_copies));

  std::vector<std::array<double, 3>> z(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    qcrb::TrialResult res = qcrb::run_protocol(config, theta, t);
    std::array<double, 3> e{res.theta_hat.r[0] - theta.r[0], res.theta_hat.r[1] - theta.r[1],
                            res.theta_hat.r[2] - theta.r[2]};
    for (std::size_t i = 0; i < 3; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 3; ++j) s += g_half(i, j) * e[j];
      z[t][i] = root_n * s;
    }
  }

  double worst_skew = 0.0, worst_kurt = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double mean = 0.0;
    for (const auto& v : z) mean += v[i];
    mean /= static_cast<double>(trials);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const auto& v : z) {
      double d = v[i] - mean;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(trials);
    m3 /= static_cast<double>(trials);
    m4 /= static_cast<double>(trials);
    worst_skew = std::max(worst_skew, std::abs(m3 / std::pow(m2, 1.5)));
    worst_kurt = std::max(worst_kurt, std::abs(m4 / (m2 * m2) - 3.0));
  }
  bool pass = worst_skew <= 0.1 && worst_kurt <= 0.2;
  report(12, "standardized protocol errors are normal", pass,
         fmt("max |skew| = %.3f <= 0.1, max |excess kurtosis| = %.3f <= 0.2", worst_skew,
             worst_kurt));
}

}  // namespace

int main() {
  check_mixed_trace_equality();
  check_pure_joint_equality();
  check_collective_counterexample();
  check_product_bound();
  check_matrix_bound();
  check_design_fidelity();
  check_conditional_mqe();
  check_protocol_attainment();
  check_budget_never_beaten();
  check_covariant_cost();
  check_tradeoff_optimality();
  check_asymptotic_normality();

  if (g_failures == 0) {
    std::printf("all 12 checks passed\n");
  } else {
    std::printf("%d of 12 checks failed\n", g_failures);
  }
  return g_failures;
}
