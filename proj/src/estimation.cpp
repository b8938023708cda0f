#include "qcrb/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>
#include <utility>

#include "qcrb/errors.hpp"

namespace qcrb {

namespace {

constexpr double kProjectRadius = 1.0 - 1e-6;  // interior radius for out-of-ball estimates
constexpr double kWeightFloor = 1e-14;
constexpr std::uint64_t kProbeSalt = 0xd1b54a32d192ed03ULL;  // decouples auxiliary streams

double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// Converts a cost matrix to the information target it induces: the inverse of
// the cost-optimal scaled MQE.
InfoMatrix target_from_cost(const InfoMatrix& cost, const RealSymMatrix& helstrom) {
  OptimalMqe opt = optimal_scaled_mqe(cost, InfoMatrix(helstrom, InfoKind::helstrom), 2);
  return InfoMatrix(psd_function(opt.w_opt.mat, PsdMap::inv), InfoKind::target);
}

InfoMatrix resolve_target(const ProtocolConfig& config, const BlochVector& theta_tilde) {
  InfoMatrix raw = config.target(theta_tilde);
  if (config.target_kind == TargetKind::scaled_information) return raw;
  RealSymMatrix h = config.model == ModelKind::mixed_full
                        ? mixed_qubit_helstrom_power(theta_tilde, 1.0)
                        : RealSymMatrix::identity(2);
  return target_from_cost(raw, h);
}

BlochVector random_unit_direction(RngStream& rng) {
  double z = rng.uniform(-1.0, 1.0);
  double ph = rng.uniform(0.0, 6.283185307179586);
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return BlochVector(s * std::cos(ph), s * std::sin(ph), z);
}

// Counts of "+1" outcomes among n spin measurements with success probability p.
std::uint64_t sample_plus_count(RngStream& rng, std::uint64_t n, double p) {
  std::uint64_t plus = 0;
  for (std::uint64_t k = 0; k < n; ++k) plus += rng.bernoulli(p);
  return plus;
}

struct PureFrame {
  std::vector<cplx> psi0, psi1;
  std::array<double, 3> e1{}, e2{};  // Bloch images of the tangent directions
};

PureFrame pure_frame(const BlochVector& theta_tilde) {
  PureFrame f;
  f.psi0 = spinor(theta_tilde);
  f.psi1 = orthogonal_spinor(f.psi0);
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<cplx> w = qcrb::apply(pauli(k).matrix(), f.psi0);
    cplx t = std::conj(f.psi1[0]) * w[0] + std::conj(f.psi1[1]) * w[1];  // ⟨ψ¹|σₖ|ψ⁰⟩
    f.e1[k] = t.real();
    f.e2[k] = t.imag();
  }
  return f;
}

// Exact inversion of the tangent-chart moment map v = φ/(1 + ‖φ‖²/4),
// choosing the preimage closer to the chart origin.
std::array<double, 2> invert_chart_moment(std::array<double, 2> v) {
  double w = std::sqrt(v[0] * v[0] + v[1] * v[1]);
  if (w > 1.0) {  // noise pushed the moment outside its range; antipodal limit
    v[0] /= w;
    v[1] /= w;
    w = 1.0;
  }
  const double c = 2.0 / (1.0 + std::sqrt(1.0 - w * w));
  return {c * v[0], c * v[1]};
}

void run_mixed_stage2(const ProtocolConfig& config, const BlochVector& theta_true,
                      const InfoMatrix& target, RngStream& rng, TrialResult& out) {
  MixedQubitDesign design = design_mixed_qubit(target, out.theta_tilde);
  const std::uint64_t n2 = config.total_copies - stage1_copies(config);

  std::array<std::uint64_t, 3> alloc{};
  if (config.allocation == AllocationMode::deterministic) {
    for (std::size_t i = 0; i < 3; ++i)
      alloc[i] = static_cast<std::uint64_t>(design.gammas[i] * static_cast<double>(n2));
  } else {
    for (std::uint64_t k = 0; k < n2; ++k) {
      double u = rng.uniform(), acc = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        acc += design.gammas[i];
        if (u < acc) {
          ++alloc[i];
          break;
        }
      }  // u beyond Σγ: the copy goes to the uninformative remainder
    }
  }

  std::array<double, 3> eta{};
  for (std::size_t i = 0; i < 3; ++i) {
    out.direction_copies[i] = alloc[i];
    if (design.gammas[i] <= kWeightFloor) continue;
    if (alloc[i] == 0) {  // live direction with no copies: unusable trial
      out.discarded = true;
      continue;
    }
    double p_plus = 0.5 * (1.0 + theta_true.dot(design.directions[i]));
    std::uint64_t plus = sample_plus_count(rng, alloc[i], p_plus);
    eta[i] = (2.0 * static_cast<double>(plus) - static_cast<double>(alloc[i])) /
             static_cast<double>(alloc[i]);
  }
  out.frequencies = eta;
  out.theta_hat = stage2_estimate(design, eta);
}

void run_pure_stage2(const ProtocolConfig& config, const BlochVector& theta_true,
                     const InfoMatrix& target, RngStream& rng, TrialResult& out) {
  PureFrame frame = pure_frame(out.theta_tilde);
  PureQubitDesign design = design_pure_qubit(target, frame.psi0);
  const std::uint64_t n2 = config.total_copies - stage1_copies(config);

  std::array<std::uint64_t, 2> alloc{};
  if (config.allocation == AllocationMode::deterministic) {
    for (std::size_t i = 0; i < 2; ++i)
      alloc[i] = static_cast<std::uint64_t>(design.probs[i] * static_cast<double>(n2));
  } else {
    for (std::uint64_t k = 0; k < n2; ++k) {
      double u = rng.uniform(), acc = 0.0;
      for (std::size_t i = 0; i < 2; ++i) {
        acc += design.probs[i];
        if (u < acc) {
          ++alloc[i];
          break;
        }
      }
    }
  }

  HermitianMatrix rho_true = density_from_bloch(theta_true);
  std::array<double, 2> eta{};
  const std::array<const HermitianMatrix*, 2> obs{&design.a1, &design.a2};
  for (std::size_t i = 0; i < 2; ++i) {
    out.direction_copies[i] = alloc[i];
    if (design.probs[i] <= kWeightFloor) continue;
    if (alloc[i] == 0) {
      out.discarded = true;
      continue;
    }
    double p_plus = 0.5 * (1.0 + real_inner(rho_true, *obs[i]));
    std::uint64_t plus = sample_plus_count(rng, alloc[i], p_plus);
    eta[i] = (2.0 * static_cast<double>(plus) - static_cast<double>(alloc[i])) /
             static_cast<double>(alloc[i]);
  }
  out.frequencies = {eta[0], eta[1], 0.0};

  // Moment inversion in the chart: ⟨A₁⟩ = f₁·φ/(1+s), ⟨A₂⟩ = −f₂·φ/(1+s) for
  // the frame f₁ = (cos λ, sin λ), f₂ = (−sin λ, cos λ), s = ‖φ‖²/4.
  const double cl = std::cos(design.rotation), sl = std::sin(design.rotation);
  std::array<double, 2> v{eta[0] * cl - eta[1] * (-sl), eta[0] * sl - eta[1] * cl};
  std::array<double, 2> phi = invert_chart_moment(v);
  const double s = 0.25 * (phi[0] * phi[0] + phi[1] * phi[1]);

  std::array<double, 3> hat{};
  for (std::size_t k = 0; k < 3; ++k)
    hat[k] = ((1.0 - s) * out.theta_tilde.r[k] + phi[0] * frame.e1[k] + phi[1] * frame.e2[k]) /
             (1.0 + s);
  double n = norm3(hat);
  out.theta_hat = BlochVector(hat[0] / n, hat[1] / n, hat[2] / n);
}

// Shared Monte Carlo loop: computes per-trial payloads in parallel, then
// reduces them sequentially in trial order so results are independent of the
// thread schedule.
template <typename PerTrial>
void parallel_trials(std::uint64_t trials, unsigned n_threads, PerTrial&& per_trial) {
  unsigned workers = std::max(1u, n_threads);
  workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, trials)));
  if (workers == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) per_trial(t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(trials, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::uint64_t t = lo; t < hi; ++t) per_trial(t);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::uint64_t stage1_copies(const ProtocolConfig& config) {
  double raw = std::pow(static_cast<double>(config.total_copies), config.stage1_exponent);
  auto n0 = static_cast<std::uint64_t>(3.0 * std::ceil(raw / 3.0));
  return std::max<std::uint64_t>(n0, 3);
}

void validate_protocol_config(const ProtocolConfig& config) {
  if (config.stage1_exponent <= 0.0 || config.stage1_exponent >= 1.0)
    raise(errc::config, "stage-1 exponent must lie in (0,1)");
  if (!config.target) raise(errc::config, "protocol config carries no target");
  if (stage1_copies(config) >= config.total_copies)
    raise(errc::config, "stage 1 would consume the whole copy budget");

  // Probe the target on a fixed random sample of the domain; protocol targets
  // must be strictly positive definite and within the information budget
  // everywhere the preliminary estimate can land.
  RngStream rng(config.master_seed ^ kProbeSalt);
  for (int k = 0; k < 1000; ++k) {
    BlochVector th = random_unit_direction(rng);
    if (config.model == ModelKind::mixed_full)
      th = th.scaled(kProjectRadius * std::cbrt(rng.uniform()));
    InfoMatrix g = resolve_target(config, th);
    const std::size_t want = config.model == ModelKind::mixed_full ? 3 : 2;
    if (g.dim() != want) raise(errc::shape, "target matrix has the wrong dimension");
    if (min_eigenvalue(g.mat) <= kTol.psd_floor)
      raise(errc::inadmissible_target, "protocol targets must be positive definite");
    RealSymMatrix h = config.model == ModelKind::mixed_full
                          ? mixed_qubit_helstrom_power(th, 1.0)
                          : RealSymMatrix::identity(2);
    TargetCheck chk = validate_target(g, InfoMatrix(h, InfoKind::helstrom));
    if (!chk.admissible)
      raise(errc::inadmissible_target, "target exceeds the information budget on the domain");
  }
}

Stage1Result stage1_estimate(const Stage1Counts& counts, OutOfBallPolicy policy,
                             ModelKind model) {
  std::array<double, 3> raw{};
  for (std::size_t a = 0; a < 3; ++a) {
    const double plus = static_cast<double>(counts.tallies[a][0]);
    const double minus = static_cast<double>(counts.tallies[a][1]);
    if (plus + minus == 0.0) raise(errc::insufficient_data, "empty tally for a spin axis");
    raw[a] = (plus - minus) / (plus + minus);
  }
  const double r = norm3(raw);

  Stage1Result out;
  if (model == ModelKind::pure_full) {
    out.theta_tilde =
        r == 0.0 ? BlochVector(0.0, 0.0, 1.0)
                 : BlochVector(raw[0] / r, raw[1] / r, raw[2] / r);
    return out;
  }
  if (r > 1.0) {
    if (policy == OutOfBallPolicy::discard) out.discarded = true;
    const double scale = kProjectRadius / r;
    out.theta_tilde = BlochVector(raw[0] * scale, raw[1] * scale, raw[2] * scale);
    return out;
  }
  out.theta_tilde = BlochVector(raw[0], raw[1], raw[2]);
  return out;
}

BlochVector stage2_estimate(const MixedQubitDesign& design,
                            const std::array<double, 3>& frequencies) {
  std::array<double, 3> acc{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (design.gammas[i] <= kWeightFloor)
      raise(errc::rank_deficient_design,
            "three-parameter inversion needs all design weights positive");
    if (std::abs(frequencies[i]) > 1.0)
      raise(errc::domain, "empirical frequencies must lie in [-1, 1]");
    for (std::size_t k = 0; k < 3; ++k)
      acc[k] += design.gnorms[i] * frequencies[i] * design.eigvecs[i][k];
  }
  std::vector<double> hat =
      mixed_qubit_helstrom_power(design.theta0, -0.5).apply({acc[0], acc[1], acc[2]});
  double n = std::sqrt(hat[0] * hat[0] + hat[1] * hat[1] + hat[2] * hat[2]);
  if (n > 1.0)
    for (double& v : hat) v /= n;
  return BlochVector(hat[0], hat[1], hat[2]);
}

InfoMatrix conditional_mqe(const MixedQubitDesign& design, const BlochVector& theta_true,
                           std::uint64_t stage2_copies) {
  if (stage2_copies == 0) raise(errc::config, "conditional MQE needs stage-2 copies");
  if (theta_true.norm() >= 1.0)
    raise(errc::boundary, "conditional MQE is defined at interior states");
  RealSymMatrix h_isqrt = mixed_qubit_helstrom_power(design.theta0, -0.5);
  RealSymMatrix v(3);
  for (std::size_t i = 0; i < 3; ++i) {
    if (design.gammas[i] <= kWeightFloor)
      raise(errc::rank_deficient_design,
            "conditional MQE needs all design weights positive");
    const double align = theta_true.dot(design.directions[i]);
    const double coef =
        (1.0 - align * align) * design.gnorms[i] * design.gnorms[i] / design.gammas[i];
    std::vector<double> w =
        h_isqrt.apply({design.eigvecs[i][0], design.eigvecs[i][1], design.eigvecs[i][2]});
    v += outer(w) * coef;
  }
  v *= 1.0 / static_cast<double>(stage2_copies);
  return InfoMatrix(std::move(v), InfoKind::mqe);
}

TrialResult run_protocol(const ProtocolConfig& config, const BlochVector& theta_true,
                         std::uint64_t trial_index) {
  if (config.stage1_exponent <= 0.0 || config.stage1_exponent >= 1.0)
    raise(errc::config, "stage-1 exponent must lie in (0,1)");
  if (!config.target) raise(errc::config, "protocol config carries no target");
  const std::uint64_t n0 = stage1_copies(config);
  if (n0 >= config.total_copies)
    raise(errc::config, "stage 1 would consume the whole copy budget");

  RngStream rng = RngStream::for_trial(config.master_seed, trial_index);
  TrialResult out;
  out.theta_true = theta_true;

  // Stage 1: N₀/3 spin measurements along each coordinate axis.
  const std::uint64_t per_axis = n0 / 3;
  Stage1Counts counts;
  for (std::size_t a = 0; a < 3; ++a) {
    const double p_plus = 0.5 * (1.0 + theta_true.r[a]);
    std::uint64_t plus = sample_plus_count(rng, per_axis, p_plus);
    counts.tallies[a] = {plus, per_axis - plus};
  }
  Stage1Result s1 = stage1_estimate(counts, config.policy, config.model);
  out.theta_tilde = s1.theta_tilde;
  out.theta_hat = s1.theta_tilde;
  out.discarded = s1.discarded;
  if (out.discarded) return out;

  InfoMatrix target = resolve_target(config, out.theta_tilde);
  if (config.model == ModelKind::mixed_full)
    run_mixed_stage2(config, theta_true, target, rng, out);
  else
    run_pure_stage2(config, theta_true, target, rng, out);
  return out;
}

MqeEstimate monte_carlo_mqe(const ProtocolConfig& config, const BlochVector& theta_true,
                            std::uint64_t trials, unsigned n_threads) {
  if (trials < 2) raise(errc::config, "MQE estimation needs at least two trials");

  static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> kEntries{
      {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
  std::vector<std::array<double, 6>> products(trials);
  std::vector<char> kept(trials, 0);

  parallel_trials(trials, n_threads, [&](std::uint64_t t) {
    TrialResult res = run_protocol(config, theta_true, t);
    if (res.discarded) return;
    kept[t] = 1;
    std::array<double, 3> e{res.theta_hat.r[0] - theta_true.r[0],
                            res.theta_hat.r[1] - theta_true.r[1],
                            res.theta_hat.r[2] - theta_true.r[2]};
    for (std::size_t k = 0; k < 6; ++k)
      products[t][k] = e[kEntries[k].first] * e[kEntries[k].second];
  });

  std::array<double, 6> sum{}, sumsq{};
  std::uint64_t n = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    if (!kept[t]) continue;
    ++n;
    for (std::size_t k = 0; k < 6; ++k) {
      sum[k] += products[t][k];
      sumsq[k] += products[t][k] * products[t][k];
    }
  }
  if (n < 2) raise(errc::insufficient_data, "too few usable trials for an MQE estimate");

  RealSymMatrix v(3), se(3);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < 6; ++k) {
    const double mean = sum[k] / dn;
    const double var = std::max(0.0, (sumsq[k] - dn * mean * mean) / (dn - 1.0));
    v.set_sym(kEntries[k].first, kEntries[k].second, mean);
    se.set_sym(kEntries[k].first, kEntries[k].second, std::sqrt(var / dn));
  }

  MqeEstimate out;
  out.v_hat = InfoMatrix(std::move(v), InfoKind::mqe);
  out.stderrs = std::move(se);
  out.trials = trials;
  out.discard_rate = static_cast<double>(trials - n) / static_cast<double>(trials);
  return out;
}

double direction_fidelity_cost(const BlochVector& a, const BlochVector& b) {
  return 0.5 * (1.0 + a.dot(b));
}

CovariantResult covariant_cost_experiment(std::uint64_t total_copies, std::uint64_t trials,
                                          std::uint64_t master_seed, double stage1_exponent,
                                          unsigned n_threads) {
  if (trials < 2) raise(errc::config, "covariant experiment needs at least two trials");
  ProtocolConfig config;
  config.total_copies = total_copies;
  config.stage1_exponent = stage1_exponent;
  config.model = ModelKind::pure_full;
  config.target_kind = TargetKind::scaled_information;
  config.master_seed = master_seed;
  // Fidelity cost C = H/4 in the tangent chart (H = identity there); the
  // induced optimal target is G = H/2.
  config.target = [](const BlochVector&) {
    return InfoMatrix(RealSymMatrix::identity(2) * 0.5, InfoKind::target);
  };

  std::vector<double> costs(trials);
  parallel_trials(trials, n_threads, [&](std::uint64_t t) {
    RngStream dir_rng = RngStream::for_trial(master_seed ^ kProbeSalt, t);
    BlochVector truth = random_unit_direction(dir_rng);
    TrialResult res = run_protocol(config, truth, t);
    costs[t] = direction_fidelity_cost(res.theta_hat, truth);
  });

  double sum = 0.0, sumsq = 0.0;
  for (double c : costs) {
    sum += c;
    sumsq += c * c;
  }
  const double dn = static_cast<double>(trials);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sumsq - dn * mean * mean) / (dn - 1.0));
  return {mean, std::sqrt(var / dn), trials};
}

std::vector<double> grid_mle(const Povm& m, const ParametricModel& model,
                             const std::vector<std::uint64_t>& counts, const GridSpec& grid) {
  const std::size_t p = model.param_dim;
  if (grid.lo.size() != p || grid.hi.size() != p || grid.step <= 0.0)
    raise(errc::config, "grid bounds must match the parameter dimension");
  if (counts.size() != m.elements.size())
    raise(errc::shape, "one count per measurement outcome required");

  std::vector<std::size_t> steps(p);
  for (std::size_t k = 0; k < p; ++k) {
    if (grid.hi[k] < grid.lo[k]) raise(errc::config, "grid upper bound below lower bound");
    steps[k] = static_cast<std::size_t>((grid.hi[k] - grid.lo[k]) / grid.step + 1e-9) + 1;
  }

  std::vector<std::size_t> idx(p, 0);
  std::vector<double> theta(p), best;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool more = true;
  while (more) {
    for (std::size_t k = 0; k < p; ++k) theta[k] = grid.lo[k] + grid.step * idx[k];
    if (model.in_domain(theta)) {
      std::vector<double> probs = outcome_distribution(m, model.rho(theta));
      double ll = 0.0;
      bool feasible = true;
      for (std::size_t xi = 0; xi < probs.size() && feasible; ++xi) {
        if (counts[xi] == 0) continue;
        if (probs[xi] <= 0.0)
          feasible = false;  // observed outcome impossible at this θ
        else
          ll += static_cast<double>(counts[xi]) * std::log(probs[xi]);
      }
      if (feasible && ll > best_ll) {
        best_ll = ll;
        best = theta;
      }
    }
    // lexicographic increment, last index fastest
    more = false;
    for (std::size_t k = p; k-- > 0;) {
      if (++idx[k] < steps[k]) {
        more = true;
        break;
      }
      idx[k] = 0;
    }
  }
  if (best.empty()) raise(errc::domain, "no feasible grid point in the model domain");
  return best;
}

}  // namespace qcrb
