#include "qcrb/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "qcrb/design.hpp"
#include "qcrb/errors.hpp"
#include "qcrb/information.hpp"

namespace qcrb {

namespace {

// --- random scenario generators for the verification suites ----------------

HermitianMatrix random_full_rank_density(std::size_t n, RngStream& rng, double min_eig = 0.02) {
  ComplexMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = cplx(rng.normal(), rng.normal());
  HermitianMatrix a = HermitianMatrix::from(b.adjoint() * b, 1e-9);
  a *= (1.0 - min_eig * static_cast<double>(n)) / a.trace();
  a += min_eig * HermitianMatrix::identity(n);
  a *= 1.0 / a.trace();
  return a;
}

// Rank-one elements S^{-1/2}|v⟩⟨v|S^{-1/2} from Gaussian vectors; their sum
// is the identity by construction.
Povm random_exhaustive_povm(std::size_t dim, std::size_t n_outcomes, RngStream& rng,
                            std::size_t copies = 1) {
  std::vector<std::vector<cplx>> vs(n_outcomes);
  ComplexMatrix s(dim, dim);
  for (auto& v : vs) {
    v.resize(dim);
    for (auto& x : v) x = cplx(rng.normal(), rng.normal());
    s += outer(v, v);
  }
  HermitianMatrix shalf = psd_function(HermitianMatrix::from(s, 1e-9), PsdMap::inv_sqrt);
  std::vector<HermitianMatrix> elements;
  elements.reserve(n_outcomes);
  for (const auto& v : vs) {
    std::vector<cplx> w = apply(shalf.matrix(), v);
    elements.push_back(HermitianMatrix::from(outer(w, w), 1e-9));
  }
  return make_povm(dim, copies, std::move(elements));
}

// --- manifest plumbing ------------------------------------------------------

void expect_one_of(const std::string& field, const std::string& value,
                   std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  raise(errc::config, "manifest." + field + ": unsupported value '" + value + "'");
}

void validate_manifest(const ExperimentManifest& m) {
  expect_one_of("command", m.command,
                {"verify", "design", "simulate", "covariant", "counterexample"});
  expect_one_of("model", m.model, {"mixed_full", "pure_full"});
  expect_one_of("povm_source", m.povm_source, {"builtin", "file"});
  expect_one_of("policy", m.policy, {"project", "discard"});
  expect_one_of("allocation", m.allocation, {"deterministic", "multinomial"});
  expect_one_of("target_kind", m.target_kind, {"scaled_helstrom", "constant", "cost"});
  if (m.theta_points.empty()) raise(errc::config, "manifest.theta_points: empty");
  if (m.copy_list.empty()) raise(errc::config, "manifest.copy_list: empty");
  if (m.threads == 0) raise(errc::config, "manifest.threads: must be at least 1");
  if (m.stage1_exponent <= 0.0 || m.stage1_exponent >= 1.0)
    raise(errc::config, "manifest.stage1_exponent: must lie in (0,1)");
  if (m.covariant_exponent <= 0.0 || m.covariant_exponent >= 1.0)
    raise(errc::config, "manifest.covariant_exponent: must lie in (0,1)");
  if (m.target_scale <= 0.0) raise(errc::config, "manifest.target_scale: must be positive");
  for (std::size_t d : m.dims)
    if (d < 2) raise(errc::config, "manifest.dims: dimensions must be at least 2");
}

// The square symmetric matrix encoded by manifest.target_matrix.
RealSymMatrix target_matrix_from_manifest(const ExperimentManifest& m, std::size_t dim) {
  if (m.target_matrix.size() != dim * dim)
    raise(errc::config, "manifest.target_matrix: expected " + std::to_string(dim * dim) +
                            " row-major entries");
  RealSymMatrix g(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      double a = m.target_matrix[i * dim + j], b = m.target_matrix[j * dim + i];
      if (std::abs(a - b) > 1e-12)
        raise(errc::config, "manifest.target_matrix: not symmetric at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
      g.set_sym(i, j, a);
    }
  return g;
}

// Builds the per-state target callable the protocol consumes.
std::function<InfoMatrix(const BlochVector&)> target_callable(const ExperimentManifest& m) {
  const bool mixed = m.model == "mixed_full";
  const std::size_t pdim = mixed ? 3 : 2;
  if (m.target_kind == "scaled_helstrom") {
    const double scale = m.target_scale;
    if (mixed)
      return [scale](const BlochVector& th) {
        return InfoMatrix(mixed_qubit_helstrom_power(th, 1.0) * scale, InfoKind::target);
      };
    return [scale](const BlochVector&) {
      return InfoMatrix(RealSymMatrix::identity(2) * scale, InfoKind::target);
    };
  }
  RealSymMatrix fixed = target_matrix_from_manifest(m, pdim);
  InfoKind kind = m.target_kind == "cost" ? InfoKind::cost : InfoKind::target;
  return [fixed, kind](const BlochVector&) { return InfoMatrix(fixed, kind); };
}

ProtocolConfig protocol_config(const ExperimentManifest& m, std::uint64_t total_copies) {
  ProtocolConfig c;
  c.total_copies = total_copies;
  c.stage1_exponent = m.stage1_exponent;
  c.policy = m.policy == "discard" ? OutOfBallPolicy::discard : OutOfBallPolicy::project;
  c.allocation = m.allocation == "multinomial" ? AllocationMode::multinomial
                                               : AllocationMode::deterministic;
  c.model = m.model == "pure_full" ? ModelKind::pure_full : ModelKind::mixed_full;
  c.target_kind = m.target_kind == "cost" ? TargetKind::cost : TargetKind::scaled_information;
  c.master_seed = m.seed;
  c.target = target_callable(m);
  return c;
}

struct VerifyRow {
  std::string case_id;
  std::size_t d = 0, n = 0, p = 0;
  double value = 0.0, bound = 0.0;
  bool pass = false;
};

void emit(std::ostream& out, const VerifyRow& r) {
  out << r.case_id << ',' << r.d << ',' << r.n << ',' << r.p << ',' << fmt17(r.value) << ','
      << fmt17(r.bound) << ',' << (r.pass ? 1 : 0) << '\n';
}

VerifyRow counterexample_row() {
  Povm m = counterexample_povm();
  ParametricModel model = full_mixed_qubit();
  const std::vector<double> origin{0.0, 0.0, 0.0};
  InfoMatrix fisher = fisher_information(m, model, origin, 2);
  InfoMatrix helstrom = helstrom_matrix(model, origin);
  const double trace = gill_massar_trace(helstrom, fisher);
  const double dev = (fisher.mat - RealSymMatrix::identity(3)).frobenius_norm();

  VerifyRow row;
  row.case_id = "counterexample";
  row.d = 2;
  row.n = 2;
  row.p = 3;
  row.value = trace;
  row.bound = 2.0;  // the separable-measurement ceiling n(d−1) it must exceed
  row.pass = dev <= 1e-10 && std::abs(trace - 3.0) <= 1e-8 && trace > row.bound;
  return row;
}

std::string label(const char* suite, std::size_t d, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-d%zu-%03zu", suite, d, k);
  return buf;
}

// --- design command helpers -------------------------------------------------

nlohmann::json pure_design_to_json(const PureQubitDesign& d) {
  nlohmann::json j;
  j["psi0"] = {{d.psi0[0].real(), d.psi0[0].imag()}, {d.psi0[1].real(), d.psi0[1].imag()}};
  j["rotation"] = d.rotation;
  j["probs"] = {d.probs[0], d.probs[1]};
  return j;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json manifest_to_json(const ExperimentManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["model"] = m.model;
  nlohmann::json pts = nlohmann::json::array();
  for (const BlochVector& t : m.theta_points) pts.push_back({t.r[0], t.r[1], t.r[2]});
  j["theta_points"] = std::move(pts);
  j["povm_source"] = m.povm_source;
  j["povm_file"] = m.povm_file;
  j["copy_list"] = m.copy_list;
  j["trials"] = m.trials;
  j["seed"] = m.seed;
  j["policy"] = m.policy;
  j["allocation"] = m.allocation;
  j["stage1_exponent"] = m.stage1_exponent;
  j["covariant_exponent"] = m.covariant_exponent;
  j["target_kind"] = m.target_kind;
  j["target_scale"] = m.target_scale;
  j["target_matrix"] = m.target_matrix;
  j["dims"] = m.dims;
  j["cases_per_dim"] = m.cases_per_dim;
  j["threads"] = m.threads;
  j["out_path"] = m.out_path;
  return j;
}

ExperimentManifest manifest_from_json(const nlohmann::json& j) {
  if (!j.is_object()) raise(errc::config, "manifest: expected a JSON object");
  static const std::set<std::string> known{
      "command",     "model",        "theta_points",    "povm_source",
      "povm_file",   "copy_list",    "trials",          "seed",
      "policy",      "allocation",   "stage1_exponent", "covariant_exponent",
      "target_kind", "target_scale", "target_matrix",   "dims",
      "cases_per_dim", "threads",    "out_path"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) raise(errc::config, "manifest: unknown field '" + it.key() + "'");

  ExperimentManifest m;
  try {
    if (j.contains("command")) m.command = j.at("command").get<std::string>();
    if (j.contains("model")) m.model = j.at("model").get<std::string>();
    if (j.contains("theta_points")) {
      m.theta_points.clear();
      for (const auto& p : j.at("theta_points")) {
        auto v = p.get<std::vector<double>>();
        if (v.size() != 3)
          raise(errc::config, "manifest.theta_points: each point needs 3 components");
        m.theta_points.emplace_back(v[0], v[1], v[2]);
      }
    }
    if (j.contains("povm_source")) m.povm_source = j.at("povm_source").get<std::string>();
    if (j.contains("povm_file")) m.povm_file = j.at("povm_file").get<std::string>();
    if (j.contains("copy_list")) m.copy_list = j.at("copy_list").get<std::vector<std::uint64_t>>();
    if (j.contains("trials")) m.trials = j.at("trials").get<std::uint64_t>();
    if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("policy")) m.policy = j.at("policy").get<std::string>();
    if (j.contains("allocation")) m.allocation = j.at("allocation").get<std::string>();
    if (j.contains("stage1_exponent")) m.stage1_exponent = j.at("stage1_exponent").get<double>();
    if (j.contains("covariant_exponent"))
      m.covariant_exponent = j.at("covariant_exponent").get<double>();
    if (j.contains("target_kind")) m.target_kind = j.at("target_kind").get<std::string>();
    if (j.contains("target_scale")) m.target_scale = j.at("target_scale").get<double>();
    if (j.contains("target_matrix"))
      m.target_matrix = j.at("target_matrix").get<std::vector<double>>();
    if (j.contains("dims")) m.dims = j.at("dims").get<std::vector<std::size_t>>();
    if (j.contains("cases_per_dim")) m.cases_per_dim = j.at("cases_per_dim").get<std::size_t>();
    if (j.contains("threads")) m.threads = j.at("threads").get<unsigned>();
    if (j.contains("out_path")) m.out_path = j.at("out_path").get<std::string>();
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::config, std::string("manifest: ") + e.what());
  }
  validate_manifest(m);
  return m;
}

int cmd_verify(const ExperimentManifest& m, std::ostream& out) {
  validate_manifest(m);
  out << "case_id,d,N,p,trace_value,bound,pass\n";
  RngStream rng(m.seed);
  bool all_pass = true;
  auto push = [&](const VerifyRow& r) {
    all_pass = all_pass && r.pass;
    emit(out, r);
  };

  if (m.povm_source == "file") {
    // Run the trace and matrix bounds for a user-supplied measurement on the
    // full mixed-qubit model at each requested state.
    std::ifstream in(m.povm_file);
    if (!in) raise(errc::config, "manifest.povm_file: cannot open '" + m.povm_file + "'");
    nlohmann::json pj;
    in >> pj;
    Povm user = povm_from_json(pj);
    ParametricModel model = full_mixed_qubit();
    for (std::size_t k = 0; k < m.theta_points.size(); ++k) {
      const BlochVector& th = m.theta_points[k];
      InfoMatrix fisher = fisher_information(user, model, th.to_vector(), user.copies);
      InfoMatrix helstrom = helstrom_matrix(model, th.to_vector());
      VerifyRow row;
      row.case_id = label("trace-file", 2, k);
      row.d = 2;
      row.n = user.copies;
      row.p = 3;
      row.value = gill_massar_trace(helstrom, fisher);
      row.bound = static_cast<double>(user.copies) * 1.0;
      row.pass = row.value <= row.bound + 1e-8;
      push(row);

      BoundCheck bc = helstrom_bound_check(fisher, helstrom, user.copies);
      VerifyRow hrow;
      hrow.case_id = label("helstrom-file", 2, k);
      hrow.d = 2;
      hrow.n = user.copies;
      hrow.p = 3;
      hrow.value = bc.min_eigenvalue;
      hrow.bound = 0.0;
      hrow.pass = bc.holds;
      push(hrow);
    }
    push(counterexample_row());
    return all_pass ? 0 : 4;
  }

  // Exhaustive single-copy measurements on full mixed models: the information
  // trace equals d−1.
  for (std::size_t d : m.dims) {
    ParametricModel model = full_mixed_qudit(random_full_rank_density(d, rng));
    const std::vector<double> origin(model.param_dim, 0.0);
    InfoMatrix helstrom = helstrom_matrix(model, origin);
    for (std::size_t k = 0; k < m.cases_per_dim; ++k) {
      Povm povm = random_exhaustive_povm(d, 2 * d, rng);
      InfoMatrix fisher = fisher_information(povm, model, origin, 1);
      VerifyRow row;
      row.case_id = label("trace-mixed", d, k);
      row.d = d;
      row.n = 1;
      row.p = model.param_dim;
      row.value = gill_massar_trace(helstrom, fisher);
      row.bound = static_cast<double>(d - 1);
      row.pass = std::abs(row.value - row.bound) <= 1e-8;
      push(row);
    }
  }

  // Exhaustive joint measurements on two copies of a pure state: the trace
  // equals N(d−1).
  for (std::size_t d : m.dims) {
    ParametricModel model = pure_qudit_tangent(d);
    const std::vector<double> origin(model.param_dim, 0.0);
    InfoMatrix helstrom = helstrom_matrix(model, origin);
    const std::size_t joint_dim = d * d;
    for (std::size_t k = 0; k < m.cases_per_dim; ++k) {
      Povm povm = random_exhaustive_povm(joint_dim, joint_dim + 3, rng, 2);
      InfoMatrix fisher = fisher_information(povm, model, origin, 2);
      VerifyRow row;
      row.case_id = label("trace-pure", d, k);
      row.d = d;
      row.n = 2;
      row.p = model.param_dim;
      row.value = gill_massar_trace(helstrom, fisher);
      row.bound = 2.0 * static_cast<double>(d - 1);
      row.pass = std::abs(row.value - row.bound) <= 1e-8;
      push(row);
    }
  }

  // Matrix bound I ≤ H for arbitrary single-copy measurements.
  for (std::size_t d : m.dims) {
    for (std::size_t k = 0; k < m.cases_per_dim; ++k) {
      ParametricModel model = full_mixed_qudit(random_full_rank_density(d, rng));
      const std::vector<double> origin(model.param_dim, 0.0);
      Povm povm = random_exhaustive_povm(d, d + 2, rng);
      InfoMatrix fisher = fisher_information(povm, model, origin, 1);
      InfoMatrix helstrom = helstrom_matrix(model, origin);
      BoundCheck bc = helstrom_bound_check(fisher, helstrom, 1);
      VerifyRow row;
      row.case_id = label("helstrom", d, k);
      row.d = d;
      row.n = 1;
      row.p = model.param_dim;
      row.value = bc.min_eigenvalue;
      row.bound = 0.0;
      row.pass = bc.holds;
      push(row);
    }
  }

  // Sub-model information bound on a two-level subspace of a pure qutrit.
  {
    ParametricModel model = pure_qudit_tangent(3);
    const std::vector<double> origin(model.param_dim, 0.0);
    HermitianMatrix proj(3);
    proj.set(0, 0, 1.0);
    proj.set(1, 1, 1.0);
    for (std::size_t k = 0; k < m.cases_per_dim; ++k) {
      Povm povm = random_exhaustive_povm(3, 6, rng);
      PartialTraceBound pt = partial_trace_bound(povm, model, origin, {0, 1}, proj);
      VerifyRow row;
      row.case_id = label("partial", 3, k);
      row.d = 3;
      row.n = 1;
      row.p = model.param_dim;
      row.value = pt.lhs;
      row.bound = pt.bound;
      row.pass = pt.lhs <= pt.bound + 1e-9;
      push(row);
    }
  }

  push(counterexample_row());
  return all_pass ? 0 : 4;
}

int cmd_design(const ExperimentManifest& m, std::ostream& out) {
  validate_manifest(m);
  const BlochVector theta0 = m.theta_points.front();
  const bool mixed = m.model == "mixed_full";

  nlohmann::json report;
  report["model"] = m.model;
  report["theta0"] = {theta0.r[0], theta0.r[1], theta0.r[2]};

  // Resolve the target; cost matrices go through the optimal-tradeoff solver.
  InfoMatrix target;
  if (m.target_kind == "scaled_helstrom") {
    target = mixed ? InfoMatrix(mixed_qubit_helstrom_power(theta0, 1.0) * m.target_scale,
                                InfoKind::target)
                   : InfoMatrix(RealSymMatrix::identity(2) * m.target_scale, InfoKind::target);
  } else {
    RealSymMatrix raw = target_matrix_from_manifest(m, mixed ? 3 : 2);
    if (m.target_kind == "cost") {
      RealSymMatrix h =
          mixed ? mixed_qubit_helstrom_power(theta0, 1.0) : RealSymMatrix::identity(2);
      OptimalMqe opt = optimal_scaled_mqe(InfoMatrix(raw, InfoKind::cost),
                                          InfoMatrix(h, InfoKind::helstrom), 2);
      report["min_cost"] = opt.min_cost;
      target = InfoMatrix(psd_function(opt.w_opt.mat, PsdMap::inv), InfoKind::target);
    } else {
      target = InfoMatrix(raw, InfoKind::target);
    }
  }

  Povm povm;
  double deviation = 0.0;
  if (mixed) {
    MixedQubitDesign design = design_mixed_qubit(target, theta0);
    povm = realize_povm(design);
    InfoMatrix realized =
        fisher_information(povm, full_mixed_qubit(), theta0.to_vector(), 1);
    deviation = (realized.mat - target.mat).frobenius_norm();
    report["design"] = design_to_json(design);
  } else {
    if (std::abs(theta0.norm() - 1.0) > 1e-9)
      raise(errc::config, "pure-model designs need a unit Bloch vector");
    std::vector<cplx> psi0 = spinor(theta0);
    PureQubitDesign design = design_pure_qubit(target, psi0);
    povm = realize_povm(design);
    ParametricModel chart = pure_qubit_tangent(psi0, orthogonal_spinor(psi0));
    InfoMatrix realized = fisher_information(povm, chart, {0.0, 0.0}, 1);
    deviation = (realized.mat - target.mat).frobenius_norm();
    report["design"] = pure_design_to_json(design);
  }
  report["fisher_deviation"] = deviation;
  report["povm"] = povm_to_json(povm);
  out << report.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const ExperimentManifest& m, std::ostream& out) {
  validate_manifest(m);
  if (m.trials < 2) raise(errc::config, "manifest.trials: need at least 2 trials");
  if (m.model == "pure_full")
    for (const BlochVector& th : m.theta_points)
      if (std::abs(th.norm() - 1.0) > 1e-9)
        raise(errc::config, "pure-model simulation needs unit Bloch vectors");

  out << "N,trials,theta_x,theta_y,theta_z,policy,a,"
         "nv_xx,nv_xy,nv_xz,nv_yy,nv_yz,nv_zz,"
         "se_xx,se_xy,se_xz,se_yy,se_yz,se_zz,discard_rate,gm_trace\n";

  for (std::uint64_t n : m.copy_list) {
    ProtocolConfig config = protocol_config(m, n);
    validate_protocol_config(config);
    for (const BlochVector& th : m.theta_points) {
      MqeEstimate est = monte_carlo_mqe(config, th, m.trials, m.threads);
      const double dn = static_cast<double>(n);
      RealSymMatrix nv = est.v_hat.mat * dn;

      // Information-budget trace of the realized error matrix. For the pure
      // model the error lives in the tangent plane, so the trace is taken in
      // the tangent chart at the true state.
      double gm = 0.0;
      if (m.model == "mixed_full") {
        gm = trace_product(psd_function(mixed_qubit_helstrom_power(th, 1.0), PsdMap::inv),
                           psd_function(nv, PsdMap::inv));
      } else {
        std::vector<cplx> psi0 = spinor(th);
        std::vector<cplx> psi1 = orthogonal_spinor(psi0);
        std::array<std::array<double, 3>, 2> frame{};
        for (std::size_t k = 0; k < 3; ++k) {
          std::vector<cplx> w = qcrb::apply(pauli(k).matrix(), psi0);
          cplx t = std::conj(psi1[0]) * w[0] + std::conj(psi1[1]) * w[1];
          frame[0][k] = t.real();
          frame[1][k] = t.imag();
        }
        RealSymMatrix nv2(2);
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = a; b < 2; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < 3; ++i)
              for (std::size_t j = 0; j < 3; ++j) s += frame[a][i] * nv(i, j) * frame[b][j];
            nv2.set_sym(a, b, s);
          }
        gm = psd_function(nv2, PsdMap::inv).trace();
      }

      out << n << ',' << m.trials << ',' << fmt17(th.r[0]) << ',' << fmt17(th.r[1]) << ','
          << fmt17(th.r[2]) << ',' << m.policy << ',' << fmt17(m.stage1_exponent);
      static constexpr std::array<std::pair<std::size_t, std::size_t>, 6> order{
          {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
      for (auto [i, j] : order) out << ',' << fmt17(nv(i, j));
      for (auto [i, j] : order) out << ',' << fmt17(est.stderrs(i, j) * dn);
      out << ',' << fmt17(est.discard_rate) << ',' << fmt17(gm) << '\n';
    }
  }
  return 0;
}

int cmd_covariant(const ExperimentManifest& m, std::ostream& out) {
  validate_manifest(m);
  if (m.trials < 2) raise(errc::config, "manifest.trials: need at least 2 trials");
  out << "N,mean_cost,stderr,asymptote\n";
  for (std::uint64_t n : m.copy_list) {
    CovariantResult res =
        covariant_cost_experiment(n, m.trials, m.seed, m.covariant_exponent, m.threads);
    out << n << ',' << fmt17(res.mean_cost) << ',' << fmt17(res.std_error) << ','
        << fmt17(1.0 - 1.0 / static_cast<double>(n)) << '\n';
  }
  return 0;
}

int cmd_counterexample(const ExperimentManifest& m, std::ostream& out) {
  validate_manifest(m);
  out << "case_id,d,N,p,trace_value,bound,pass\n";
  VerifyRow row = counterexample_row();
  emit(out, row);
  return row.pass ? 0 : 4;
}

int run_manifest(const ExperimentManifest& m, std::ostream& out, std::ostream& diag) {
  try {
    if (m.command == "verify") return cmd_verify(m, out);
    if (m.command == "design") return cmd_design(m, out);
    if (m.command == "simulate") return cmd_simulate(m, out);
    if (m.command == "covariant") return cmd_covariant(m, out);
    if (m.command == "counterexample") return cmd_counterexample(m, out);
    raise(errc::config, "unknown command '" + m.command + "'");
  } catch (const Error& e) {
    diag << "error: " << e.what() << '\n';
    return Error::is_numerical(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace qcrb
