#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qcrb/cli.hpp"
#include "qcrb/design.hpp"
#include "qcrb/errors.hpp"
#include "qcrb/estimation.hpp"
#include "qcrb/information.hpp"
#include "qcrb/matkit.hpp"
#include "qcrb/quantum.hpp"

namespace py = pybind11;

namespace {

qcrb::RealSymMatrix rsym(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) qcrb::raise(qcrb::errc::shape, "matrix rows must form a square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(flat[i * n + j] - flat[j * n + i]) > 1e-12)
        qcrb::raise(qcrb::errc::shape, "matrix must be symmetric");
  return qcrb::RealSymMatrix::from(n, flat);
}

std::vector<std::vector<double>> rows_of(const qcrb::RealSymMatrix& a) {
  std::vector<std::vector<double>> rows(a.dim(), std::vector<double>(a.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) rows[i][j] = a(i, j);
  return rows;
}

qcrb::BlochVector bloch(const std::array<double, 3>& t) { return {t[0], t[1], t[2]}; }

}  // namespace

PYBIND11_MODULE(_qcrb, m) {
  m.doc() = "quantum information bounds, measurement design, and protocol simulation";

  m.def(
      "mixed_qubit_helstrom",
      [](std::array<double, 3> theta) {
        return rows_of(qcrb::mixed_qubit_helstrom_power(bloch(theta), 1.0));
      },
      py::arg("theta"), "Quantum information matrix of the full mixed-qubit model.");

  m.def(
      "gill_massar_trace",
      [](const std::vector<std::vector<double>>& helstrom,
         const std::vector<std::vector<double>>& fisher) {
        return qcrb::gill_massar_trace(
            qcrb::InfoMatrix(rsym(helstrom), qcrb::InfoKind::helstrom),
            qcrb::InfoMatrix(rsym(fisher), qcrb::InfoKind::fisher));
      },
      py::arg("helstrom"), py::arg("fisher"),
      "Information-budget trace tr(H^-1 I) of a measurement.");

  m.def(
      "optimal_scaled_mqe",
      [](const std::vector<std::vector<double>>& cost,
         const std::vector<std::vector<double>>& helstrom, std::size_t hilbert_dim) {
        qcrb::OptimalMqe opt =
            qcrb::optimal_scaled_mqe(qcrb::InfoMatrix(rsym(cost), qcrb::InfoKind::cost),
                                     qcrb::InfoMatrix(rsym(helstrom), qcrb::InfoKind::helstrom),
                                     hilbert_dim);
        py::dict out;
        out["w_opt"] = rows_of(opt.w_opt.mat);
        out["min_cost"] = opt.min_cost;
        return out;
      },
      py::arg("cost"), py::arg("helstrom"), py::arg("hilbert_dim") = 2,
      "Cost-optimal scaled error matrix and its minimum cost.");

  m.def(
      "design_mixed_qubit",
      [](const std::vector<std::vector<double>>& target, std::array<double, 3> theta) {
        qcrb::MixedQubitDesign d = qcrb::design_mixed_qubit(
            qcrb::InfoMatrix(rsym(target), qcrb::InfoKind::target), bloch(theta));
        py::dict out;
        out["gammas"] = d.gammas;
        std::vector<std::array<double, 3>> dirs;
        for (const auto& v : d.directions) dirs.push_back(v.r);
        out["directions"] = dirs;
        out["gnorms"] = d.gnorms;
        return out;
      },
      py::arg("target"), py::arg("theta"),
      "Spin-axis measurement design realizing an information target.");

  m.def(
      "conditional_mqe",
      [](const std::vector<std::vector<double>>& target, std::array<double, 3> theta_tilde,
         std::array<double, 3> theta_true, std::uint64_t stage2_copies) {
        qcrb::MixedQubitDesign d = qcrb::design_mixed_qubit(
            qcrb::InfoMatrix(rsym(target), qcrb::InfoKind::target), bloch(theta_tilde));
        return rows_of(qcrb::conditional_mqe(d, bloch(theta_true), stage2_copies).mat);
      },
      py::arg("target"), py::arg("theta_tilde"), py::arg("theta_true"),
      py::arg("stage2_copies"),
      "Closed-form error matrix of the stage-two estimator built at theta_tilde.");

  m.def(
      "simulate_protocol",
      [](std::uint64_t n, std::array<double, 3> theta, std::uint64_t trials, std::uint64_t seed,
         double share, double exponent, unsigned threads) {
        qcrb::ProtocolConfig config;
        config.total_copies = n;
        config.master_seed = seed;
        config.stage1_exponent = exponent;
        config.target = [share](const qcrb::BlochVector& th) {
          return qcrb::InfoMatrix(qcrb::mixed_qubit_helstrom_power(th, 1.0) * share,
                                  qcrb::InfoKind::target);
        };
        qcrb::MqeEstimate est = qcrb::monte_carlo_mqe(config, bloch(theta), trials, threads);
        py::dict out;
        out["v_hat"] = rows_of(est.v_hat.mat);
        out["stderrs"] = rows_of(est.stderrs);
        out["trials"] = est.trials;
        out["discard_rate"] = est.discard_rate;
        return out;
      },
      py::arg("n"), py::arg("theta"), py::arg("trials"), py::arg("seed") = 0,
      py::arg("share") = 1.0 / 3.0, py::arg("exponent") = 0.7, py::arg("threads") = 1,
      "Monte Carlo error matrix of the two-stage protocol on the mixed qubit.");

  m.def(
      "covariant_cost",
      [](std::uint64_t n, std::uint64_t trials, std::uint64_t seed, double exponent,
         unsigned threads) {
        qcrb::CovariantResult res =
            qcrb::covariant_cost_experiment(n, trials, seed, exponent, threads);
        py::dict out;
        out["mean_cost"] = res.mean_cost;
        out["std_error"] = res.std_error;
        out["trials"] = res.trials;
        return out;
      },
      py::arg("n"), py::arg("trials"), py::arg("seed") = 0, py::arg("exponent") = 0.5,
      py::arg("threads") = 1,
      "Mean fidelity cost of direction estimation over random true directions.");

  m.def(
      "counterexample_trace",
      []() {
        qcrb::ParametricModel model = qcrb::full_mixed_qubit();
        const std::vector<double> origin(3, 0.0);
        qcrb::InfoMatrix fisher =
            qcrb::fisher_information(qcrb::counterexample_povm(), model, origin, 2);
        return qcrb::gill_massar_trace(qcrb::helstrom_matrix(model, origin), fisher);
      },
      "Information trace of the collective two-copy measurement (exceeds the separable "
      "budget of 2).");

  m.def(
      "run_manifest",
      [](const std::string& manifest_json) {
        std::ostringstream out, diag;
        int code = 0;
        try {
          qcrb::ExperimentManifest manifest =
              qcrb::manifest_from_json(nlohmann::json::parse(manifest_json));
          code = qcrb::run_manifest(manifest, out, diag);
        } catch (const qcrb::Error& e) {
          diag << e.what();
          code = qcrb::Error::is_numerical(e.code()) ? 3 : 2;
        } catch (const std::exception& e) {
          diag << e.what();
          code = 2;
        }
        return py::make_tuple(code, out.str(), diag.str());
      },
      py::arg("manifest_json"),
      "Run an experiment manifest; returns (exit_code, output, diagnostics).");
}
