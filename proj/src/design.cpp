#include "qcrb/design.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "qcrb/errors.hpp"

namespace qcrb {

namespace {

constexpr double kWeightFloor = 1e-14;  // design weights below this realize no element

void require_square_pd_pair(const InfoMatrix& a, const InfoMatrix& b) {
  if (a.dim() == 0 || a.dim() != b.dim())
    raise(errc::shape, "information matrices must share a nonzero dimension");
}

std::array<double, 3> column(const EigSym& e, std::size_t k) {
  return {e.vectors[k][0], e.vectors[k][1], e.vectors[k][2]};
}

}  // namespace

OptimalMqe optimal_scaled_mqe(const InfoMatrix& cost, const InfoMatrix& helstrom,
                              std::size_t hilbert_dim) {
  require_square_pd_pair(cost, helstrom);
  if (hilbert_dim < 2) raise(errc::config, "scaled MQE optimum needs hilbert_dim >= 2");
  const double scale = static_cast<double>(hilbert_dim - 1);

  // Work from whichever factor is better conditioned for the inverse square
  // root; the two forms agree analytically.
  const bool h_side = min_eigenvalue(helstrom.mat) >= min_eigenvalue(cost.mat);
  RealSymMatrix w(helstrom.dim());
  double t = 0.0;
  if (h_side) {
    RealSymMatrix s_inv = psd_function(helstrom.mat, PsdMap::inv_sqrt);
    RealSymMatrix b = sandwich(s_inv, cost.mat);
    t = psd_function(b, PsdMap::sqrt).trace();
    w = sandwich(s_inv, psd_function(b, PsdMap::inv_sqrt));
  } else {
    RealSymMatrix t_inv = psd_function(cost.mat, PsdMap::inv_sqrt);
    RealSymMatrix t_half = psd_function(cost.mat, PsdMap::sqrt);
    RealSymMatrix b = sandwich(t_half, psd_function(helstrom.mat, PsdMap::inv));
    RealSymMatrix b_sqrt = psd_function(b, PsdMap::sqrt);
    t = b_sqrt.trace();
    w = sandwich(t_inv, b_sqrt);
  }
  w *= t / scale;
  return {InfoMatrix(std::move(w), InfoKind::scaled_mqe), t * t / scale};
}

TargetCheck validate_target(const InfoMatrix& target, const InfoMatrix& helstrom) {
  require_square_pd_pair(target, helstrom);
  TargetCheck chk;
  chk.trace = trace_product(psd_function(helstrom.mat, PsdMap::inv), target.mat);
  chk.admissible =
      min_eigenvalue(target.mat) >= -kTol.psd_floor && chk.trace <= 1.0 + 1e-12;
  return chk;
}

RealSymMatrix mixed_qubit_helstrom_power(const BlochVector& theta, double s) {
  const double r2 = theta.dot(theta);
  if (r2 >= 1.0) raise(errc::boundary, "information matrix powers need an interior point");
  RealSymMatrix h = RealSymMatrix::identity(3);
  if (r2 == 0.0) return h;
  const double coeff = (std::pow(1.0 - r2, -s) - 1.0) / r2;  // uuᵀ weight / ‖θ‖²
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j)
      h.set_sym(i, j, h(i, j) + coeff * theta.r[i] * theta.r[j]);
  return h;
}

MixedQubitDesign design_mixed_qubit(const InfoMatrix& target, const BlochVector& theta0) {
  if (target.dim() != 3) raise(errc::shape, "mixed-qubit target must be 3x3");
  if (theta0.norm() >= 1.0)
    raise(errc::boundary, "mixed-qubit design requires an interior reference point");
  RealSymMatrix h = mixed_qubit_helstrom_power(theta0, 1.0);
  TargetCheck chk = validate_target(target, InfoMatrix(h, InfoKind::helstrom));
  if (!chk.admissible) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "target exceeds the information budget: tr(H^-1 G) = %.6g",
                  chk.trace);
    raise(errc::inadmissible_target, buf);
  }

  RealSymMatrix h_isqrt = mixed_qubit_helstrom_power(theta0, -0.5);
  RealSymMatrix h_sqrt = mixed_qubit_helstrom_power(theta0, 0.5);
  EigSym f = eig_sym(sandwich(h_isqrt, target.mat));

  MixedQubitDesign d;
  d.theta0 = theta0;
  for (std::size_t i = 0; i < 3; ++i) {
    d.gammas[i] = std::max(f.values[i], 0.0);
    d.eigvecs[i] = column(f, i);
    std::vector<double> g = h_sqrt.apply({d.eigvecs[i][0], d.eigvecs[i][1], d.eigvecs[i][2]});
    d.gnorms[i] = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    d.directions[i] =
        BlochVector(g[0] / d.gnorms[i], g[1] / d.gnorms[i], g[2] / d.gnorms[i]);
  }
  return d;
}

PureQubitDesign design_pure_qubit(const InfoMatrix& target, const std::vector<cplx>& psi0) {
  if (target.dim() != 2) raise(errc::shape, "pure-qubit target must be 2x2");
  if (psi0.size() != 2) raise(errc::shape, "reference state must be a qubit");
  double nrm = 0.0;
  for (const cplx& c : psi0) nrm += std::norm(c);
  if (std::abs(nrm - 1.0) > 1e-10)
    raise(errc::domain, "reference state must be normalized");
  const double trace = target(0, 0) + target(1, 1);
  if (min_eigenvalue(target.mat) < -kTol.psd_floor || trace > 1.0 + 1e-12) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "target exceeds the information budget: tr G = %.6g", trace);
    raise(errc::inadmissible_target, buf);
  }

  EigSym e = eig_sym(target.mat);
  PureQubitDesign d;
  d.psi0 = psi0;
  d.psi1 = orthogonal_spinor(psi0);
  d.probs = {std::max(e.values[1], 0.0), std::max(e.values[0], 0.0)};  // descending
  d.rotation = std::atan2(e.vectors[1][1], e.vectors[1][0]);

  std::vector<cplx> psi1p(2);
  const cplx phase = std::polar(1.0, d.rotation);
  for (std::size_t k = 0; k < 2; ++k) psi1p[k] = phase * d.psi1[k];
  ComplexMatrix cross = outer(d.psi0, psi1p);
  d.a1 = HermitianMatrix::from(cross + cross.adjoint(), 1e-12);
  d.a2 = HermitianMatrix::from(cplx(0.0, 1.0) * cross + cplx(0.0, -1.0) * cross.adjoint(),
                               1e-12);
  return d;
}

Povm realize_povm(const MixedQubitDesign& design) {
  std::vector<HermitianMatrix> elems;
  std::vector<std::string> labels;
  double used = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (design.gammas[i] <= kWeightFloor) continue;
    used += design.gammas[i];
    for (int sign : {+1, -1}) {
      elems.push_back(design.gammas[i] * spin_projector(design.directions[i].r, sign));
      labels.push_back(std::to_string(i + 1) + (sign > 0 ? "+" : "-"));
    }
  }
  if (1.0 - used > kWeightFloor) {
    elems.push_back((1.0 - used) * HermitianMatrix::identity(2));
    labels.push_back("id");
  }
  return make_povm(2, 1, std::move(elems), std::move(labels));
}

Povm realize_povm(const PureQubitDesign& design) {
  std::vector<HermitianMatrix> elems;
  std::vector<std::string> labels;
  const HermitianMatrix id = HermitianMatrix::identity(2);
  const std::array<const HermitianMatrix*, 2> obs{&design.a1, &design.a2};
  double used = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (design.probs[i] <= kWeightFloor) continue;
    used += design.probs[i];
    for (int sign : {+1, -1}) {
      elems.push_back(design.probs[i] * 0.5 *
                      (id + static_cast<double>(sign) * *obs[i]));
      labels.push_back("a" + std::to_string(i + 1) + (sign > 0 ? "+" : "-"));
    }
  }
  if (1.0 - used > kWeightFloor) {
    elems.push_back((1.0 - used) * id);
    labels.push_back("id");
  }
  return make_povm(2, 1, std::move(elems), std::move(labels));
}

Povm counterexample_povm() {
  std::vector<HermitianMatrix> elems;
  std::vector<std::string> labels;
  const std::array<std::array<double, 3>, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const char* names = "xyz";
  for (std::size_t a = 0; a < 3; ++a) {
    for (int sign : {+1, -1}) {
      HermitianMatrix p = spin_projector(axes[a], sign);
      elems.push_back(0.5 * tensor(p, p));
      labels.push_back(std::string(1, names[a]) + (sign > 0 ? "+" : "-"));
    }
  }
  const double s = std::sqrt(0.5);
  std::vector<cplx> singlet{0.0, cplx(s, 0.0), cplx(-s, 0.0), 0.0};
  elems.push_back(HermitianMatrix::from(outer(singlet, singlet), 1e-15));
  labels.push_back("singlet");
  return make_povm(4, 2, std::move(elems), std::move(labels));
}

nlohmann::json design_to_json(const MixedQubitDesign& design) {
  nlohmann::json j;
  j["theta0"] = design.theta0.to_vector();
  j["gammas"] = design.gammas;
  for (const BlochVector& m : design.directions)
    j["directions"].push_back(std::vector<double>{m.r[0], m.r[1], m.r[2]});
  return j;
}

MixedQubitDesign design_from_json(const nlohmann::json& j) {
  MixedQubitDesign d;
  d.theta0 = BlochVector::from_vector(j.at("theta0").get<std::vector<double>>());
  if (d.theta0.norm() >= 1.0)
    raise(errc::boundary, "designs are defined at interior reference points");
  auto gammas = j.at("gammas").get<std::vector<double>>();
  auto dirs = j.at("directions").get<std::vector<std::vector<double>>>();
  if (gammas.size() != 3 || dirs.size() != 3)
    raise(errc::shape, "design file must carry three weights and directions");

  // The chart frame is recoverable from the measurement axes: fᵢ is the unit
  // positive multiple of H^{−1/2}mᵢ, and gᵢ = H^{1/2}fᵢ is then collinear
  // with mᵢ again.
  RealSymMatrix h_isqrt = mixed_qubit_helstrom_power(d.theta0, -0.5);
  for (std::size_t i = 0; i < 3; ++i) {
    if (dirs[i].size() != 3) raise(errc::shape, "directions must be 3-vectors");
    d.gammas[i] = gammas[i];
    std::vector<double> f = h_isqrt.apply(dirs[i]);
    double fn = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
    for (double& v : f) v /= fn;
    d.eigvecs[i] = {f[0], f[1], f[2]};
    d.gnorms[i] = 1.0 / fn;
    double mn = std::sqrt(dirs[i][0] * dirs[i][0] + dirs[i][1] * dirs[i][1] +
                          dirs[i][2] * dirs[i][2]);
    if (std::abs(mn - 1.0) > 1e-9) raise(errc::domain, "directions must be unit vectors");
    d.directions[i] = BlochVector(dirs[i][0] / mn, dirs[i][1] / mn, dirs[i][2] / mn);
  }
  return d;
}

}  // namespace qcrb
