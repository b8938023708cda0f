#include "qcrb/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace qcrb {

BlochVector BlochVector::from_vector(const std::vector<double>& v) {
  if (v.size() != 3) raise(errc::shape, "BlochVector: expected 3 components");
  return {v[0], v[1], v[2]};
}

HermitianMatrix pauli_x() {
  HermitianMatrix m(2);
  m.set(0, 1, 1.0);
  return m;
}

HermitianMatrix pauli_y() {
  HermitianMatrix m(2);
  m.set(0, 1, cplx(0.0, -1.0));
  return m;
}

HermitianMatrix pauli_z() {
  HermitianMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, -1.0);
  return m;
}

HermitianMatrix pauli(std::size_t axis) {
  switch (axis) {
    case 0: return pauli_x();
    case 1: return pauli_y();
    case 2: return pauli_z();
    default: raise(errc::domain, "pauli: axis must be 0, 1 or 2");
  }
}

HermitianMatrix density_from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-12)
    raise(errc::domain, "density_from_bloch: Bloch vector norm " + std::to_string(r.norm()) +
                            " exceeds 1");
  HermitianMatrix m(2);
  m.set(0, 0, 0.5 * (1.0 + r.r[2]));
  m.set(1, 1, 0.5 * (1.0 - r.r[2]));
  m.set(0, 1, 0.5 * cplx(r.r[0], -r.r[1]));
  return m;
}

HermitianMatrix spin_projector(const std::array<double, 3>& m, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  HermitianMatrix p(2);
  p.set(0, 0, 0.5 * (1.0 + s * m[2]));
  p.set(1, 1, 0.5 * (1.0 - s * m[2]));
  p.set(0, 1, 0.5 * s * cplx(m[0], -m[1]));
  return p;
}

std::vector<cplx> spinor(const BlochVector& n) {
  // (cos η/2, sin η/2 · e^{iφ}) expressed directly from the components.
  const double nz = n.r[2];
  if (nz < -1.0 + 1e-14) return {cplx(0.0, 0.0), cplx(1.0, 0.0)};
  const double c = std::sqrt(0.5 * (1.0 + nz));
  const cplx xy(n.r[0], n.r[1]);
  return {cplx(c, 0.0), xy / (2.0 * c)};
}

std::vector<cplx> orthogonal_spinor(const std::vector<cplx>& psi0) {
  if (psi0.size() != 2) raise(errc::shape, "orthogonal_spinor: expected a 2-spinor");
  return {-std::conj(psi0[1]), std::conj(psi0[0])};
}

ParametricModel full_mixed_qubit() {
  ParametricModel m;
  m.hilbert_dim = 2;
  m.param_dim = 3;
  m.chart_name = "full_mixed_qubit";
  m.rho = [](const std::vector<double>& th) {
    return density_from_bloch(BlochVector::from_vector(th));
  };
  m.drho = [](const std::vector<double>&, std::size_t i) {
    if (i >= 3) raise(errc::domain, "full_mixed_qubit: parameter index out of range");
    return 0.5 * pauli(i);
  };
  m.in_domain = [](const std::vector<double>& th) {
    return th.size() == 3 && BlochVector::from_vector(th).norm() < 1.0;
  };
  return m;
}

namespace {

std::vector<cplx> scaled(const std::vector<cplx>& v, cplx s) {
  std::vector<cplx> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return r;
}

std::vector<cplx> added(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

// ρ = uu†/⟨u|u⟩ and its exact parameter derivative given u and ∂u.
HermitianMatrix normalized_projector(const std::vector<cplx>& u) {
  ComplexMatrix p = outer(u, u);
  p *= cplx(1.0 / norm2(u), 0.0);
  return HermitianMatrix::from(p, 1e-9);
}

HermitianMatrix normalized_projector_derivative(const std::vector<cplx>& u,
                                                const std::vector<cplx>& du) {
  const double n = norm2(u);
  double dn = 0.0;  // ∂⟨u|u⟩ = 2 Re ⟨u|∂u⟩
  for (std::size_t i = 0; i < u.size(); ++i) dn += 2.0 * std::real(std::conj(u[i]) * du[i]);
  ComplexMatrix a = outer(du, u) + outer(u, du);
  a *= cplx(1.0 / n, 0.0);
  ComplexMatrix b = outer(u, u);
  b *= cplx(dn / (n * n), 0.0);
  return HermitianMatrix::from(a - b, 1e-9);
}

}  // namespace

ParametricModel pure_qubit_polar() {
  ParametricModel m;
  m.hilbert_dim = 2;
  m.param_dim = 2;
  m.chart_name = "pure_qubit_polar";
  auto state = [](const std::vector<double>& th) {
    const double eta = th[0], phi = th[1];
    return std::vector<cplx>{cplx(std::cos(0.5 * eta), 0.0),
                             std::sin(0.5 * eta) * std::exp(cplx(0.0, phi))};
  };
  m.rho = [state](const std::vector<double>& th) {
    if (th.size() != 2) raise(errc::shape, "pure_qubit_polar: expected 2 parameters");
    return normalized_projector(state(th));
  };
  m.drho = [state](const std::vector<double>& th, std::size_t i) {
    if (th.size() != 2) raise(errc::shape, "pure_qubit_polar: expected 2 parameters");
    const double eta = th[0], phi = th[1];
    std::vector<cplx> du(2);
    if (i == 0) {
      du[0] = cplx(-0.5 * std::sin(0.5 * eta), 0.0);
      du[1] = 0.5 * std::cos(0.5 * eta) * std::exp(cplx(0.0, phi));
    } else if (i == 1) {
      du[0] = 0.0;
      du[1] = cplx(0.0, 1.0) * std::sin(0.5 * eta) * std::exp(cplx(0.0, phi));
    } else {
      raise(errc::domain, "pure_qubit_polar: parameter index out of range");
    }
    return normalized_projector_derivative(state(th), du);
  };
  m.in_domain = [](const std::vector<double>& th) {
    return th.size() == 2 && th[0] > 0.0 && th[0] < 3.14159265358979323846;
  };
  return m;
}

ParametricModel pure_qubit_tangent(const std::vector<cplx>& psi0, const std::vector<cplx>& psi1) {
  if (psi0.size() != 2 || psi1.size() != 2)
    raise(errc::shape, "pure_qubit_tangent: expected 2-spinors");
  cplx ov = std::conj(psi0[0]) * psi1[0] + std::conj(psi0[1]) * psi1[1];
  if (std::abs(ov) > 1e-10 || std::abs(norm2(psi0) - 1.0) > 1e-10 ||
      std::abs(norm2(psi1) - 1.0) > 1e-10)
    raise(errc::domain, "pure_qubit_tangent: reference spinors must be orthonormal");

  ParametricModel m;
  m.hilbert_dim = 2;
  m.param_dim = 2;
  m.chart_name = "pure_qubit_tangent";
  auto u_of = [psi0, psi1](const std::vector<double>& th) {
    const cplx c(0.5 * th[0], 0.5 * th[1]);
    return added(psi0, scaled(psi1, c));
  };
  m.rho = [u_of](const std::vector<double>& th) {
    if (th.size() != 2) raise(errc::shape, "pure_qubit_tangent: expected 2 parameters");
    return normalized_projector(u_of(th));
  };
  m.drho = [u_of, psi1](const std::vector<double>& th, std::size_t i) {
    if (th.size() != 2) raise(errc::shape, "pure_qubit_tangent: expected 2 parameters");
    if (i >= 2) raise(errc::domain, "pure_qubit_tangent: parameter index out of range");
    const cplx dc = (i == 0) ? cplx(0.5, 0.0) : cplx(0.0, 0.5);
    return normalized_projector_derivative(u_of(th), scaled(psi1, dc));
  };
  m.in_domain = [](const std::vector<double>& th) { return th.size() == 2; };
  return m;
}

ParametricModel pure_qudit_tangent(std::size_t d) {
  if (d < 2) raise(errc::domain, "pure_qudit_tangent: dimension must be at least 2");
  ParametricModel m;
  m.hilbert_dim = d;
  m.param_dim = 2 * (d - 1);
  m.chart_name = "pure_qudit_tangent";
  auto u_of = [d](const std::vector<double>& th) {
    std::vector<cplx> u(d, cplx(0.0, 0.0));
    u[0] = 1.0;
    for (std::size_t k = 1; k < d; ++k)
      u[k] = cplx(th[2 * (k - 1)], -th[2 * (k - 1) + 1]);
    return u;
  };
  m.rho = [u_of, d](const std::vector<double>& th) {
    if (th.size() != 2 * (d - 1)) raise(errc::shape, "pure_qudit_tangent: wrong parameter count");
    return normalized_projector(u_of(th));
  };
  m.drho = [u_of, d](const std::vector<double>& th, std::size_t i) {
    if (th.size() != 2 * (d - 1)) raise(errc::shape, "pure_qudit_tangent: wrong parameter count");
    if (i >= 2 * (d - 1)) raise(errc::domain, "pure_qudit_tangent: parameter index out of range");
    std::vector<cplx> du(d, cplx(0.0, 0.0));
    const std::size_t k = i / 2 + 1;
    du[k] = (i % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, -1.0);
    return normalized_projector_derivative(u_of(th), du);
  };
  m.in_domain = [d](const std::vector<double>& th) { return th.size() == 2 * (d - 1); };
  return m;
}

std::vector<HermitianMatrix> gell_mann_directions(std::size_t d) {
  std::vector<HermitianMatrix> t;
  // Off-diagonal pairs |k⟩⟨l| + |l⟩⟨k| and i|k⟩⟨l| − i|l⟩⟨k| for k < l.
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = k + 1; l < d; ++l) {
      HermitianMatrix re(d);
      re.set(k, l, 1.0);
      t.push_back(re);
      HermitianMatrix im(d);
      im.set(k, l, cplx(0.0, -1.0));
      t.push_back(im);
    }
  // Diagonal traceless directions diag(1,…,1,−m,0,…)/√(m(m+1)/2), tr T² = 2.
  for (std::size_t mlev = 1; mlev < d; ++mlev) {
    HermitianMatrix dg(d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(mlev) * (mlev + 1)));
    for (std::size_t i = 0; i < mlev; ++i) dg.set(i, i, norm);
    dg.set(mlev, mlev, -norm * static_cast<double>(mlev));
    t.push_back(dg);
  }
  return t;
}

ParametricModel full_mixed_qudit(const HermitianMatrix& rho0) {
  const std::size_t d = rho0.dim();
  if (std::abs(rho0.trace() - 1.0) > 1e-10)
    raise(errc::domain, "full_mixed_qudit: base state must have unit trace");
  if (eig_hermitian(rho0).values.front() <= kTol.psd_floor)
    raise(errc::domain, "full_mixed_qudit: base state must be full rank");

  auto dirs = gell_mann_directions(d);
  ParametricModel m;
  m.hilbert_dim = d;
  m.param_dim = d * d - 1;
  m.chart_name = "full_mixed_qudit";
  m.rho = [rho0, dirs, d](const std::vector<double>& th) {
    if (th.size() != d * d - 1) raise(errc::shape, "full_mixed_qudit: wrong parameter count");
    HermitianMatrix r = rho0;
    for (std::size_t i = 0; i < th.size(); ++i)
      if (th[i] != 0.0) r += th[i] * dirs[i];
    return r;
  };
  m.drho = [dirs, d](const std::vector<double>& th, std::size_t i) {
    if (th.size() != d * d - 1) raise(errc::shape, "full_mixed_qudit: wrong parameter count");
    if (i >= dirs.size()) raise(errc::domain, "full_mixed_qudit: parameter index out of range");
    return dirs[i];
  };
  m.in_domain = [rho = m.rho, d](const std::vector<double>& th) {
    if (th.size() != d * d - 1) return false;
    return eig_hermitian(rho(th)).values.front() > 0.0;
  };
  return m;
}

Povm make_povm(std::size_t dim, std::size_t copies, std::vector<HermitianMatrix> elements,
               std::vector<std::string> labels) {
  if (elements.empty()) raise(errc::domain, "make_povm: POVM needs at least one element");
  for (const auto& e : elements)
    if (e.dim() != dim) raise(errc::shape, "make_povm: element dimension mismatch");
  if (labels.empty()) {
    labels.resize(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) labels[i] = std::to_string(i);
  } else if (labels.size() != elements.size()) {
    raise(errc::shape, "make_povm: one label per element required");
  }
  Povm m;
  m.dim = dim;
  m.copies = copies;
  m.elements = std::move(elements);
  m.labels = std::move(labels);
  return m;
}

PovmReport validate_povm(const Povm& m) {
  PovmReport rep;
  HermitianMatrix sum(m.dim);
  rep.element_min_eigenvalues.reserve(m.elements.size());
  for (const auto& e : m.elements) {
    rep.element_min_eigenvalues.push_back(eig_hermitian(e).values.front());
    sum += e;
  }
  rep.completeness_residual = (sum - HermitianMatrix::identity(m.dim)).frobenius_norm();
  bool psd_ok = true;
  for (double v : rep.element_min_eigenvalues)
    if (v < -kTol.psd_floor) psd_ok = false;
  rep.pass = psd_ok && rep.completeness_residual <= kTol.reconstruction;
  return rep;
}

std::vector<double> outcome_distribution(const Povm& m, const HermitianMatrix& rho) {
  if (rho.dim() != m.dim) raise(errc::shape, "outcome_distribution: dimension mismatch");
  std::vector<double> p(m.elements.size());
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    double v = real_inner(rho, m.elements[k]);
    if (v < -1e-12)
      raise(errc::domain, "outcome_distribution: probability " + std::to_string(v) +
                              " below the clamp window");
    p[k] = std::max(v, 0.0);
  }
  double s = 0.0;
  for (double v : p) s += v;
  if (std::abs(s - 1.0) > 1e-10)
    raise(errc::domain, "outcome_distribution: probabilities sum to " + std::to_string(s));
  for (double& v : p) v /= s;
  return p;
}

Povm refine_to_rank1(const Povm& m) {
  std::vector<HermitianMatrix> out;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m.elements.size(); ++k) {
    const EigHermitian e = eig_hermitian(m.elements[k]);
    std::size_t part = 0;
    for (std::size_t j = 0; j < e.values.size(); ++j) {
      const double mu = e.values[j];
      if (mu <= 1e-12) continue;  // discard null directions
      std::vector<cplx> v(m.dim);
      for (std::size_t i = 0; i < m.dim; ++i) v[i] = e.vectors(i, j);
      ComplexMatrix piece = outer(v, v);
      piece *= cplx(mu, 0.0);
      out.push_back(HermitianMatrix::from(piece, 1e-9));
      labels.push_back(m.labels[k] + "." + std::to_string(part++));
    }
  }
  return make_povm(m.dim, m.copies, std::move(out), std::move(labels));
}

TensorPowerState tensor_power_state(const ParametricModel& model, const std::vector<double>& theta,
                                    std::size_t n_copies, std::size_t cap) {
  if (n_copies == 0) raise(errc::domain, "tensor_power_state: need at least one copy");
  if (!model.in_domain(theta))
    raise(errc::domain, "tensor_power_state: parameter outside the model domain");
  HermitianMatrix rho = model.rho(theta);
  std::vector<HermitianMatrix> drho(model.param_dim);
  for (std::size_t i = 0; i < model.param_dim; ++i) drho[i] = model.drho(theta, i);

  TensorPowerState st;
  st.rho = rho;
  st.drho = drho;
  for (std::size_t n = 2; n <= n_copies; ++n) {
    // Leibniz rule: D_i^(n) = D_i^(n−1) ⊗ ρ + ρ^(n−1) ⊗ ∂ᵢρ.
    std::vector<HermitianMatrix> next(model.param_dim);
    for (std::size_t i = 0; i < model.param_dim; ++i)
      next[i] = tensor(st.drho[i], rho, cap) + tensor(st.rho, drho[i], cap);
    st.drho = std::move(next);
    st.rho = tensor(st.rho, rho, cap);
  }
  return st;
}

Povm product_povm(const std::vector<Povm>& factors, std::size_t cap) {
  if (factors.empty()) raise(errc::domain, "product_povm: need at least one factor");
  Povm acc = factors[0];
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Povm& b = factors[f];
    std::vector<HermitianMatrix> elements;
    std::vector<std::string> labels;
    elements.reserve(acc.elements.size() * b.elements.size());
    for (std::size_t i = 0; i < acc.elements.size(); ++i)
      for (std::size_t j = 0; j < b.elements.size(); ++j) {
        elements.push_back(tensor(acc.elements[i], b.elements[j], cap));
        labels.push_back(acc.labels[i] + "," + b.labels[j]);
      }
    acc = make_povm(acc.dim * b.dim, acc.copies + b.copies, std::move(elements),
                    std::move(labels));
  }
  return acc;
}

std::size_t sample_outcome(const Povm& m, const HermitianMatrix& rho, RngStream& rng) {
  const std::vector<double> p = outcome_distribution(m, rho);
  return rng.categorical(p);
}

nlohmann::json povm_to_json(const Povm& m) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : m.elements) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim; ++i)
      for (std::size_t j = 0; j < m.dim; ++j)
        rows.push_back({e(i, j).real(), e(i, j).imag()});
    elements.push_back(rows);
  }
  return nlohmann::json{{"dim", m.dim}, {"copies", m.copies}, {"elements", elements},
                        {"labels", m.labels}};
}

Povm povm_from_json(const nlohmann::json& j) {
  if (!j.contains("dim") || !j.contains("elements"))
    raise(errc::config, "povm_from_json: need 'dim' and 'elements' fields");
  const std::size_t dim = j.at("dim").get<std::size_t>();
  const std::size_t copies = j.value("copies", std::size_t{1});
  std::vector<HermitianMatrix> elements;
  for (const auto& flat : j.at("elements")) {
    if (flat.size() != dim * dim)
      raise(errc::config, "povm_from_json: element has wrong entry count");
    ComplexMatrix e(dim, dim);
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t jj = 0; jj < dim; ++jj, ++k)
        e(i, jj) = cplx(flat[k][0].get<double>(), flat[k][1].get<double>());
    elements.push_back(HermitianMatrix::from(e, 1e-9));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return make_povm(dim, copies, std::move(elements), std::move(labels));
}

}  // namespace qcrb
