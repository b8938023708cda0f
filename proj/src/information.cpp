#include "qcrb/information.hpp"

#include <cmath>
#include <string>

namespace qcrb {

HermitianMatrix sld(const HermitianMatrix& rho, const HermitianMatrix& drho,
                    double support_floor) {
  if (rho.dim() != drho.dim()) raise(errc::shape, "sld: dimension mismatch");
  const std::size_t n = rho.dim();
  const EigHermitian e = eig_hermitian(rho);

  // Transform dρ into the eigenbasis: B = V† dρ V.
  ComplexMatrix b = e.vectors.adjoint() * drho.matrix() * e.vectors;

  ComplexMatrix lam(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const double ps = std::max(e.values[k], 0.0) + std::max(e.values[l], 0.0);
      if (ps > support_floor) {
        lam(k, l) = 2.0 * b(k, l) / ps;
      } else {
        if (std::abs(b(k, l)) > 1e-9)
          raise(errc::singular_model,
                "sld: derivative weight " + std::to_string(std::abs(b(k, l))) +
                    " on a null eigenvalue pair (support floor " +
                    std::to_string(support_floor) + ")");
        lam(k, l) = 0.0;
      }
    }

  ComplexMatrix out = e.vectors * lam * e.vectors.adjoint();
  return HermitianMatrix::from(out, 1e-9);
}

std::vector<HermitianMatrix> sld_set(const ParametricModel& model,
                                     const std::vector<double>& theta) {
  if (!model.in_domain(theta)) raise(errc::domain, "sld_set: parameter outside the model domain");
  const HermitianMatrix rho = model.rho(theta);
  std::vector<HermitianMatrix> lams;
  lams.reserve(model.param_dim);
  for (std::size_t i = 0; i < model.param_dim; ++i) lams.push_back(sld(rho, model.drho(theta, i)));
  return lams;
}

InfoMatrix helstrom_matrix(const ParametricModel& model, const std::vector<double>& theta) {
  const std::vector<HermitianMatrix> lams = sld_set(model, theta);
  const HermitianMatrix rho = model.rho(theta);
  const std::size_t p = model.param_dim;
  RealSymMatrix h(p);
  for (std::size_t i = 0; i < p; ++i) {
    const ComplexMatrix rho_li = rho.matrix() * lams[i].matrix();
    for (std::size_t j = i; j < p; ++j) {
      // tr ρ(λᵢλⱼ + λⱼλᵢ)/2 = Re tr(ρ λᵢ λⱼ).
      const ComplexMatrix prod = rho_li * lams[j].matrix();
      h.set_sym(i, j, prod.trace().real());
    }
  }
  return {h, InfoKind::helstrom};
}

InfoMatrix fisher_information(const Povm& m, const ParametricModel& model,
                              const std::vector<double>& theta, std::size_t n_copies) {
  if (m.copies != n_copies)
    raise(errc::shape, "fisher_information: POVM copy count does not match n_copies");
  const TensorPowerState st = tensor_power_state(model, theta, n_copies);
  if (st.rho.dim() != m.dim)
    raise(errc::shape, "fisher_information: POVM dimension does not match the model power");

  const std::size_t p = model.param_dim;
  RealSymMatrix info(p);
  std::vector<double> nums(p);
  for (std::size_t xi = 0; xi < m.elements.size(); ++xi) {
    const HermitianMatrix& el = m.elements[xi];
    const double prob = real_inner(st.rho, el);
    for (std::size_t i = 0; i < p; ++i) nums[i] = real_inner(st.drho[i], el);

    if (prob <= kTol.psd_floor) {
      bool live = false;
      for (double v : nums)
        if (std::abs(v) > 1e-9) live = true;
      if (live)
        raise(errc::singular_outcome,
              "fisher_information: outcome '" + m.labels[xi] +
                  "' has vanishing probability but carries first-order information");
      continue;
    }
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j)
        info.set_sym(i, j, info(i, j) + nums[i] * nums[j] / prob);
  }
  return {info, InfoKind::fisher};
}

double gill_massar_trace(const InfoMatrix& helstrom, const InfoMatrix& fisher) {
  if (helstrom.dim() != fisher.dim())
    raise(errc::shape, "gill_massar_trace: dimension mismatch");
  const RealSymMatrix hinv = psd_function(helstrom.mat, PsdMap::inv);
  return trace_product(hinv, fisher.mat);
}

BoundCheck helstrom_bound_check(const InfoMatrix& fisher, const InfoMatrix& helstrom,
                                std::size_t n_copies) {
  if (helstrom.dim() != fisher.dim())
    raise(errc::shape, "helstrom_bound_check: dimension mismatch");
  RealSymMatrix gap = helstrom.mat * static_cast<double>(n_copies) - fisher.mat;
  BoundCheck r;
  r.min_eigenvalue = min_eigenvalue(gap);
  r.holds = r.min_eigenvalue >= -1e-9;
  return r;
}

PartialTraceBound partial_trace_bound(const Povm& m, const ParametricModel& model,
                                      const std::vector<double>& theta,
                                      const std::vector<std::size_t>& subset,
                                      const HermitianMatrix& projector) {
  if (subset.empty()) raise(errc::domain, "partial_trace_bound: empty parameter subset");
  for (std::size_t i : subset)
    if (i >= model.param_dim)
      raise(errc::domain, "partial_trace_bound: subset index out of range");
  if (projector.dim() != model.hilbert_dim)
    raise(errc::invalid_projector, "partial_trace_bound: projector dimension mismatch");

  // Π must be an orthogonal projector…
  const ComplexMatrix pp = projector.matrix() * projector.matrix();
  if ((pp - projector.matrix()).frobenius_norm() > 1e-10)
    raise(errc::invalid_projector, "partial_trace_bound: matrix is not idempotent");
  // …commuting with ρ…
  const HermitianMatrix rho = model.rho(theta);
  const ComplexMatrix comm =
      projector.matrix() * rho.matrix() - rho.matrix() * projector.matrix();
  if (comm.frobenius_norm() > 1e-10)
    raise(errc::invalid_projector, "partial_trace_bound: projector does not commute with rho");
  // …whose range carries the subset derivatives.
  for (std::size_t i : subset) {
    const HermitianMatrix d = model.drho(theta, i);
    const ComplexMatrix sandwiched = projector.matrix() * d.matrix() * projector.matrix();
    if ((sandwiched - d.matrix()).frobenius_norm() > 1e-10)
      raise(errc::invalid_projector,
            "partial_trace_bound: projector does not support derivative " + std::to_string(i));
  }

  const InfoMatrix h = helstrom_matrix(model, theta);
  const RealSymMatrix hinv = psd_function(h.mat, PsdMap::inv);
  const InfoMatrix info = fisher_information(m, model, theta, m.copies);

  PartialTraceBound out;
  for (std::size_t i : subset)
    for (std::size_t j : subset) out.lhs += hinv(i, j) * info(i, j);
  out.bound = static_cast<double>(m.copies) * (projector.trace() - 1.0);
  return out;
}

RefinementCheck refinement_monotonicity_check(const Povm& m, const ParametricModel& model,
                                              const std::vector<double>& theta) {
  RefinementCheck r;
  r.before = fisher_information(m, model, theta, m.copies);
  r.after = fisher_information(refine_to_rank1(m), model, theta, m.copies);
  r.holds = min_eigenvalue(r.after.mat - r.before.mat) >= -1e-9;
  return r;
}

}  // namespace qcrb
