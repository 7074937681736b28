#pragma once

#include "luorbit/numerics.hpp"
#include "luorbit/states.hpp"

#include <string>
#include <vector>

namespace luorbit {

/// Tangent vector of the local unitary group: one anti-Hermitian d_i x d_i
/// matrix per party.
struct LocalAlgebraElement {
  std::vector<ComplexMatrix> parts;
};

enum class OrbitClass { max_dimensional, degenerate };

inline std::string to_string(OrbitClass c) {
  return c == OrbitClass::max_dimensional ? "max_dimensional" : "degenerate";
}

struct StabilizerReport {
  PartyDims dims;
  int orbit_dim = 0;
  int stabilizer_dim = 0;
  std::vector<LocalAlgebraElement> kernel_basis;
  double sv_gap = std::numeric_limits<double>::infinity();
  bool gap_warning = false;
  bool center_only = false;
  OrbitClass classification = OrbitClass::degenerate;
  double residual_max = 0.0;  // max ||[A,w]||_F / ||w||_F over kernel elements
};

/// I kron ... kron b kron ... kron I with b in the given party slot.
inline ComplexMatrix embed_in_slot(const ComplexMatrix& b, const PartyDims& dims, int slot) {
  dims.validate();
  if (slot < 0 || slot >= dims.parties()) {
    throw std::invalid_argument("embed_in_slot: slot out of range");
  }
  if (b.rows() != dims.dims[slot] || b.cols() != dims.dims[slot]) {
    throw std::invalid_argument("embed_in_slot: block size does not match party dimension");
  }
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < slot; ++i) left *= dims.dims[i];
  for (int i = slot + 1; i < dims.parties(); ++i) right *= dims.dims[i];
  return kron(kron(ComplexMatrix::Identity(left, left), b),
              ComplexMatrix::Identity(right, right));
}

/// Sum of the per-party embeddings of a local algebra element.
inline ComplexMatrix local_element_to_global(const LocalAlgebraElement& e, const PartyDims& dims) {
  if (static_cast<int>(e.parts.size()) != dims.parties()) {
    throw std::invalid_argument("local_element_to_global: party count mismatch");
  }
  const Eigen::Index d = dims.total();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < dims.parties(); ++i) out += embed_in_slot(e.parts[i], dims, i);
  return out;
}

/// Orthonormal basis of the center subspace: element i has iI/sqrt(d_i) in
/// slot i and zeros elsewhere. These always stabilize.
inline std::vector<LocalAlgebraElement> center_subspace(const PartyDims& dims) {
  dims.validate();
  std::vector<LocalAlgebraElement> out;
  for (int i = 0; i < dims.parties(); ++i) {
    LocalAlgebraElement e;
    for (int j = 0; j < dims.parties(); ++j) {
      const int dj = dims.dims[j];
      if (j == i) {
        e.parts.push_back(Complex(0.0, 1.0 / std::sqrt(double(dj))) *
                          ComplexMatrix::Identity(dj, dj));
      } else {
        e.parts.push_back(ComplexMatrix::Zero(dj, dj));
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace detail {

/// Coordinates of the normalized center elements in the stacked
/// antihermitian_basis layout: block i carries 1/sqrt(d_i) on the d_i
/// diagonal-element coefficients.
inline RealMatrix center_coordinate_vectors(const PartyDims& dims) {
  RealMatrix c = RealMatrix::Zero(dims.sum_squares(), dims.parties());
  Eigen::Index offset = 0;
  for (int i = 0; i < dims.parties(); ++i) {
    const int d = dims.dims[i];
    for (int j = 0; j < d; ++j) c(offset + j, i) = 1.0 / std::sqrt(double(d));
    offset += static_cast<Eigen::Index>(d) * d;
  }
  return c;
}

}  // namespace detail

/// Linearization of w -> U w U^dag at the identity of the local unitary
/// group: column (i, j) holds hermitian_to_real_coords([embed(B_ij), w]) for
/// B_ij the j-th element of antihermitian_basis(d_i). Party blocks are laid
/// out in order, so the matrix is D^2 x sum(d_i^2).
inline RealMatrix action_matrix(const ComplexMatrix& w, const PartyDims& dims) {
  dims.validate();
  require_hermitian(w, "action_matrix");
  const Eigen::Index d = dims.total();
  if (w.rows() != d) {
    throw std::invalid_argument("action_matrix: operator size does not match dims");
  }
  RealMatrix m(d * d, dims.sum_squares());
  Eigen::Index col = 0;
  for (int slot = 0; slot < dims.parties(); ++slot) {
    for (const auto& b : antihermitian_basis(dims.dims[slot])) {
      const ComplexMatrix bemb = embed_in_slot(b, dims, slot);
      m.col(col++) = hermitian_to_real_coords(ComplexMatrix(bemb * w - w * bemb));
    }
  }
  return m;
}

/// Stabilizer Lie algebra of w under the local unitary action: kernel of the
/// action matrix. orbit_dim is the rank; kernel vectors come back reshaped
/// as per-party tuples, each re-verified against ||[A,w]|| <= 1e-8 ||w||.
/// center_only holds iff the kernel spans exactly the k-dim center subspace.
inline StabilizerReport stabilize(const ComplexMatrix& w, const PartyDims& dims,
                                  const TolerancePolicy& tol = {}) {
  const RealMatrix m = action_matrix(w, dims);
  const RankReport kr = kernel(m, tol);

  StabilizerReport rep;
  rep.dims = dims;
  rep.orbit_dim = static_cast<int>(kr.rank);
  rep.stabilizer_dim = static_cast<int>(kr.kernel_dim());
  rep.sv_gap = kr.gap;
  rep.gap_warning = kr.gap_warning;

  std::vector<std::vector<ComplexMatrix>> bases;
  for (int d : dims.dims) bases.push_back(antihermitian_basis(d));

  const double wnorm = w.norm();
  for (Eigen::Index c = 0; c < kr.kernel_basis.cols(); ++c) {
    LocalAlgebraElement e;
    Eigen::Index offset = 0;
    for (int i = 0; i < dims.parties(); ++i) {
      const int d = dims.dims[i];
      ComplexMatrix part = ComplexMatrix::Zero(d, d);
      for (int j = 0; j < d * d; ++j) part += kr.kernel_basis(offset + j, c) * bases[i][j];
      e.parts.push_back(std::move(part));
      offset += static_cast<Eigen::Index>(d) * d;
    }
    const ComplexMatrix a = local_element_to_global(e, dims);
    const double res = (a * w - w * a).norm();
    rep.residual_max = std::max(rep.residual_max, wnorm > 0.0 ? res / wnorm : res);
    rep.kernel_basis.push_back(std::move(e));
  }
  if (wnorm > 0.0 && rep.residual_max > 1e-8) rep.gap_warning = true;

  rep.center_only = rep.stabilizer_dim == dims.parties();
  if (rep.center_only) {
    const RealMatrix c = detail::center_coordinate_vectors(dims);
    for (Eigen::Index i = 0; i < kr.kernel_basis.cols(); ++i) {
      const RealVector v = kr.kernel_basis.col(i);
      if ((v - c * (c.transpose() * v)).norm() >= 1e-8) {
        rep.center_only = false;
        break;
      }
    }
  }
  rep.classification = rep.orbit_dim == dims.sum_squares() - dims.parties()
                           ? OrbitClass::max_dimensional
                           : OrbitClass::degenerate;
  return rep;
}

inline StabilizerReport stabilize(const DensityMatrix& rho, const TolerancePolicy& tol = {}) {
  return stabilize(rho.matrix, rho.dims, tol);
}

inline int orbit_dimension(const ComplexMatrix& w, const PartyDims& dims,
                           const TolerancePolicy& tol = {}) {
  return stabilize(w, dims, tol).orbit_dim;
}

inline int orbit_dimension(const DensityMatrix& rho, const TolerancePolicy& tol = {}) {
  return stabilize(rho, tol).orbit_dim;
}

/// Relative residual ||(kron u_i) w (kron u_i)^dag - w||_F / ||w||_F of a
/// candidate discrete stabilizer element. Residual < 1e-10 is the usual
/// membership reading. Each u_i must be unitary to 1e-10.
inline double check_group_element(const ComplexMatrix& w, const std::vector<ComplexMatrix>& us) {
  require_hermitian(w, "check_group_element");
  if (us.empty()) {
    throw std::invalid_argument("check_group_element: need at least one unitary");
  }
  ComplexMatrix u = ComplexMatrix::Identity(1, 1);
  for (size_t i = 0; i < us.size(); ++i) {
    const auto& ui = us[i];
    if (ui.rows() != ui.cols() || ui.rows() < 1) {
      throw std::invalid_argument("check_group_element: unitary " + std::to_string(i + 1) +
                                  " is not square");
    }
    detail::require_finite(ui, "check_group_element");
    const double defect =
        (ui.adjoint() * ui - ComplexMatrix::Identity(ui.rows(), ui.cols())).norm();
    if (defect > 1e-10 * std::sqrt(double(ui.rows()))) {
      throw std::invalid_argument("check_group_element: matrix " + std::to_string(i + 1) +
                                  " is not unitary (defect " + detail::format_double(defect) +
                                  ")");
    }
    u = kron(u, ui);
  }
  if (u.rows() != w.rows()) {
    throw std::invalid_argument("check_group_element: unitary sizes do not match the operator");
  }
  const double wnorm = w.norm();
  if (wnorm == 0.0) return 0.0;
  return (u * w * u.adjoint() - w).norm() / wnorm;
}

}  // namespace luorbit
