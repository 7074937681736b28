#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace luorbit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Rank decisions: singular values above relative_cutoff * sigma_max are
/// retained. A retained/discarded ratio below min_gap_warn marks the spectrum
/// as ambiguous.
struct TolerancePolicy {
  double relative_cutoff = 1e-9;
  double min_gap_warn = 1e4;

  void validate() const {
    if (!(relative_cutoff > 0.0 && relative_cutoff < 1.0)) {
      throw std::invalid_argument("TolerancePolicy: relative_cutoff must lie in (0,1), got " +
                                  std::to_string(relative_cutoff));
    }
  }
};

/// Numerical rank/kernel report. kernel_basis columns are orthonormal and
/// span the numerical null space; singular_values are descending; gap is
/// smallest-retained / largest-discarded (+inf if nothing was discarded or
/// the matrix is zero).
template <typename Scalar>
struct RankReportT {
  Eigen::Index rank = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kernel_basis;
  RealVector singular_values;
  double gap = std::numeric_limits<double>::infinity();
  bool gap_warning = false;

  Eigen::Index kernel_dim() const { return kernel_basis.cols(); }
};

using RankReport = RankReportT<double>;
using ComplexRankReport = RankReportT<Complex>;

namespace detail {

/// Shortest round-trip decimal form; infinities print as "inf"/"-inf".
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <typename Mat>
void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

template <typename Mat>
RankReportT<typename Mat::Scalar> kernel_impl(const Mat& m, const TolerancePolicy& tol) {
  tol.validate();
  if (m.rows() == 0 || m.cols() == 0) {
    throw std::invalid_argument("kernel: empty matrix");
  }
  require_finite(m, "kernel");

  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;

  RankReportT<typename Mat::Scalar> rep;
  rep.singular_values = sv;
  if (sigma_max > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > tol.relative_cutoff * sigma_max) ++rep.rank;
    }
  }
  rep.kernel_basis = svd.matrixV().rightCols(m.cols() - rep.rank);
  if (rep.rank > 0 && rep.rank < sv.size() && sv(rep.rank) > 0.0) {
    rep.gap = sv(rep.rank - 1) / sv(rep.rank);
  }
  rep.gap_warning = rep.gap < tol.min_gap_warn;
  return rep;
}

}  // namespace detail

inline double hermiticity_residual(const ComplexMatrix& h) {
  return (h - h.adjoint()).norm();
}

inline void require_hermitian(const ComplexMatrix& h, const char* what, double tol = 1e-12) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
  detail::require_finite(h, what);
  const double res = hermiticity_residual(h);
  if (res > tol * std::max(1.0, h.norm())) {
    throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian (residual " +
                                detail::format_double(res) + ")");
  }
}

/// Kronecker product; dimensions multiply, (a kron b)(c kron d) = ac kron bd.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_finite(a, "kron");
  detail::require_finite(b, "kron");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Orthonormal basis of u(d) under <A,B> = Re tr(A^dag B), in a fixed order:
/// the d diagonal elements i E_jj first, then for each j < k (lexicographic)
/// the pair (E_jk - E_kj)/sqrt(2), i (E_jk + E_kj)/sqrt(2).
inline std::vector<ComplexMatrix> antihermitian_basis(int d) {
  if (d < 1) {
    throw std::invalid_argument("antihermitian_basis: dimension must be >= 1");
  }
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  const Complex iu(0.0, 1.0);
  for (int j = 0; j < d; ++j) {
    ComplexMatrix b = ComplexMatrix::Zero(d, d);
    b(j, j) = iu;
    basis.push_back(std::move(b));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix re = ComplexMatrix::Zero(d, d);
      re(j, k) = r;
      re(k, j) = -r;
      basis.push_back(std::move(re));
      ComplexMatrix im = ComplexMatrix::Zero(d, d);
      im(j, k) = iu * r;
      im(k, j) = iu * r;
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

/// Isometric real coordinates of a D x D Hermitian matrix: the D diagonal
/// entries, then sqrt(2) Re / sqrt(2) Im of each strictly-upper entry in
/// row-major order. Preserves the Frobenius norm.
inline RealVector hermitian_to_real_coords(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_to_real_coords");
  const Eigen::Index d = h.rows();
  RealVector c(d * d);
  Eigen::Index p = 0;
  for (Eigen::Index j = 0; j < d; ++j) c(p++) = h(j, j).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      c(p++) = s * h(j, k).real();
      c(p++) = s * h(j, k).imag();
    }
  }
  return c;
}

/// Inverse of hermitian_to_real_coords.
inline ComplexMatrix real_coords_to_hermitian(const RealVector& c) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(c.size()))));
  if (d * d != c.size()) {
    throw std::invalid_argument("real_coords_to_hermitian: length is not a perfect square");
  }
  ComplexMatrix h(d, d);
  Eigen::Index p = 0;
  for (Eigen::Index j = 0; j < d; ++j) h(j, j) = c(p++);
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const double re = c(p++) * r;
      const double im = c(p++) * r;
      h(j, k) = Complex(re, im);
      h(k, j) = Complex(re, -im);
    }
  }
  return h;
}

/// Numerical rank and orthonormal kernel basis via SVD. Rank counts singular
/// values above relative_cutoff * sigma_max (rank 0 for the zero matrix).
inline RankReport kernel(const RealMatrix& m, const TolerancePolicy& tol = {}) {
  return detail::kernel_impl(m, tol);
}

inline ComplexRankReport kernel(const ComplexMatrix& m, const TolerancePolicy& tol = {}) {
  return detail::kernel_impl(m, tol);
}

}  // namespace luorbit
