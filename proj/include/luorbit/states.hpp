#pragma once

#include "luorbit/numerics.hpp"

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace luorbit {

/// Ordered party Hilbert-space dimensions (d_1, ..., d_k).
struct PartyDims {
  std::vector<int> dims;

  PartyDims() = default;
  PartyDims(std::initializer_list<int> d) : dims(d) {}
  explicit PartyDims(std::vector<int> d) : dims(std::move(d)) {}

  int parties() const { return static_cast<int>(dims.size()); }

  Eigen::Index total() const {
    Eigen::Index t = 1;
    for (int d : dims) t *= d;
    return t;
  }

  int sum_squares() const {
    int s = 0;
    for (int d : dims) s += d * d;
    return s;
  }

  bool sorted_ascending() const {
    for (size_t i = 1; i < dims.size(); ++i) {
      if (dims[i] < dims[i - 1]) return false;
    }
    return true;
  }

  void validate() const {
    if (dims.empty()) {
      throw std::invalid_argument("PartyDims: need at least one party");
    }
    for (int d : dims) {
      if (d < 2) {
        throw std::invalid_argument("PartyDims: every party dimension must be >= 2, got " +
                                    std::to_string(d));
      }
    }
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < dims.size(); ++i) {
      if (i) s += 'x';
      s += std::to_string(dims[i]);
    }
    return s;
  }

  bool operator==(const PartyDims&) const = default;
};

/// Traceless Hermitian generators X_1..X_m on an n-dim space, validated so
/// that {X_i, I} is linearly independent and the joint centralizer of the
/// X_i in u(n) is one-dimensional (multiples of iI only).
struct GeneratorSet {
  int n = 0;
  std::vector<ComplexMatrix> generators;
};

/// Mixed state: Hermitian, PSD, trace 1 on the joint space of `dims`.
struct DensityMatrix {
  PartyDims dims;
  ComplexMatrix matrix;

  void validate() const {
    dims.validate();
    if (matrix.rows() != dims.total() || matrix.cols() != dims.total()) {
      throw std::invalid_argument("DensityMatrix: matrix size does not match dims");
    }
    require_hermitian(matrix, "DensityMatrix");
    const Complex tr = matrix.trace();
    if (std::abs(tr.real() - 1.0) > 1e-12 || std::abs(tr.imag()) > 1e-12) {
      throw std::invalid_argument("DensityMatrix: trace is not 1 (got " +
                                  detail::format_double(tr.real()) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-10) {
      throw std::invalid_argument("DensityMatrix: not positive semi-definite (lambda_min " +
                                  detail::format_double(es.eigenvalues()(0)) + ")");
    }
  }
};

/// Dimension of {B in u(n) : [B, X_i] = 0 for all i}, computed as the kernel
/// of the stacked commutator map in antihermitian_basis coordinates. Always
/// >= 1 since iI commutes with everything.
inline int joint_centralizer_dim(const std::vector<ComplexMatrix>& xs, int n,
                                 const TolerancePolicy& tol = {}) {
  if (n < 1) {
    throw std::invalid_argument("joint_centralizer_dim: dimension must be >= 1");
  }
  for (const auto& x : xs) {
    require_hermitian(x, "joint_centralizer_dim");
    if (x.rows() != n) {
      throw std::invalid_argument("joint_centralizer_dim: generator size does not match n");
    }
  }
  if (xs.empty()) return n * n;

  const auto basis = antihermitian_basis(n);
  RealMatrix m(static_cast<Eigen::Index>(xs.size()) * n * n, n * n);
  for (size_t a = 0; a < xs.size(); ++a) {
    for (size_t j = 0; j < basis.size(); ++j) {
      // [B, X] is Hermitian for anti-Hermitian B and Hermitian X.
      const ComplexMatrix comm = basis[j] * xs[a] - xs[a] * basis[j];
      m.block(static_cast<Eigen::Index>(a) * n * n, static_cast<Eigen::Index>(j), n * n, 1) =
          hermitian_to_real_coords(comm);
    }
  }
  return static_cast<int>(kernel(m, tol).kernel_dim());
}

namespace detail {

inline void validate_generator_set(const GeneratorSet& gs, const TolerancePolicy& tol) {
  const int n = gs.n;
  for (size_t i = 0; i < gs.generators.size(); ++i) {
    const auto& x = gs.generators[i];
    require_hermitian(x, "GeneratorSet");
    if (x.rows() != n) {
      throw std::runtime_error("GeneratorSet: generator " + std::to_string(i + 1) +
                               " has wrong size");
    }
    if (std::abs(x.trace()) > 1e-12) {
      throw std::runtime_error("GeneratorSet: generator " + std::to_string(i + 1) +
                               " is not traceless (trace " + format_double(x.trace().real()) + ")");
    }
  }
  // {X_1..X_m, I} linearly independent: coordinate columns have full rank.
  const Eigen::Index m = static_cast<Eigen::Index>(gs.generators.size());
  RealMatrix cols(static_cast<Eigen::Index>(n) * n, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    cols.col(i) = hermitian_to_real_coords(gs.generators[i]);
  }
  cols.col(m) = hermitian_to_real_coords(ComplexMatrix::Identity(n, n));
  if (kernel(cols, tol).rank != m + 1) {
    throw std::runtime_error("GeneratorSet: {X_i, I} is linearly dependent");
  }
  const int cdim = joint_centralizer_dim(gs.generators, n, tol);
  if (cdim != 1) {
    throw std::runtime_error("GeneratorSet: joint centralizer dimension is " +
                             std::to_string(cdim) + ", expected 1");
  }
}

}  // namespace detail

/// Canonical generator choice: X_1 = diag(j - (n+1)/2), X_2 = nearest-neighbor
/// hopping (unit super/sub-diagonal), X_i = E_{1i} + E_{i1} for 3 <= i <= m.
/// All GeneratorSet invariants are verified before returning.
inline GeneratorSet build_generators(int m, int n, const TolerancePolicy& tol = {}) {
  if (!(2 <= m && m <= n)) {
    throw std::invalid_argument("build_generators: need 2 <= m <= n, got m=" + std::to_string(m) +
                                " n=" + std::to_string(n));
  }
  std::vector<ComplexMatrix> xs;
  ComplexMatrix x1 = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) x1(j, j) = (j + 1) - 0.5 * (n + 1);
  xs.push_back(std::move(x1));
  ComplexMatrix x2 = ComplexMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    x2(j, j + 1) = 1.0;
    x2(j + 1, j) = 1.0;
  }
  xs.push_back(std::move(x2));
  for (int i = 3; i <= m; ++i) {
    ComplexMatrix xi = ComplexMatrix::Zero(n, n);
    xi(0, i - 1) = 1.0;
    xi(i - 1, 0) = 1.0;
    xs.push_back(std::move(xi));
  }
  GeneratorSet gs{n, std::move(xs)};
  detail::validate_generator_set(gs, tol);
  return gs;
}

/// W = sum_i P_i kron X_i + v v^dag kron I with P_i = e_i e_i^dag and
/// v = sum_k k e_k; Hermitian by construction, stabilizer algebra equal to
/// the center of u(m) + u(n).
inline ComplexMatrix build_witness(int m, int n, const TolerancePolicy& tol = {}) {
  const GeneratorSet gs = build_generators(m, n, tol);
  ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(m) * n,
                                        static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < m; ++i) {
    ComplexMatrix p = ComplexMatrix::Zero(m, m);
    p(i, i) = 1.0;
    w += kron(p, gs.generators[i]);
  }
  ComplexVector v(m);
  for (int k = 0; k < m; ++k) v(k) = double(k + 1);
  w += kron(ComplexMatrix(v * v.adjoint()), ComplexMatrix::Identity(n, n));
  return w;
}

/// Multipartite witness candidate. For k = 2 this is build_witness. For
/// k > 2 the space splits as H_1 kron H_tail and the tail generators are
/// Y_1 = the tail witness (recursively), Y_2 = its conjugate by the cyclic
/// shift of the tail basis, Y_i = E_{1i} + E_{i1} for i >= 3, each projected
/// to zero trace. Callers must confirm via the stabilizer module that the
/// result has stabilizer-algebra dimension k; if not, fall back to sampling.
inline ComplexMatrix build_witness_multipartite(const PartyDims& dims,
                                                const TolerancePolicy& tol = {}) {
  dims.validate();
  if (dims.parties() < 2) {
    throw std::invalid_argument("build_witness_multipartite: need at least two parties");
  }
  if (!dims.sorted_ascending()) {
    throw std::invalid_argument("build_witness_multipartite: dims must be sorted ascending");
  }
  if (dims.parties() == 2) return build_witness(dims.dims[0], dims.dims[1], tol);

  const int d1 = dims.dims[0];
  const PartyDims tail{std::vector<int>(dims.dims.begin() + 1, dims.dims.end())};
  const Eigen::Index dt = tail.total();

  std::vector<ComplexMatrix> ts;
  ts.push_back(build_witness_multipartite(tail, tol));
  ComplexMatrix shift = ComplexMatrix::Zero(dt, dt);
  for (Eigen::Index j = 0; j < dt; ++j) shift((j + 1) % dt, j) = 1.0;
  ts.push_back(shift * ts[0] * shift.adjoint());
  for (int i = 3; i <= d1; ++i) {
    ComplexMatrix t = ComplexMatrix::Zero(dt, dt);
    t(0, i - 1) = 1.0;
    t(i - 1, 0) = 1.0;
    ts.push_back(std::move(t));
  }

  ComplexMatrix w = ComplexMatrix::Zero(d1 * dt, d1 * dt);
  for (int i = 0; i < d1; ++i) {
    const ComplexMatrix y =
        ts[i] - (ts[i].trace().real() / double(dt)) * ComplexMatrix::Identity(dt, dt);
    ComplexMatrix p = ComplexMatrix::Zero(d1, d1);
    p(i, i) = 1.0;
    w += kron(p, y);
  }
  ComplexVector v(d1);
  for (int k = 0; k < d1; ++k) v(k) = double(k + 1);
  w += kron(ComplexMatrix(v * v.adjoint()), ComplexMatrix::Identity(dt, dt));
  return w;
}

/// (h + sI)/tr(h + sI) with s = max(0, -lambda_min(h)) + 1. The shift keeps
/// the output positive definite and leaves the stabilizer algebra unchanged.
inline DensityMatrix to_state(const ComplexMatrix& h, const PartyDims& dims) {
  dims.validate();
  require_hermitian(h, "to_state");
  if (h.rows() != dims.total()) {
    throw std::invalid_argument("to_state: matrix size does not match dims");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double s = std::max(0.0, -es.eigenvalues()(0)) + 1.0;
  ComplexMatrix m = h + s * ComplexMatrix::Identity(h.rows(), h.cols());
  m /= m.trace().real();
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix{dims, std::move(m)};
}

namespace detail {

inline double uniform_open_closed(std::mt19937_64& g) {
  return double((g() >> 11) + 1) * 0x1.0p-53;  // (0, 1], keeps log finite
}

inline double uniform_closed_open(std::mt19937_64& g) {
  return double(g() >> 11) * 0x1.0p-53;  // [0, 1)
}

/// Box-Muller pair from two 53-bit uniform draws.
inline std::pair<double, double> normal_pair(std::mt19937_64& g) {
  const double u1 = uniform_open_closed(g);
  const double u2 = uniform_closed_open(g);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace detail

/// Hilbert-Schmidt ensemble member rho = G G^dag / tr(G G^dag), with G a
/// D x rank matrix of standard complex Gaussians drawn row-major from
/// mt19937_64(seed) via Box-Muller (one pair per entry: real part, then
/// imaginary). Bitwise reproducible for fixed arguments.
inline DensityMatrix random_density(const PartyDims& dims, Eigen::Index rank, std::uint64_t seed) {
  dims.validate();
  const Eigen::Index d = dims.total();
  if (rank < 1 || rank > d) {
    throw std::invalid_argument("random_density: rank must lie in [1, " + std::to_string(d) +
                                "], got " + std::to_string(rank));
  }
  std::mt19937_64 rng(seed);
  ComplexMatrix g(d, rank);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) {
      const auto [re, im] = detail::normal_pair(rng);
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix m = g * g.adjoint();
  m = ((m + m.adjoint()) / 2.0).eval();
  m /= m.trace().real();
  return DensityMatrix{dims, std::move(m)};
}

inline DensityMatrix random_density(const PartyDims& dims, std::uint64_t seed) {
  return random_density(dims, dims.total(), seed);
}

enum class SpecialStateKind { maximally_mixed, pure_product, bell_diagonal, witness };

inline SpecialStateKind parse_state_kind(std::string_view s) {
  if (s == "maximally-mixed" || s == "maximally_mixed") return SpecialStateKind::maximally_mixed;
  if (s == "pure-product" || s == "pure_product") return SpecialStateKind::pure_product;
  if (s == "bell-diagonal" || s == "bell_diagonal") return SpecialStateKind::bell_diagonal;
  if (s == "witness") return SpecialStateKind::witness;
  throw std::invalid_argument("unknown state kind '" + std::string(s) + "'");
}

/// Analytically known states. bell_diagonal requires dims (2,2) and a
/// 4-entry probability vector over the Bell basis in the fixed order
/// Phi+, Phi-, Psi+, Psi-.
inline DensityMatrix special_state(SpecialStateKind kind, const PartyDims& dims,
                                   const std::vector<double>& params = {}) {
  dims.validate();
  const Eigen::Index d = dims.total();
  if (kind != SpecialStateKind::bell_diagonal && !params.empty()) {
    throw std::invalid_argument("special_state: params are only accepted for bell-diagonal");
  }
  switch (kind) {
    case SpecialStateKind::maximally_mixed: {
      return DensityMatrix{dims, ComplexMatrix::Identity(d, d) / double(d)};
    }
    case SpecialStateKind::pure_product: {
      ComplexMatrix rho = ComplexMatrix::Identity(1, 1);
      for (int di : dims.dims) {
        ComplexMatrix p = ComplexMatrix::Zero(di, di);
        p(0, 0) = 1.0;
        rho = kron(rho, p);
      }
      return DensityMatrix{dims, std::move(rho)};
    }
    case SpecialStateKind::bell_diagonal: {
      if (dims.dims != std::vector<int>{2, 2}) {
        throw std::invalid_argument("special_state: bell-diagonal requires dims 2,2");
      }
      if (params.size() != 4) {
        throw std::invalid_argument("special_state: bell-diagonal requires 4 probabilities");
      }
      double sum = 0.0;
      for (double p : params) {
        if (p < 0.0) throw std::invalid_argument("special_state: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("special_state: probabilities must sum to 1, got " +
                                    detail::format_double(sum));
      }
      const double r = 1.0 / std::sqrt(2.0);
      ComplexVector bell[4];
      for (auto& b : bell) b = ComplexVector::Zero(4);
      bell[0](0) = r, bell[0](3) = r;   // Phi+
      bell[1](0) = r, bell[1](3) = -r;  // Phi-
      bell[2](1) = r, bell[2](2) = r;   // Psi+
      bell[3](1) = r, bell[3](2) = -r;  // Psi-
      ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
      for (int i = 0; i < 4; ++i) rho += params[i] * (bell[i] * bell[i].adjoint());
      return DensityMatrix{dims, std::move(rho)};
    }
    case SpecialStateKind::witness: {
      return to_state(build_witness_multipartite(dims), dims);
    }
  }
  throw std::invalid_argument("special_state: unknown kind");
}

}  // namespace luorbit
