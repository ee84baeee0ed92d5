#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "recurdim/error.hpp"
#include "recurdim/partition.hpp"

namespace recurdim {

enum class MatrixKind { upper, lower, star_upper, star_lower };

std::string to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(const std::string& text);

inline bool is_star(MatrixKind kind) { return kind == MatrixKind::star_upper || kind == MatrixKind::star_lower; }

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Vertical scaling matrix restricted to an index set. Row/column p of
/// `entries` is grid index index_set[p].
struct ScalingMatrix {
  int component = 0;
  int level = 0;  ///< k; star kinds live on the level-(k+1) grid
  MatrixKind kind = MatrixKind::upper;
  std::vector<int> index_set;
  SparseMatrix entries;

  int order() const { return static_cast<int>(index_set.size()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries); }
  /// Entry at grid indices (i, j); zero when either is outside index_set.
  double at(int i, int j) const;
};

/// Upper/lower kinds restrict to Θ_{r,k}, star kinds to Θ̃_{r,k}.
ScalingMatrix build_matrix(const RfifSpec& spec, const Partition& partition, int k, MatrixKind kind);

/// Same matrix restricted to an explicit sorted index set (level k for
/// upper/lower, level k+1 for star kinds).
ScalingMatrix build_matrix(const RfifSpec& spec, const Partition& partition, int k, MatrixKind kind,
                           std::vector<int> index_set);

/// Support digraph strongly connected; a 1x1 matrix needs a positive entry.
bool is_irreducible(const SparseMatrix& M);
bool is_irreducible(const Eigen::MatrixXd& M);
inline bool is_irreducible(const ScalingMatrix& M) { return is_irreducible(M.entries); }

inline constexpr double kDefaultRadiusTolerance = 1e-12;
inline constexpr int kMaxPowerIterations = 100000;

namespace detail {

template <typename MatrixType>
double dense_radius(const MatrixType& M) {
  const Eigen::MatrixXd D = Eigen::MatrixXd(M);
  if (D.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(D, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

struct PowerResult {
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool converged = false;
  bool oscillating = false;
};

// Power iteration on (M + shift I) / (1 + shift).
template <typename MatrixType>
PowerResult power_iterate(const MatrixType& M, double shift, double tol, int max_iter) {
  const Eigen::Index n = M.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd w(n);
  PowerResult out;
  double prev = -1.0, prev_delta = 0.0;
  int stagnant = 0, alternations = 0;
  for (int it = 0; it < max_iter; ++it) {
    w.noalias() = M * v;
    if (shift != 0.0) w = (w + shift * v) / (1.0 + shift);
    const double s = w.sum();
    if (!(s > 1e-300)) {
      out = PowerResult{};
      out.converged = true;
      return out;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (v[i] > 1e-280) {
        const double ratio = w[i] / v[i];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    out.lo = lo;
    out.hi = hi;
    out.radius = s;
    if (hi - lo <= tol * hi) {
      out.radius = 0.5 * (lo + hi);
      out.converged = true;
      return out;
    }
    const double delta = s - prev;
    if (prev > 0 && std::abs(delta) <= tol * s) {
      if (++stagnant >= 3) {
        out.converged = true;
        return out;
      }
    } else {
      stagnant = 0;
    }
    if (prev > 0 && delta * prev_delta < 0) {
      if (++alternations >= 20 && shift == 0.0) {
        out.oscillating = true;
        return out;
      }
    } else {
      alternations = 0;
    }
    prev_delta = delta;
    prev = s;
    v = w / s;
  }
  return out;
}

}  // namespace detail

/// Perron root of a nonnegative matrix by power iteration from the all-ones
/// vector. Returns 0 for a numerically nilpotent matrix. Throws
/// ConvergenceError when iteration stalls and the order is too large for a
/// dense fallback.
template <typename MatrixType>
double spectral_radius(const MatrixType& M, double tol = kDefaultRadiusTolerance,
                       int max_iter = kMaxPowerIterations) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (M.rows() == 0) return 0.0;
  auto result = detail::power_iterate(M, 0.0, tol, max_iter);
  double rho = result.radius;
  if (result.oscillating) {
    result = detail::power_iterate(M, 1.0, tol, max_iter);
    rho = 2.0 * result.radius - 1.0;
    result.lo = 2.0 * result.lo - 1.0;
    result.hi = 2.0 * result.hi - 1.0;
  }
  if (!result.converged) {
    if (M.rows() <= 512) return detail::dense_radius(M);
    throw ConvergenceError("power iteration did not converge", result.lo, result.hi);
  }
#ifndef NDEBUG
  if (M.rows() <= 6) {
    [[maybe_unused]] const double direct = detail::dense_radius(M);
    assert(std::abs(direct - rho) <= 1e-6 * std::max(1.0, direct));
  }
#endif
  return std::max(rho, 0.0);
}

inline double spectral_radius(const ScalingMatrix& M, double tol = kDefaultRadiusTolerance) {
  return spectral_radius(M.entries, tol);
}

/// Radii of the restricted upper and lower matrices for k = 1..K.
struct SpectraSequence {
  int component = 0;
  std::vector<double> upper_rho;
  std::vector<double> lower_rho;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double estimate = 0.0;
  /// The lower sequence does not provably converge to ρ_r.
  bool one_sided = true;

  int levels() const { return static_cast<int>(upper_rho.size()); }
};

SpectraSequence spectra_sequence(const RfifSpec& spec, const Partition& partition, int kmax,
                                 double tol = kDefaultRadiusTolerance);
SpectraSequence spectra_sequence(const RfifSpec& spec, const std::vector<Component>& comps, int r, int kmax,
                                 double tol = kDefaultRadiusTolerance);

}  // namespace recurdim
