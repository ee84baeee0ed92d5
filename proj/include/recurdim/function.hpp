#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "recurdim/partition.hpp"
#include "recurdim/scaling.hpp"

namespace recurdim {

/// Samples of the fixed point f on the uniform grid x_0 + m h, h = |[x_0,x_N]| / (N Q).
struct SampledRfif {
  Rational x0;
  Rational step;  ///< h
  int refinement = 0;  ///< Q
  Eigen::VectorXd values;
  /// Bound on |f - values| at grid points, from the contraction estimate.
  double sup_error = 0.0;
  /// Largest functional-equation residual at cell midpoints under linear interpolation.
  double resolution_error = 0.0;
  int iterations = 0;

  std::int64_t samples() const { return values.size(); }
  double x(std::int64_t m) const { return to_double(x0 + step * m); }
  /// Grid position of u, which must be a grid point.
  std::int64_t index_of(const Rational& u) const;
  /// Piecewise-linear interpolant of the samples.
  double operator()(double x) const;
};

inline constexpr int kMaxSamples = 1000000;

/// N (max T_r)^e with the largest e <= 8 keeping N Q <= kMaxSamples (T = 2
/// when there is no component).
int default_resolution(const RfifSpec& spec);

/// Fixed-point iteration from the piecewise-linear interpolant of the nodes.
/// Throws std::invalid_argument when β >= 1 and ConvergenceError after max_iters sweeps.
SampledRfif solve_rfif(const RfifSpec& spec, int Q, double tol = 1e-10, int max_iters = 100000);

/// Least solution α of α_n = sup_{D_n}|S_n| max_{I_j ⊆ D_n} α_j + sup_{D_n}|q_n|;
/// α_n bounds sup |f| on I_n.
std::vector<double> sup_bounds(const RfifSpec& spec);
/// max_n α_n over all maps.
double sup_bound(const RfifSpec& spec);
/// max_n α_n over the given maps.
double sup_bound(const RfifSpec& spec, const std::vector<int>& maps);

/// Oscillation (max - min) of the samples inside the closed interval J.
/// Throws ResolutionError when J holds fewer than 2 samples.
double oscillation(const SampledRfif& f, const Interval& J);

/// O_{r,p}(f, J): J cut into T^p equal closed pieces, oscillations summed.
double oscillation_sum(const SampledRfif& f, int T, int p, const Interval& J);

/// V over Θ_{r,k} and Ṽ collecting the children dropped from Θ_{r,k+1};
/// both aligned with level(k).theta. Needs partition depth >= k+1.
struct OscillationVectors {
  Eigen::VectorXd V;
  Eigen::VectorXd V_tilde;
};
OscillationVectors oscillation_vector(const SampledRfif& f, const Partition& partition, int k, int p);

/// Σ_{n∈Λ_r} 2 f_bound Var(S_n, D_n) + Var(q_n, D_n).
double xi_bound(const RfifSpec& spec, const Component& component, double f_bound);

/// ξ_{r,k,i} = 2 f_bound Var(S_n, D^k_i) + Var(q_n, D^k_i), aligned with level(k).theta.
Eigen::VectorXd xi_vector(const RfifSpec& spec, const Partition& partition, int k, double f_bound);

enum class VariationStatus { certified_infinite, refuted_finite, unknown };
std::string to_string(VariationStatus status);

struct CertificateResult {
  VariationStatus status = VariationStatus::unknown;
  int level = 0;
  double column_min = 0.0;  ///< c, the least column sum of the restricted lower matrix
  double f_bound = 0.0;
  double xi_norm = 0.0;
  double threshold = 0.0;   ///< xi_norm / (c - 1), +inf when c <= 1
  double observed = 0.0;    ///< largest margin-corrected ‖V‖₁ seen
  std::optional<int> witness_p;
  int p_evaluated = 0;      ///< deepest p the sample grid could resolve
  bool tilde_vanishes = false;
  double finite_radius = 0.0;  ///< ρ of the level-1 upper matrix on Λ_r and its ancestors
};

/// Decides Var(f, B_{r,1}) where the evidence allows. A witness needs
/// ‖V(f,r,k,p)‖₁ minus the sampling margin above the threshold.
CertificateResult variation_certificate(const RfifSpec& spec, const SampledRfif& f, const Partition& partition,
                                        int k, int p_max);

/// ρ of A|U where A_{n,j} = max_{I_j}|S_n| when I_j ⊆ D_n and U is Λ_r plus
/// every vertex with a path into it. Below 1, f has finite variation on B_{r,1}.
double finite_variation_radius(const RfifSpec& spec, const Component& component);

/// Both vector inequalities of the oscillation recursion at depth p, with
/// slack 1e-6.
bool check_recursion(const RfifSpec& spec, const SampledRfif& f, const Partition& partition, int k, int p,
                     double f_bound);

}  // namespace recurdim
