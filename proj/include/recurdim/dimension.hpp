#pragma once

#include <optional>
#include <vector>

#include "recurdim/function.hpp"
#include "recurdim/graph.hpp"
#include "recurdim/partition.hpp"
#include "recurdim/scaling.hpp"

namespace recurdim {

/// Smallest k <= kmax with |S_n| > 0 on D_n ∩ B_{r,k} for every n in Λ_r.
std::optional<int> k_star(const RfifSpec& spec, const Partition& partition, int kmax);

/// d*_r on the ρ bracket. `value` is the midpoint of [lo, hi]; `collapsed`
/// when hi - lo < 1e-3; `flagged` when the variation status is unknown.
struct DStar {
  double lo = 1.0;
  double hi = 1.0;
  double value = 1.0;
  bool collapsed = true;
  bool flagged = false;
};

/// Throws std::invalid_argument when the bracket is inverted beyond 1e-9.
DStar d_star(double rho_lo, double rho_hi, int T, VariationStatus status);

struct ComponentReport {
  int component = 0;
  std::vector<int> members;
  int ratio = 0;
  SpectraSequence spectra;
  std::optional<int> k_star;
  CertificateResult certificate;
  /// Vertex j whose infinite variation reached Λ_r through some L_n with
  /// |S_n| > 0 on I_j, when the status was inherited rather than witnessed.
  std::optional<int> inherited_from;
  DStar d_star;
};

struct BoxCount {
  int p = 0;
  double epsilon = 0.0;
  std::int64_t count = 0;
};

struct EmpiricalFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  int ratio = 0;
  std::vector<BoxCount> ladder;
};

struct DimensionReport {
  std::vector<ComponentReport> components;
  std::vector<int> positions;  ///< P(i) at index i-1
  double upper_bound = 1.0;
  std::optional<double> exact;
  /// Set when exact comes from upper_bound == 1 rather than from every d*_r.
  bool exact_from_squeeze = false;
  std::optional<EmpiricalFit> empirical;
  int resolution = 0;
  double sup_error = 0.0;
};

/// upper_bound = 1 + max(0, max_r log upper_rho[K] / log T_r). exact is
/// max(1, max_r d*_r) when every component has k_star and a decided status,
/// or 1 when upper_bound is 1.
DimensionReport dimension_bounds(std::vector<ComponentReport> components);

/// Pushes certified infinite variation along graph edges j -> n with
/// min_{I_j}|S_n| > 0. A component inherits the status when some image
/// L_n(I_j) lands inside B_{r,k*}. Reports are indexed by component.
void propagate_variation(const RfifSpec& spec, const AddressGraph& graph, const std::vector<Partition>& partitions,
                         std::vector<ComponentReport>& reports);

/// Anchored count of ε-squares meeting the sampled graph over J, columns
/// starting at J.lo and rows at y = 0. Throws ResolutionError when ε < 2h.
BoxCount box_count(const SampledRfif& f, const Rational& epsilon, const Interval& J);

/// Counts on the ladder ε_p = |J| / T^p, p = p_min..p_max.
std::vector<BoxCount> box_ladder(const SampledRfif& f, int T, int p_min, int p_max, const Interval& J);

/// Least-squares slope of log N(ε_p) against log(1/ε_p). Needs 3 points.
EmpiricalFit empirical_dimension(const SampledRfif& f, int T, int p_min, int p_max, const Interval& J);

/// Largest p <= 12 whose ladder columns hold at least 16 samples.
int resolvable_depth(const SampledRfif& f, int T, const Interval& J);

struct AnalysisOptions {
  int kmax = 10;
  int pmax = 8;
  int resolution = 0;  ///< Q; 0 picks default_resolution()
  double tol = 1e-10;
  double radius_tol = kDefaultRadiusTolerance;
  int certificate_level = 0;  ///< 0 picks max(2, k_star)
  bool empirical = false;
  int empirical_pmin = 3;
  int empirical_pmax = 0;  ///< 0 picks resolvable_depth()
  int threads = -1;        ///< -1 reads RECURDIM_THREADS; 0 is one per hardware thread
};

/// The whole pipeline on a validated spec. Components run concurrently;
/// results are ordered by component index.
DimensionReport analyze(const RfifSpec& spec, const AnalysisOptions& options = {});

/// Worker count from RECURDIM_THREADS (0 or unset = hardware concurrency).
int thread_budget();

}  // namespace recurdim
