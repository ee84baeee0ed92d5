#include "recurdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace recurdim {

std::optional<int> k_star(const RfifSpec& spec, const Partition& partition, int kmax) {
  kmax = std::min(kmax, partition.depth());
  for (int k = 1; k <= kmax; ++k) {
    if (min_abs_scaling(spec, partition, k) > 0.0) return k;
  }
  return std::nullopt;
}

DStar d_star(double rho_lo, double rho_hi, int T, VariationStatus status) {
  if (rho_lo > rho_hi + 1e-9) throw std::invalid_argument("rho bracket is inverted");
  if (T < 2) throw std::invalid_argument("ratio must be >= 2");
  const double logT = std::log(static_cast<double>(T));
  auto dim = [&](double rho) { return rho > 0 ? std::max(1.0, 1.0 + std::log(rho) / logT) : 1.0; };
  DStar out;
  switch (status) {
    case VariationStatus::refuted_finite:
      return out;
    case VariationStatus::certified_infinite:
      out.lo = dim(std::min(rho_lo, rho_hi));
      out.hi = dim(rho_hi);
      break;
    case VariationStatus::unknown:
      out.lo = 1.0;
      out.hi = dim(rho_hi);
      out.flagged = true;
      break;
  }
  out.value = 0.5 * (out.lo + out.hi);
  out.collapsed = out.hi - out.lo < 1e-3;
  return out;
}

DimensionReport dimension_bounds(std::vector<ComponentReport> components) {
  DimensionReport out;
  double worst = 0.0;
  bool decided = true;
  double exact = 1.0;
  for (const auto& c : components) {
    const double top = c.spectra.upper_rho.empty() ? 0.0 : c.spectra.upper_rho.back();
    if (top > 0) worst = std::max(worst, std::log(top) / std::log(static_cast<double>(c.ratio)));
    decided = decided && c.k_star && c.certificate.status != VariationStatus::unknown;
    exact = std::max(exact, c.d_star.value);
  }
  out.upper_bound = 1.0 + worst;
  if (decided) {
    out.exact = exact;
  } else if (worst == 0.0) {
    out.exact = 1.0;
    out.exact_from_squeeze = true;
  }
  out.components = std::move(components);
  return out;
}

void propagate_variation(const RfifSpec& spec, const AddressGraph& graph, const std::vector<Partition>& partitions,
                         std::vector<ComponentReport>& reports) {
  const int N = spec.size();
  std::vector<int> owner(N + 1, -1);
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (int n : reports[r].members) owner[n] = static_cast<int>(r);
  }
  std::vector<bool> infinite(N + 1, false);
  for (const auto& rep : reports) {
    if (rep.certificate.status == VariationStatus::certified_infinite) {
      for (int n : rep.members) infinite[n] = true;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 1; j <= N; ++j) {
      if (!infinite[j]) continue;
      for (int n : graph.successors(j)) {
        if (infinite[n]) continue;
        if (!(poly_abs_range(spec.map(n).S, spec.interval(j)).min > 0.0)) continue;
        const int r = owner[n];
        if (r < 0) {
          infinite[n] = true;
          changed = true;
          continue;
        }
        auto& rep = reports[static_cast<std::size_t>(r)];
        if (!rep.k_star || rep.certificate.status == VariationStatus::refuted_finite) continue;
        const Interval image = spec.map(n).L.image(spec.interval(j));
        const auto runs = partitions[static_cast<std::size_t>(r)].basic_set(*rep.k_star);
        if (std::none_of(runs.begin(), runs.end(), [&](const Interval& run) { return run.contains(image); })) continue;
        rep.certificate.status = VariationStatus::certified_infinite;
        rep.inherited_from = j;
        rep.d_star = d_star(rep.spectra.bracket_lo, rep.spectra.bracket_hi, rep.ratio, rep.certificate.status);
        for (int m : rep.members) infinite[m] = true;
        changed = true;
      }
    }
  }
}

BoxCount box_count(const SampledRfif& f, const Rational& epsilon, const Interval& J) {
  if (epsilon < f.step * 2) throw ResolutionError("epsilon below two grid steps");
  const double eps = to_double(epsilon);
  const std::int64_t columns = ceil(J.length() / epsilon);
  BoxCount out;
  out.epsilon = eps;
  for (std::int64_t c = 0; c < columns; ++c) {
    const Rational a = J.lo + epsilon * c;
    const Rational b = std::min(J.hi, a + epsilon);
    const std::int64_t lo = std::max<std::int64_t>(0, ceil((a - f.x0) / f.step));
    const std::int64_t hi = std::min<std::int64_t>(f.samples() - 1, floor((b - f.x0) / f.step));
    if (hi < lo) throw ResolutionError("column holds no sample");
    const auto seg = f.values.segment(lo, hi - lo + 1);
    out.count += static_cast<std::int64_t>(std::floor(seg.maxCoeff() / eps) - std::floor(seg.minCoeff() / eps)) + 1;
  }
  return out;
}

std::vector<BoxCount> box_ladder(const SampledRfif& f, int T, int p_min, int p_max, const Interval& J) {
  std::vector<BoxCount> out;
  std::int64_t pieces = 1;
  for (int p = 0; p <= p_max; ++p) {
    if (p >= p_min) {
      auto bc = box_count(f, J.length() / Rational(pieces), J);
      bc.p = p;
      out.push_back(bc);
    }
    pieces *= T;
  }
  return out;
}

EmpiricalFit empirical_dimension(const SampledRfif& f, int T, int p_min, int p_max, const Interval& J) {
  if (p_max - p_min + 1 < 3) throw std::invalid_argument("need at least 3 ladder points");
  EmpiricalFit fit;
  fit.ratio = T;
  fit.ladder = box_ladder(f, T, p_min, p_max, J);
  const auto n = static_cast<Eigen::Index>(fit.ladder.size());
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = -std::log(fit.ladder[i].epsilon);
    y[i] = std::log(static_cast<double>(fit.ladder[i].count));
  }
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  fit.slope = dx.dot(dy) / sxx;
  const double ssr = (dy - fit.slope * dx).squaredNorm();
  fit.stderr_ = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

int resolvable_depth(const SampledRfif& f, int T, const Interval& J) {
  const double steps = to_double(J.length() / f.step);
  int p = 0;
  double pieces = T;
  while (p < 12 && steps / pieces >= 16.0) {
    ++p;
    pieces *= T;
  }
  return p;
}

int thread_budget() {
  int n = 0;
  if (const char* env = std::getenv("RECURDIM_THREADS")) n = std::atoi(env);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(n, 1);
}

namespace {

struct ComponentWork {
  ComponentReport report;
  std::optional<Partition> partition;
};

ComponentWork analyze_component(const RfifSpec& spec, const std::vector<Component>& comps, int r,
                                const SampledRfif& f, const AnalysisOptions& options) {
  const auto& comp = comps[static_cast<std::size_t>(r - 1)];
  int depth = std::min(kMaxLevel, options.kmax + 1);
  auto partition = build_partition(spec, comps, r, depth);

  ComponentWork out;
  auto& rep = out.report;
  rep.component = r;
  rep.members = comp.members;
  rep.ratio = comp.ratio;
  rep.k_star = k_star(spec, partition, options.kmax);

  int level = options.certificate_level > 0 ? options.certificate_level : std::max(2, rep.k_star.value_or(2));
  level = std::min(level, kMaxLevel - 1);
  if (level + 1 > partition.depth()) partition = build_partition(spec, comps, r, level + 1);

  rep.spectra = spectra_sequence(spec, partition, options.kmax, options.radius_tol);
  rep.spectra.one_sided = !rep.k_star.has_value();
  rep.certificate = variation_certificate(spec, f, partition, level, options.pmax);
  rep.d_star = d_star(rep.spectra.bracket_lo, rep.spectra.bracket_hi, rep.ratio, rep.certificate.status);
  out.partition = std::move(partition);
  return out;
}

}  // namespace

DimensionReport analyze(const RfifSpec& spec, const AnalysisOptions& options) {
  if (options.kmax < 1 || options.kmax > kMaxLevel) {
    throw std::invalid_argument("kmax must lie in 1.." + std::to_string(kMaxLevel));
  }
  const auto graph = build_address_graph(spec);
  const auto comps = components(graph, spec);
  const auto pos = positions(graph, comps);

  const int Q = options.resolution > 0 ? options.resolution : default_resolution(spec);
  const auto f = solve_rfif(spec, Q, options.tol);

  const int budget = options.threads < 0 ? thread_budget() : (options.threads == 0 ? thread_budget() : options.threads);
  std::vector<ComponentWork> work(comps.size());
  for (std::size_t start = 0; start < comps.size(); start += static_cast<std::size_t>(budget)) {
    std::vector<std::future<ComponentWork>> batch;
    const std::size_t stop = std::min(comps.size(), start + static_cast<std::size_t>(budget));
    for (std::size_t r = start; r < stop; ++r) {
      batch.push_back(std::async(budget > 1 ? std::launch::async : std::launch::deferred, analyze_component,
                                 std::cref(spec), std::cref(comps), static_cast<int>(r + 1), std::cref(f),
                                 std::cref(options)));
    }
    for (std::size_t r = start; r < stop; ++r) work[r] = batch[r - start].get();
  }

  std::vector<ComponentReport> reports;
  std::vector<Partition> partitions;
  for (auto& w : work) {
    reports.push_back(std::move(w.report));
    partitions.push_back(std::move(*w.partition));
  }
  propagate_variation(spec, graph, partitions, reports);

  auto out = dimension_bounds(std::move(reports));
  out.positions = pos.position;
  out.resolution = Q;
  out.sup_error = f.sup_error;

  if (options.empirical) {
    int T = 2;
    double best = -1.0;
    for (const auto& c : out.components) {
      if (c.d_star.value > best) {
        best = c.d_star.value;
        T = c.ratio;
      }
    }
    const Interval J = spec.domain();
    const int pmax = options.empirical_pmax > 0 ? options.empirical_pmax : resolvable_depth(f, T, J);
    out.empirical = empirical_dimension(f, T, options.empirical_pmin, pmax, J);
  }
  return out;
}

}  // namespace recurdim
