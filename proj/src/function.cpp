#include "recurdim/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "recurdim/graph.hpp"

namespace recurdim {

std::int64_t SampledRfif::index_of(const Rational& u) const {
  const Rational pos = (u - x0) / step;
  if (pos.denominator() != 1 || pos < 0 || pos.numerator() >= samples()) {
    throw std::invalid_argument(to_string(u) + " is not a grid point");
  }
  return pos.numerator();
}

double SampledRfif::operator()(double x) const {
  const double t = std::clamp((x - to_double(x0)) / to_double(step), 0.0, static_cast<double>(samples() - 1));
  const auto m = std::min<std::int64_t>(static_cast<std::int64_t>(t), samples() - 2);
  const double frac = t - static_cast<double>(m);
  return (1.0 - frac) * values[m] + frac * values[m + 1];
}

int default_resolution(const RfifSpec& spec) {
  int T = 2;
  try {
    for (const auto& c : components(build_address_graph(spec), spec)) T = std::max(T, c.ratio);
  } catch (const RatioError&) {
  }
  const std::int64_t N = spec.size();
  std::int64_t Q = N;
  if (N * Q > kMaxSamples) return static_cast<int>(std::max<std::int64_t>(1, kMaxSamples / N));
  for (int e = 0; e < 8 && N * Q * T <= kMaxSamples; ++e) Q *= T;
  return static_cast<int>(Q);
}

namespace {

// Linear interpolation at a nonnegative grid position given as whole + frac.
double lerp(const Eigen::VectorXd& g, std::int64_t whole, double frac) {
  if (frac == 0.0) return g[whole];
  return (1.0 - frac) * g[whole] + frac * g[whole + 1];
}

}  // namespace

SampledRfif solve_rfif(const RfifSpec& spec, int Q, double tol, int max_iters) {
  if (Q < 1) throw std::invalid_argument("resolution must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  const double beta = spec.contraction_bound();
  if (!(beta < 1)) throw std::invalid_argument("contraction bound " + std::to_string(beta) + " is not below 1");

  const int N = spec.size();
  const std::int64_t total = static_cast<std::int64_t>(N) * Q;
  if (total > kMaxSamples) throw std::invalid_argument("resolution exceeds the sample cap");

  SampledRfif f;
  f.x0 = spec.x0();
  f.step = spec.width() / Rational(total);
  f.refinement = Q;

  // Grid point m lies in I_n for n = ceil(m / Q) (m = 0 goes to I_1); its
  // preimage under L_n sits at grid position a_n + b_n m.
  std::vector<std::int64_t> whole(total + 1);
  std::vector<double> frac(total + 1), scale(total + 1), shift(total + 1);
  std::vector<Rational> a(N + 1), b(N + 1);
  for (int n = 1; n <= N; ++n) {
    const AffineMap& L = spec.map(n).L;
    b[n] = Rational(1) / L.slope;
    a[n] = (f.x0 - L.intercept) / L.slope / f.step - f.x0 / f.step;
  }
  auto owner = [&](std::int64_t m) { return m == 0 ? 1 : static_cast<int>((m - 1) / Q + 1); };
  for (std::int64_t m = 0; m <= total; ++m) {
    const int n = owner(m);
    const Rational pos = a[n] + b[n] * Rational(m);
    std::int64_t w = floor(pos);
    double fr = to_double(pos - Rational(w));
    if (w >= total) {
      w = total - 1;
      fr = 1.0;
    }
    whole[m] = w;
    frac[m] = fr;
    const double src = to_double(f.x0 + f.step * pos);
    scale[m] = spec.map(n).S(src);
    shift[m] = spec.map(n).q(src);
  }

  Eigen::VectorXd g(total + 1), next(total + 1);
  for (int n = 1; n <= N; ++n) {
    const double y0 = spec.node(n - 1).y, y1 = spec.node(n).y;
    for (std::int64_t j = 0; j <= Q; ++j) {
      g[(n - 1) * static_cast<std::int64_t>(Q) + j] = y0 + (y1 - y0) * static_cast<double>(j) / Q;
    }
  }

  const double stop = beta == 0.0 ? std::numeric_limits<double>::infinity() : tol * (1.0 - beta) / beta;
  double change = std::numeric_limits<double>::infinity();
  int it = 0;
  while (true) {
    if (it >= max_iters) throw ConvergenceError("fixed-point iteration did not converge", 0.0, change);
    for (std::int64_t m = 0; m <= total; ++m) next[m] = scale[m] * lerp(g, whole[m], frac[m]) + shift[m];
    change = (next - g).cwiseAbs().maxCoeff();
    g.swap(next);
    ++it;
    if (change <= stop) break;
  }
  f.values = std::move(g);
  f.iterations = it;
  f.sup_error = beta == 0.0 ? 0.0 : change * beta / (1.0 - beta);

  double residual = 0.0;
  for (std::int64_t m = 0; m < total; ++m) {
    const int n = static_cast<int>(m / Q + 1);
    const double pos = to_double(a[n] + b[n] * Rational(m)) + 0.5 * to_double(b[n]);
    const auto w = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(pos)), total - 1);
    const double src = to_double(f.x0) + pos * to_double(f.step);
    const double rhs = spec.map(n).S(src) * lerp(f.values, w, pos - static_cast<double>(w)) + spec.map(n).q(src);
    residual = std::max(residual, std::abs(0.5 * (f.values[m] + f.values[m + 1]) - rhs));
  }
  f.resolution_error = residual;
  return f;
}

std::vector<double> sup_bounds(const RfifSpec& spec) {
  const int N = spec.size();
  const double beta = spec.contraction_bound();
  if (!(beta < 1)) throw std::invalid_argument("contraction bound is not below 1");

  Eigen::VectorXd s(N), c(N);
  std::vector<std::vector<int>> feeds(N);
  for (int n = 1; n <= N; ++n) {
    const Interval D = spec.domain_of(n);
    s[n - 1] = poly_abs_range(spec.map(n).S, D).max;
    c[n - 1] = poly_abs_range(spec.map(n).q, D).max;
    for (int j = 1; j <= N; ++j) {
      if (spec.interval(j).overlaps(D)) feeds[n - 1].push_back(j - 1);
    }
  }
  auto apply = [&](const Eigen::VectorXd& alpha) {
    Eigen::VectorXd out(N);
    for (int n = 0; n < N; ++n) {
      double best = 0.0;
      for (int j : feeds[n]) best = std::max(best, alpha[j]);
      out[n] = s[n] * best + c[n];
    }
    return out;
  };

  // Policy iteration on the max-affine system: fix the maximizing feeder,
  // solve the linear system, re-pick.
  std::vector<int> policy(N);
  for (int n = 0; n < N; ++n) policy[n] = feeds[n].empty() ? -1 : feeds[n].front();
  Eigen::VectorXd alpha;
  bool settled = false;
  for (int round = 0; round < 100 && !settled; ++round) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N);
    for (int n = 0; n < N; ++n) {
      if (policy[n] >= 0) A(n, policy[n]) -= s[n];
    }
    alpha = A.partialPivLu().solve(c);
    settled = true;
    for (int n = 0; n < N; ++n) {
      for (int j : feeds[n]) {
        if (alpha[j] > alpha[policy[n]] * (1 + 1e-15) + 1e-300) {
          policy[n] = j;
          settled = false;
        }
      }
    }
  }
  if (!settled) alpha = Eigen::VectorXd::Constant(N, c.maxCoeff() / (1.0 - beta));

  // Lift to a certain post-fixed point: F(alpha) <= alpha.
  const double excess = std::max(0.0, (apply(alpha) - alpha).maxCoeff());
  const double lift = excess / (1.0 - beta) + 1e-14 * std::max(1.0, alpha.maxCoeff());
  alpha.array() += lift;
  return {alpha.data(), alpha.data() + N};
}

double sup_bound(const RfifSpec& spec) {
  const auto alpha = sup_bounds(spec);
  return *std::max_element(alpha.begin(), alpha.end());
}

double sup_bound(const RfifSpec& spec, const std::vector<int>& maps) {
  const auto alpha = sup_bounds(spec);
  double out = 0.0;
  for (int n : maps) out = std::max(out, alpha.at(static_cast<std::size_t>(n - 1)));
  return out;
}

namespace {

double sample_range(const SampledRfif& f, std::int64_t lo, std::int64_t hi) {
  lo = std::max<std::int64_t>(lo, 0);
  hi = std::min<std::int64_t>(hi, f.samples() - 1);
  if (hi - lo < 1) throw ResolutionError("piece holds fewer than 2 samples");
  const auto seg = f.values.segment(lo, hi - lo + 1);
  return seg.maxCoeff() - seg.minCoeff();
}

}  // namespace

double oscillation(const SampledRfif& f, const Interval& J) {
  return sample_range(f, ceil((J.lo - f.x0) / f.step), floor((J.hi - f.x0) / f.step));
}

double oscillation_sum(const SampledRfif& f, int T, int p, const Interval& J) {
  if (T < 1 || p < 0) throw std::invalid_argument("bad piece count");
  std::int64_t pieces = 1;
  for (int e = 0; e < p; ++e) {
    pieces *= T;
    if (pieces > f.samples()) throw ResolutionError("more pieces than samples");
  }
  const Rational start = (J.lo - f.x0) / f.step;
  const Rational width = J.length() / f.step;
  double sum = 0.0;
  std::int64_t lo = ceil(start);
  for (std::int64_t t = 1; t <= pieces; ++t) {
    const Rational edge = start + width * Rational(t, pieces);
    const std::int64_t hi = floor(edge);
    sum += sample_range(f, lo, hi);
    lo = ceil(edge);
  }
  return sum;
}

OscillationVectors oscillation_vector(const SampledRfif& f, const Partition& partition, int k, int p) {
  if (partition.depth() < k + 1) throw std::invalid_argument("partition too shallow for the dropped children");
  const auto& grid = partition.grid();
  const auto& level = partition.level(k);
  const auto& next = partition.level(k + 1);
  const int T = grid.ratio();
  OscillationVectors out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(level.theta.size())),
                         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(level.theta.size()))};
  for (std::size_t p_i = 0; p_i < level.theta.size(); ++p_i) {
    const int i = level.theta[p_i];
    out.V[p_i] = oscillation_sum(f, T, p, grid.interval(k, i));
    for (int c = grid.first_child(i); c < grid.first_child(i) + T; ++c) {
      if (!next.survives(c)) out.V_tilde[p_i] += oscillation_sum(f, T, p, grid.interval(k + 1, c));
    }
  }
  return out;
}

double xi_bound(const RfifSpec& spec, const Component& component, double f_bound) {
  double out = 0.0;
  for (int n : component.members) {
    const Interval D = spec.domain_of(n);
    out += 2.0 * f_bound * poly_variation(spec.map(n).S, D) + poly_variation(spec.map(n).q, D);
  }
  return out;
}

Eigen::VectorXd xi_vector(const RfifSpec& spec, const Partition& partition, int k, double f_bound) {
  const auto& grid = partition.grid();
  const auto& theta = partition.level(k).theta;
  Eigen::VectorXd out(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const auto& map = spec.map(grid.owner(k, theta[p]));
    const Interval D = grid.preimage(k, theta[p]);
    out[p] = 2.0 * f_bound * poly_variation(map.S, D) + poly_variation(map.q, D);
  }
  return out;
}

std::string to_string(VariationStatus status) {
  switch (status) {
    case VariationStatus::certified_infinite: return "certified_infinite";
    case VariationStatus::refuted_finite: return "refuted_finite";
    case VariationStatus::unknown: return "unknown";
  }
  return "?";
}

double finite_variation_radius(const RfifSpec& spec, const Component& component) {
  const auto graph = build_address_graph(spec);
  const auto reach = reachability(graph);
  std::vector<int> U;
  for (int v = 1; v <= spec.size(); ++v) {
    bool in = component.contains(v);
    for (int m : component.members) in = in || reach[v - 1][m - 1];
    if (in) U.push_back(v);
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(U.size()), static_cast<Eigen::Index>(U.size()));
  for (std::size_t a = 0; a < U.size(); ++a) {
    for (std::size_t b = 0; b < U.size(); ++b) {
      if (graph.has_edge(U[b], U[a])) A(a, b) = poly_abs_range(spec.map(U[a]).S, spec.interval(U[b])).max;
    }
  }
  return spectral_radius(A);
}

CertificateResult variation_certificate(const RfifSpec& spec, const SampledRfif& f, const Partition& partition,
                                        int k, int p_max) {
  const auto& comp = partition.component();
  const auto& grid = partition.grid();
  const auto& level = partition.level(k);
  CertificateResult out;
  out.level = k;
  out.f_bound = sup_bound(spec, comp.members);
  out.xi_norm = xi_bound(spec, comp, out.f_bound);
  out.tilde_vanishes = partition.depth() > k && partition.level(k + 1).theta == level.theta_tilde;
  out.finite_radius = finite_variation_radius(spec, comp);

  const auto lower = build_matrix(spec, partition, k, MatrixKind::lower);
  const Eigen::RowVectorXd colsum = Eigen::RowVectorXd::Ones(lower.order()) * lower.entries;
  out.column_min = lower.order() > 0 ? colsum.minCoeff() : 0.0;
  out.threshold = std::numeric_limits<double>::infinity();

  if (out.column_min > 1.0) {
    out.threshold = out.xi_norm / (out.column_min - 1.0);
    std::int64_t pieces = static_cast<std::int64_t>(level.theta.size());
    for (int p = 1; p <= p_max; ++p) {
      pieces *= grid.ratio();
      double norm = 0.0;
      try {
        for (int i : level.theta) norm += oscillation_sum(f, grid.ratio(), p, grid.interval(k, i));
      } catch (const ResolutionError&) {
        if (p == 1) throw;
        break;
      }
      out.p_evaluated = p;
      const double margin = norm - 2.0 * static_cast<double>(pieces) * f.sup_error;
      out.observed = std::max(out.observed, margin);
      if (margin > out.threshold) {
        out.status = VariationStatus::certified_infinite;
        out.witness_p = p;
        return out;
      }
    }
  }
  if (out.finite_radius < 1.0) out.status = VariationStatus::refuted_finite;
  return out;
}

bool check_recursion(const RfifSpec& spec, const SampledRfif& f, const Partition& partition, int k, int p,
                     double f_bound) {
  constexpr double slack = 1e-6;
  const auto now = oscillation_vector(f, partition, k, p);
  const auto later = oscillation_vector(f, partition, k, p + 1);
  const auto lower = build_matrix(spec, partition, k, MatrixKind::lower);
  const auto upper = build_matrix(spec, partition, k, MatrixKind::upper);
  const Eigen::VectorXd xi = xi_vector(spec, partition, k, f_bound);
  const Eigen::VectorXd floor_side = lower.entries * now.V + now.V_tilde - xi;
  const Eigen::VectorXd ceil_side = upper.entries * now.V + now.V_tilde + xi;
  return ((later.V - floor_side).array() >= -slack).all() && ((ceil_side - later.V).array() >= -slack).all();
}

}  // namespace recurdim
