#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace testing {

using namespace recurdim;

std::string data_path(const std::string& name) { return std::string(RECURDIM_DATA_DIR) + "/" + name; }

RfifSpec load(const std::string& name) { return load_spec(data_path(name)); }

MapSpec affine_map(const std::vector<Node>& nodes, int n, int ell, int r, bool increasing, double s_at_ell,
                   double s_at_r) {
  const double a = to_double(nodes[ell].x), b = to_double(nodes[r].x);
  const double s1 = (s_at_r - s_at_ell) / (b - a);
  const double s0 = s_at_ell - s1 * a;
  const double target_a = increasing ? nodes[n - 1].y : nodes[n].y;
  const double target_b = increasing ? nodes[n].y : nodes[n - 1].y;
  // q(a) = target_a - S(a) y_ell, q(b) = target_b - S(b) y_r
  const double qa = target_a - s_at_ell * nodes[ell].y;
  const double qb = target_b - s_at_r * nodes[r].y;
  const double q1 = (qb - qa) / (b - a);
  const double q0 = qa - q1 * a;
  MapSpec m;
  m.n = n;
  m.ell = ell;
  m.r = r;
  m.orientation = increasing ? Orientation::increasing : Orientation::decreasing;
  m.S = Polynomial({s0, s1});
  m.q = Polynomial({q0, q1});
  return m;
}

RfifSpec random_spec(std::mt19937& rng, int max_maps) {
  std::uniform_int_distribution<int> pick_T(2, 3);
  const int T = pick_T(rng);
  std::uniform_int_distribution<int> pick_N(std::max(3, T), max_maps);
  const int N = pick_N(rng);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), mag(0.1, 0.95);
  std::bernoulli_distribution coin(0.5);

  std::vector<Node> nodes;
  for (int i = 0; i <= N; ++i) nodes.push_back({Rational(i, N), unit(rng)});
  std::vector<MapSpec> maps;
  for (int n = 1; n <= N; ++n) {
    const int ell = std::uniform_int_distribution<int>(0, N - T)(rng);
    const double sign = coin(rng) ? 1.0 : -1.0;
    maps.push_back(affine_map(nodes, n, ell, ell + T, coin(rng), sign * mag(rng), sign * mag(rng)));
  }
  return RfifSpec(nodes, maps);
}

double charpoly_radius(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  // det(λI - A) = λ^n + c[1] λ^{n-1} + ... + c[n]
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(k - 1)] * Eigen::MatrixXd::Identity(n, n);
    c[static_cast<std::size_t>(k)] = -(A * M).trace() / static_cast<double>(k);
  }
  auto p = [&](double x) {
    double v = 0.0;
    for (double coef : c) v = v * x + coef;
    return v;
  };
  const double bound = A.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const int steps = 200000;
  double hi = bound, fhi = p(hi);
  for (int s = 1; s <= steps; ++s) {
    const double lo = bound - 2.0 * bound * s / steps;
    const double flo = p(lo);
    if (flo == 0.0) return lo;
    if ((flo < 0) != (fhi < 0)) {
      double a = lo, b = hi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if ((p(mid) < 0) == (flo < 0)) a = mid; else b = mid;
      }
      return 0.5 * (a + b);
    }
    hi = lo;
    fhi = flo;
  }
  return 0.0;
}

std::vector<std::vector<int>> brute_force_scc(const std::vector<std::vector<int>>& successors) {
  const int n = static_cast<int>(successors.size());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) {
    reach[v][v] = true;
    for (int w : successors[v]) reach[v][w] = true;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cls;
    for (int j = 0; j < n; ++j) {
      if (reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        seen[j] = true;
      }
    }
    out.push_back(cls);
  }
  return out;
}

}  // namespace testing
