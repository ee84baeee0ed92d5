#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "recurdim/dimension.hpp"

namespace testing {

std::string data_path(const std::string& name);
recurdim::RfifSpec load(const std::string& name);

/// Uniform nodes on [0,1], one ratio T in {2,3} for every map, affine S with
/// |S| in [0.1, 0.95] and no sign change, q solved from the endpoint constraints.
recurdim::RfifSpec random_spec(std::mt19937& rng, int max_maps = 8);

/// Builds a map with affine S given by its values at x_ell and x_r; q is
/// solved from the interpolation constraint.
recurdim::MapSpec affine_map(const std::vector<recurdim::Node>& nodes, int n, int ell, int r, bool increasing,
                             double s_at_ell, double s_at_r);

/// Largest real root of det(λI - A) via Faddeev-LeVerrier coefficients.
double charpoly_radius(const Eigen::MatrixXd& A);

/// Mutual-reachability classes from a Floyd-Warshall closure, each sorted,
/// ordered by smallest member.
std::vector<std::vector<int>> brute_force_scc(const std::vector<std::vector<int>>& successors);

/// Samples of a closed-form function on [0,1] at N*Q+1 points.
template <typename F>
recurdim::SampledRfif sampled(F&& fn, int total) {
  recurdim::SampledRfif f;
  f.x0 = 0;
  f.step = recurdim::Rational(1, total);
  f.refinement = total;
  f.values.resize(total + 1);
  for (int m = 0; m <= total; ++m) f.values[m] = fn(static_cast<double>(m) / total);
  return f;
}

}  // namespace testing
