#include "recurdim/scaling.hpp"

#include <stdexcept>

#include "recurdim/graph.hpp"

namespace recurdim {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::upper: return "upper";
    case MatrixKind::lower: return "lower";
    case MatrixKind::star_upper: return "star_upper";
    case MatrixKind::star_lower: return "star_lower";
  }
  return "?";
}

MatrixKind parse_matrix_kind(const std::string& text) {
  for (auto kind : {MatrixKind::upper, MatrixKind::lower, MatrixKind::star_upper, MatrixKind::star_lower}) {
    if (text == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown matrix kind '" + text + "'");
}

double ScalingMatrix::at(int i, int j) const {
  auto pos = [&](int g) -> int {
    auto it = std::lower_bound(index_set.begin(), index_set.end(), g);
    return it != index_set.end() && *it == g ? static_cast<int>(it - index_set.begin()) : -1;
  };
  const int p = pos(i), q = pos(j);
  return p < 0 || q < 0 ? 0.0 : entries.coeff(p, q);
}

ScalingMatrix build_matrix(const RfifSpec& spec, const Partition& partition, int k, MatrixKind kind) {
  const auto& level = partition.level(k);
  return build_matrix(spec, partition, k, kind, is_star(kind) ? level.theta_tilde : level.theta);
}

ScalingMatrix build_matrix(const RfifSpec& spec, const Partition& partition, int k, MatrixKind kind,
                           std::vector<int> index_set) {
  const auto& grid = partition.grid();
  const int L = is_star(kind) ? k + 1 : k;
  const bool take_max = kind == MatrixKind::upper || kind == MatrixKind::star_upper;
  const Rational eps = grid.step(L);
  const int T = grid.ratio();

  ScalingMatrix out;
  out.component = partition.component().index;
  out.level = k;
  out.kind = kind;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(index_set.size() * static_cast<std::size_t>(T));
  for (std::size_t p = 0; p < index_set.size(); ++p) {
    const int i = index_set[p];
    const auto& S = spec.map(grid.owner(L, i)).S;
    const Interval D = grid.preimage(L, i);
    double star_value = -1.0;
    for (int t = 0; t < T; ++t) {
      const Interval piece{D.lo + eps * t, D.lo + eps * (t + 1)};
      const auto j = grid.locate(L, piece);
      if (!j) continue;
      auto it = std::lower_bound(index_set.begin(), index_set.end(), *j);
      if (it == index_set.end() || *it != *j) continue;
      double value;
      if (is_star(kind)) {
        if (star_value < 0) {
          const Range range = poly_abs_range(S, D);
          star_value = take_max ? range.max : range.min;
        }
        value = star_value;
      } else {
        const Range range = poly_abs_range(S, piece);
        value = take_max ? range.max : range.min;
      }
      if (value != 0.0) triplets.emplace_back(static_cast<int>(p), static_cast<int>(it - index_set.begin()), value);
    }
  }
  const auto n = static_cast<Eigen::Index>(index_set.size());
  out.entries.resize(n, n);
  out.entries.setFromTriplets(triplets.begin(), triplets.end());
  out.entries.makeCompressed();
  out.index_set = std::move(index_set);
  return out;
}

bool is_irreducible(const SparseMatrix& M) {
  const auto n = static_cast<std::size_t>(M.rows());
  if (n == 0) return false;
  std::vector<std::vector<int>> succ(n);
  for (Eigen::Index row = 0; row < M.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(M, row); it; ++it) {
      if (it.value() > 0) succ[static_cast<std::size_t>(row)].push_back(static_cast<int>(it.col()));
    }
  }
  if (n == 1) return !succ[0].empty();
  return scc_classes(succ).size() == 1;
}

bool is_irreducible(const Eigen::MatrixXd& M) {
  return is_irreducible(SparseMatrix(M.sparseView()));
}

SpectraSequence spectra_sequence(const RfifSpec& spec, const Partition& partition, int kmax, double tol) {
  if (kmax < 1 || kmax > partition.depth()) throw std::invalid_argument("kmax outside the built partition");
  SpectraSequence out;
  out.component = partition.component().index;
  for (int k = 1; k <= kmax; ++k) {
    out.upper_rho.push_back(spectral_radius(build_matrix(spec, partition, k, MatrixKind::upper), tol));
    out.lower_rho.push_back(spectral_radius(build_matrix(spec, partition, k, MatrixKind::lower), tol));
  }
  out.bracket_lo = out.lower_rho.back();
  out.bracket_hi = out.upper_rho.back();
  out.estimate = 0.5 * (out.bracket_lo + out.bracket_hi);
  out.one_sided = !(min_abs_scaling(spec, partition, kmax) > 0.0);
  return out;
}

SpectraSequence spectra_sequence(const RfifSpec& spec, const std::vector<Component>& comps, int r, int kmax,
                                 double tol) {
  return spectra_sequence(spec, build_partition(spec, comps, r, kmax), kmax, tol);
}

}  // namespace recurdim
