#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace recurdim;

namespace {

struct Six {
  RfifSpec spec = testing::load("example6.cfg");
  std::vector<Component> comps = components(build_address_graph(spec), spec);
};

Eigen::MatrixXd random_nonnegative(std::mt19937& rng, int n, double density) {
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::bernoulli_distribution keep(density);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (keep(rng)) A(i, j) = val(rng);
  return A;
}

}  // namespace

TEST_SUITE("scaling") {

TEST_CASE("lower matrix of the second component at level two") {
  const Six s;
  const auto part = build_partition(s.spec, s.comps, 2, 3);
  const auto M = build_matrix(s.spec, part, 2, MatrixKind::lower);
  Eigen::MatrixXd want(4, 4);
  want << 7.0 / 10, 11.0 / 15, 0, 0,  //
      0, 0, 23.0 / 30, 4.0 / 5,       //
      0, 0, 0.5, 0.5,                 //
      0.5, 0.5, 0, 0;
  REQUIRE(M.order() == 4);
  CHECK((M.dense() - want).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(M.at(2, 3) == doctest::Approx(23.0 / 30));
  CHECK(M.at(2, 1) == 0.0);
  CHECK(is_irreducible(M));
  CHECK(spectral_radius(M) == doctest::Approx(1.2433).epsilon(5e-4 / 1.2433));
  CHECK(spectral_radius(M) == doctest::Approx(testing::charpoly_radius(want)).epsilon(1e-9));
}

TEST_CASE("upper matrix of the second component at level one") {
  const Six s;
  const auto part = build_partition(s.spec, s.comps, 2, 2);
  const auto M = build_matrix(s.spec, part, 1, MatrixKind::upper);
  Eigen::MatrixXd want(2, 2);
  want << 23.0 / 30, 5.0 / 6, 0.5, 0.5;
  CHECK((M.dense() - want).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(M.index_set == std::vector<int>{1, 2});
}

TEST_CASE("constant scaling gives constant matrices") {
  const auto spec = testing::load("classical_fif.cfg");
  const auto comps = components(build_address_graph(spec), spec);
  const auto part = build_partition(spec, comps, 1, 6);
  for (int k = 1; k <= 5; ++k) {
    for (auto kind : {MatrixKind::upper, MatrixKind::lower, MatrixKind::star_upper, MatrixKind::star_lower}) {
      const auto M = build_matrix(spec, part, k, kind).dense();
      for (Eigen::Index i = 0; i < M.rows(); ++i) {
        CHECK((M.row(i).array() != 0.0).count() == 2);
        CHECK(M.row(i).sum() == doctest::Approx(1.6).epsilon(1e-15));
      }
      if (k == 1 && !is_star(kind)) CHECK((M.array() - 0.8).abs().maxCoeff() <= 1e-15);
    }
  }
  const auto seq = spectra_sequence(spec, comps, 1, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(seq.upper_rho[k] == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(seq.lower_rho[k] == doctest::Approx(1.6).epsilon(1e-12));
  }
}

TEST_CASE("matrix kinds") {
  CHECK(parse_matrix_kind("star_lower") == MatrixKind::star_lower);
  CHECK(to_string(MatrixKind::upper) == "upper");
  CHECK(is_star(MatrixKind::star_upper));
  CHECK_FALSE(is_star(MatrixKind::lower));
  CHECK_THROWS(parse_matrix_kind("middle"));
}

TEST_CASE("irreducibility") {
  CHECK_FALSE(is_irreducible(Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 3))));
  CHECK_FALSE(is_irreducible(Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 1))));
  CHECK(is_irreducible(Eigen::MatrixXd(Eigen::MatrixXd::Constant(1, 1, 0.3))));
  Eigen::MatrixXd cycle = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) cycle(i, (i + 1) % 4) = 1.0;
  CHECK(is_irreducible(cycle));
  cycle(3, 0) = 0.0;
  CHECK_FALSE(is_irreducible(cycle));
  const SparseMatrix sparse = Eigen::MatrixXd::Identity(2, 2).sparseView();
  CHECK_FALSE(is_irreducible(sparse));

  const Six s;
  for (int r = 1; r <= 2; ++r) {
    const auto part = build_partition(s.spec, s.comps, r, 7);
    for (int k = 1; k <= 6; ++k) {
      for (auto kind : {MatrixKind::upper, MatrixKind::lower}) {
        CHECK_MESSAGE(is_irreducible(build_matrix(s.spec, part, k, kind)), "r=" << r << " k=" << k);
      }
    }
  }
}

TEST_CASE("radius of small matrices") {
  CHECK(spectral_radius(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))) == doctest::Approx(1.0));
  Eigen::MatrixXd nil(2, 2);
  nil << 0, 1, 0, 0;
  CHECK(spectral_radius(nil) == 0.0);
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 2, 0.5, 0;
  CHECK(spectral_radius(swap) == doctest::Approx(1.0).epsilon(1e-10));
  Eigen::MatrixXd rot = Eigen::MatrixXd::Zero(3, 3);
  rot(0, 1) = rot(1, 2) = rot(2, 0) = 0.7;
  CHECK(spectral_radius(rot) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(spectral_radius(Eigen::MatrixXd(0, 0)) == 0.0);
  CHECK_THROWS_AS(spectral_radius(swap, 0.0), std::invalid_argument);
}

TEST_CASE("radius agrees with the characteristic polynomial") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> order(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto A = random_nonnegative(rng, order(rng), 0.6);
    const double want = testing::charpoly_radius(A);
    CHECK(spectral_radius(A) == doctest::Approx(want).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("monotonicity of the radius") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> order(2, 8);
  std::uniform_real_distribution<double> bump(0.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = order(rng);
    const auto A = random_nonnegative(rng, n, 0.5);
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
      if (std::bernoulli_distribution(0.6)(rng)) keep.push_back(i);
    if (keep.empty()) keep.push_back(0);
    Eigen::MatrixXd sub(keep.size(), keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = A(keep[a], keep[b]);
    CHECK(spectral_radius(sub) <= spectral_radius(A) + 1e-9);

    Eigen::MatrixXd B = A;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) += bump(rng);
    CHECK(spectral_radius(A) <= spectral_radius(B) + 1e-9);
  }
}

TEST_CASE("star radii match the restricted matrices") {
  const Six s;
  for (int r = 1; r <= 2; ++r) {
    const auto part = build_partition(s.spec, s.comps, r, 7);
    for (int k = 1; k <= 5; ++k) {
      const auto star_tilde = build_matrix(s.spec, part, k, MatrixKind::star_upper);
      CHECK(star_tilde.index_set == part.level(k).theta_tilde);
      const auto star_next = build_matrix(s.spec, part, k, MatrixKind::star_upper, part.level(k + 1).theta);
      const double plain = spectral_radius(build_matrix(s.spec, part, k, MatrixKind::upper));
      const double a = spectral_radius(star_tilde);
      const double b = spectral_radius(star_next);
      CHECK(a == doctest::Approx(b).epsilon(1e-8));
      CHECK(plain == doctest::Approx(a).epsilon(1e-8));
    }
  }
}

TEST_CASE("entries respect inclusion and ordering") {
  const Six s;
  for (int r = 1; r <= 2; ++r) {
    const auto part = build_partition(s.spec, s.comps, r, 5);
    const auto& grid = part.grid();
    for (int k = 1; k <= 4; ++k) {
      const auto up = build_matrix(s.spec, part, k, MatrixKind::upper);
      const auto lo = build_matrix(s.spec, part, k, MatrixKind::lower);
      for (int i : part.level(k).theta) {
        for (int j : part.level(k).theta) {
          const bool inside = grid.preimage(k, i).contains(grid.interval(k, j));
          CHECK(up.at(i, j) >= 0.0);
          CHECK(up.at(i, j) < 1.0);
          CHECK(lo.at(i, j) <= up.at(i, j));
          if (!inside) CHECK(up.at(i, j) == 0.0);
          if (inside) {
            const auto range = poly_abs_range(s.spec.map(grid.owner(k, i)).S, grid.interval(k, j));
            CHECK(up.at(i, j) == doctest::Approx(range.max));
            CHECK(lo.at(i, j) == doctest::Approx(range.min));
          }
        }
      }
    }
  }
}

TEST_CASE("spectra of the six-map example") {
  const Six s;
  const auto one = spectra_sequence(s.spec, s.comps, 1, 10);
  REQUIRE(one.levels() == 10);
  const double up1[] = {1.8793, 1.8259, 1.8085};
  const double lo1[] = {1.7180, 1.7722};
  for (int k = 0; k < 3; ++k) CHECK(std::abs(one.upper_rho[k] - up1[k]) <= 5e-5);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(one.lower_rho[k] - lo1[k]) <= 5e-5);
  CHECK(one.bracket_hi - one.bracket_lo <= 1e-3);
  CHECK(std::abs(one.estimate - 1.800) <= 5e-4);
  CHECK_FALSE(one.one_sided);

  const auto two = spectra_sequence(s.spec, s.comps, 2, 10);
  CHECK(std::abs(two.estimate - 1.260) <= 5e-4);
  for (const auto* seq : {&one, &two}) {
    for (int k = 0; k + 1 < seq->levels(); ++k) {
      CHECK(seq->upper_rho[k + 1] <= seq->upper_rho[k] + 1e-9);
      CHECK(seq->lower_rho[k + 1] >= seq->lower_rho[k] - 1e-9);
      CHECK(seq->lower_rho[k] <= seq->upper_rho[k] + 1e-9);
    }
    CHECK(seq->bracket_lo == seq->lower_rho.back());
    CHECK(seq->bracket_hi == seq->upper_rho.back());
  }
}

TEST_CASE("monotone spectra on random specs") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = testing::random_spec(rng, 7);
    const auto comps = components(build_address_graph(spec), spec);
    for (int r = 1; r <= static_cast<int>(comps.size()); ++r) {
      const auto seq = spectra_sequence(spec, comps, r, 5);
      for (int k = 0; k + 1 < seq.levels(); ++k) {
        CHECK(seq.upper_rho[k + 1] <= seq.upper_rho[k] + 1e-9);
        CHECK(seq.lower_rho[k + 1] >= seq.lower_rho[k] - 1e-9);
      }
    }
  }
}

}  // TEST_SUITE
