#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace recurdim;

namespace {

struct Six {
  RfifSpec spec = testing::load("example6.cfg");
  std::vector<Component> comps = components(build_address_graph(spec), spec);
};

const double kClassical = 1.0 + std::log(1.6) / std::log(2.0);

void check_sandwich(const SampledRfif& f, int T, int pmin, int pmax, const Interval& J) {
  for (const auto& bc : box_ladder(f, T, pmin, pmax, J)) {
    const double O = oscillation_sum(f, T, bc.p, J);
    const double inv = 1.0 / bc.epsilon;
    const double len = to_double(J.length());
    CHECK(static_cast<double>(bc.count) >= 0.5 * inv * (O + len) - 1e-9);
    CHECK(static_cast<double>(bc.count) <= inv * (O + 2 * len) + 1e-9);
    CHECK(static_cast<double>(bc.count) >= std::pow(static_cast<double>(T), bc.p) - 1e-9);
  }
}

}  // namespace

TEST_SUITE("dimension") {

TEST_CASE("positivity levels") {
  const Six s;
  CHECK(k_star(s.spec, build_partition(s.spec, s.comps, 1, 4), 4) == 1);
  CHECK(k_star(s.spec, build_partition(s.spec, s.comps, 2, 4), 4) == 1);
  CHECK(min_abs_scaling(s.spec, build_partition(s.spec, s.comps, 1, 2), 1) == doctest::Approx(0.55));
  CHECK(min_abs_scaling(s.spec, build_partition(s.spec, s.comps, 2, 2), 1) == doctest::Approx(0.5));

  // S_4 vanishes at 0.64, inside D_4 ∩ B_{1,1} but past B_{1,2} = [1/6, 11/18].
  auto maps = s.spec.maps();
  maps[3] = testing::affine_map(s.spec.nodes(), 4, 2, 5, true, 1.5 * (1.0 / 3 - 0.64), 1.5 * (5.0 / 6 - 0.64));
  const RfifSpec shifted(s.spec.nodes(), maps);
  CHECK(validate_spec(shifted).passed);
  const auto part = build_partition(shifted, s.comps, 1, 4);
  CHECK(k_star(shifted, part, 4) == 2);
  CHECK_FALSE(k_star(shifted, part, 1));

  const auto flat = testing::load("flat.cfg");
  const auto fc = components(build_address_graph(flat), flat);
  CHECK_FALSE(k_star(flat, build_partition(flat, fc, 1, 4), 4));
}

TEST_CASE("component dimensions") {
  const auto one = d_star(1.8, 1.8, 3, VariationStatus::certified_infinite);
  CHECK(one.value == doctest::Approx(1.0 + std::log(1.8) / std::log(3.0)));
  CHECK(std::abs(one.value - 1.535) < 1e-3);
  CHECK(one.collapsed);
  CHECK_FALSE(one.flagged);
  CHECK(std::abs(d_star(1.26, 1.26, 2, VariationStatus::certified_infinite).value - 1.333) < 1e-3);

  const auto fin = d_star(1.8, 1.9, 3, VariationStatus::refuted_finite);
  CHECK(fin.value == 1.0);
  CHECK(fin.hi == 1.0);

  const auto open = d_star(1.7, 1.9, 3, VariationStatus::unknown);
  CHECK(open.flagged);
  CHECK(open.lo == 1.0);
  CHECK(open.hi == doctest::Approx(1.0 + std::log(1.9) / std::log(3.0)));
  CHECK_FALSE(open.collapsed);

  const auto wide = d_star(1.7, 1.9, 3, VariationStatus::certified_infinite);
  CHECK(wide.lo < wide.hi);
  CHECK(wide.lo == doctest::Approx(1.0 + std::log(1.7) / std::log(3.0)));
  CHECK_FALSE(wide.collapsed);

  CHECK_THROWS_AS(d_star(1.9, 1.7, 3, VariationStatus::certified_infinite), std::invalid_argument);
  CHECK_NOTHROW(d_star(1.8 + 1e-12, 1.8, 3, VariationStatus::certified_infinite));
  CHECK(d_star(0.5, 0.5, 2, VariationStatus::certified_infinite).value == 1.0);

  double prev = 1.0;
  for (double rho = 1.0; rho < 3.0; rho += 0.1) {
    const double v = d_star(rho, rho, 3, VariationStatus::certified_infinite).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("the six-map example end to end") {
  const Six s;
  const auto report = analyze(s.spec);
  REQUIRE(report.exact);
  CHECK(std::abs(*report.exact - 1.535) < 2e-3);
  CHECK_FALSE(report.exact_from_squeeze);
  CHECK(report.upper_bound >= *report.exact - 1e-9);
  REQUIRE(report.components.size() == 2);
  CHECK(report.positions == std::vector<int>{3, 2, 2, 2, 1, 1});
  for (const auto& c : report.components) {
    CHECK(c.k_star == 1);
    CHECK(c.certificate.status == VariationStatus::certified_infinite);
    CHECK(c.d_star.value > 1.0);
    CHECK(c.d_star.value < 2.0);
  }
  CHECK(std::abs(report.components[0].spectra.estimate - 1.800) <= 1e-3);
  CHECK(std::abs(report.components[1].spectra.estimate - 1.260) <= 1e-3);

  auto downgraded = report.components;
  downgraded[1].k_star.reset();
  const auto partial = dimension_bounds(downgraded);
  CHECK_FALSE(partial.exact);
  CHECK(partial.upper_bound == report.upper_bound);

  downgraded = report.components;
  downgraded[0].certificate.status = VariationStatus::unknown;
  CHECK_FALSE(dimension_bounds(downgraded).exact);
}

TEST_CASE("infinite variation flows along positive edges") {
  const Six s;
  const auto graph = build_address_graph(s.spec);
  const auto report = analyze(s.spec);
  auto reports = report.components;
  reports[0].certificate.status = VariationStatus::unknown;
  reports[0].d_star = d_star(0, 0, 3, VariationStatus::unknown);
  std::vector<Partition> parts{build_partition(s.spec, s.comps, 1, 3), build_partition(s.spec, s.comps, 2, 3)};
  propagate_variation(s.spec, graph, parts, reports);
  CHECK(reports[0].certificate.status == VariationStatus::certified_infinite);
  CHECK(reports[0].inherited_from == 5);
  CHECK(reports[0].d_star.value == doctest::Approx(report.components[0].d_star.value));
  CHECK_FALSE(reports[1].inherited_from);

  reports = report.components;
  reports[0].certificate.status = VariationStatus::unknown;
  reports[1].certificate.status = VariationStatus::unknown;
  propagate_variation(s.spec, graph, parts, reports);
  CHECK(reports[0].certificate.status == VariationStatus::unknown);
}

TEST_CASE("classical interpolants") {
  const auto spec = testing::load("classical_fif.cfg");
  const auto report = analyze(spec);
  REQUIRE(report.exact);
  CHECK(*report.exact == doctest::Approx(kClassical).epsilon(1e-9));
  CHECK(report.upper_bound == doctest::Approx(kClassical).epsilon(1e-9));

  const auto small = analyze(testing::load("classical_fif_s03.cfg"));
  REQUIRE(small.exact);
  CHECK(*small.exact == 1.0);
  CHECK(small.components[0].certificate.status == VariationStatus::refuted_finite);
}

TEST_CASE("flat interpolant") {
  const auto spec = testing::load("flat.cfg");
  AnalysisOptions opts;
  opts.empirical = true;
  const auto report = analyze(spec, opts);
  REQUIRE(report.exact);
  CHECK(*report.exact == 1.0);
  CHECK(report.exact_from_squeeze);
  CHECK(report.upper_bound == 1.0);
  for (const auto& c : report.components) CHECK(c.certificate.status == VariationStatus::refuted_finite);
  REQUIRE(report.empirical);
  CHECK(std::abs(report.empirical->slope - 1.0) < 0.03);
}

TEST_CASE("anchored box counts") {
  const Interval unit{Rational(0), Rational(1)};
  const auto zero = testing::sampled([](double) { return 0.0; }, 1024);
  CHECK(box_count(zero, Rational(1, 4), unit).count == 4);
  // Closed squares: the diagonal also touches the two off-diagonal squares at (1/2, 1/2).
  const auto diag = testing::sampled([](double x) { return x; }, 1024);
  CHECK(box_count(diag, Rational(1, 2), unit).count == 4);
  CHECK_THROWS_AS(box_count(diag, Rational(1, 1024), unit), ResolutionError);
  CHECK_NOTHROW(box_count(diag, Rational(2, 1024), unit));

  const Six s;
  const auto f = solve_rfif(s.spec, default_resolution(s.spec));
  const Rational eps(1, 6 * 243);
  const double O = oscillation_sum(f, 6 * 243, 1, unit);
  const auto bc = box_count(f, eps, unit);
  CHECK(static_cast<double>(bc.count) >= 0.5 * (O + 1.0) / to_double(eps));
  CHECK(static_cast<double>(bc.count) <= (O + 2.0) / to_double(eps) + 1e-9);
}

TEST_CASE("box-count sandwich on solved functions") {
  const Six s;
  const auto f = solve_rfif(s.spec, default_resolution(s.spec));
  check_sandwich(f, 3, 0, resolvable_depth(f, 3, s.spec.domain()), s.spec.domain());
  check_sandwich(f, 2, 0, resolvable_depth(f, 2, s.spec.domain()), s.spec.domain());
  check_sandwich(f, 2, 0, 6, {Rational(2, 3), Rational(1)});

  const auto spec = testing::load("classical_fif.cfg");
  const auto g = solve_rfif(spec, 1 << 15);
  check_sandwich(g, 2, 0, resolvable_depth(g, 2, spec.domain()), spec.domain());

  std::mt19937 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = testing::random_spec(rng, 6);
    const auto h = solve_rfif(r, 729);
    check_sandwich(h, 3, 0, resolvable_depth(h, 3, r.domain()), r.domain());
  }
}

TEST_CASE("empirical slopes") {
  const Six s;
  const auto f = solve_rfif(s.spec, default_resolution(s.spec));
  const auto fit = empirical_dimension(f, 3, 3, 8, s.spec.domain());
  CHECK(std::abs(fit.slope - 1.535) < 0.06);
  CHECK(fit.ladder.size() == 6);
  CHECK(fit.ratio == 3);
  CHECK(fit.stderr_ >= 0.0);
  CHECK_THROWS_AS(empirical_dimension(f, 3, 3, 4, s.spec.domain()), std::invalid_argument);
  CHECK(resolvable_depth(f, 3, s.spec.domain()) == 8);

  const auto line = testing::sampled([](double x) { return 0.3 * x; }, 1 << 16);
  CHECK(std::abs(empirical_dimension(line, 2, 3, 10, {Rational(0), Rational(1)}).slope - 1.0) < 0.03);
}

TEST_CASE("worker count does not change the report") {
  const Six s;
  AnalysisOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = analyze(s.spec, one);
  const auto b = analyze(s.spec, many);
  REQUIRE(a.exact);
  REQUIRE(b.exact);
  CHECK(*a.exact == *b.exact);
  CHECK(a.upper_bound == b.upper_bound);
  for (std::size_t r = 0; r < a.components.size(); ++r) {
    CHECK(a.components[r].spectra.upper_rho == b.components[r].spectra.upper_rho);
    CHECK(a.components[r].spectra.lower_rho == b.components[r].spectra.lower_rho);
    CHECK(a.components[r].certificate.witness_p == b.components[r].certificate.witness_p);
  }
  CHECK(thread_budget() >= 1);
}

TEST_CASE("analysis options are checked") {
  const Six s;
  AnalysisOptions opts;
  opts.kmax = 0;
  CHECK_THROWS_AS(analyze(s.spec, opts), std::invalid_argument);
  opts.kmax = 15;
  CHECK_THROWS_AS(analyze(s.spec, opts), std::invalid_argument);
}

}  // TEST_SUITE
