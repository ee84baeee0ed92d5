#include <cmath>
#include <sstream>

#include "recurdim/graph.hpp"
#include "recurdim/spec.hpp"

namespace recurdim {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

ValidationReport validate_spec(const RfifSpec& spec) {
  ValidationReport report;
  const int N = spec.size();

  // Uniform node spacing, compared exactly.
  const Rational spacing = spec.width() / N;
  for (int n = 1; n <= N; ++n) {
    if (spec.interval(n).length() != spacing) {
      report.add({"A1", "x_" + std::to_string(n) + " - x_" + std::to_string(n - 1) + " = " +
                            to_string(spec.interval(n).length()) + ", expected " + to_string(spacing),
                  n});
    }
  }

  for (const auto& m : spec.maps()) {
    const Interval D = spec.domain_of(m.n);
    const double sup_s = poly_abs_range(m.S, D).max;
    if (!(sup_s < 1.0)) {
      report.add({"A2", "sup|S_n| on D_n is " + fmt(sup_s) + " ≥ 1", m.n});
    }
  }
  report.notes.push_back("A3: polynomial coefficients have bounded variation");

  for (const auto& m : spec.maps()) {
    const Interval I = spec.interval(m.n);
    const auto& left = spec.node(m.ell);
    const auto& right = spec.node(m.r);
    const bool inc = m.orientation == Orientation::increasing;
    const Node& to_left = spec.node(inc ? m.n - 1 : m.n);
    const Node& to_right = spec.node(inc ? m.n : m.n - 1);

    if (m.L(left.x) != to_left.x || m.L(right.x) != to_right.x || m.L.image(spec.domain_of(m.n)) != I) {
      report.add({"INTERP", "L_n does not map D_n onto I_n", m.n});
      continue;
    }
    const auto F = [&](const Node& p) { return m.S(to_double(p.x)) * p.y + m.q(to_double(p.x)); };
    const double e1 = std::abs(F(left) - to_left.y);
    const double e2 = std::abs(F(right) - to_right.y);
    if (e1 > kInterpolationTolerance || e2 > kInterpolationTolerance) {
      report.add({"INTERP",
                  "W_n misses the interpolation points by " + fmt(std::max(e1, e2)) + " in y",
                  m.n});
    }
  }

  const auto graph = build_address_graph(spec);
  auto ratio_errors = ratio_violations(graph, spec);
  if (ratio_errors.empty()) {
    for (const auto& c : components(graph, spec)) report.ratios.push_back(c.ratio);
  }
  for (auto& v : ratio_errors) report.add(std::move(v));
  return report;
}

}  // namespace recurdim
