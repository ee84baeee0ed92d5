#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "recurdim/polynomial.hpp"
#include "recurdim/rational.hpp"

namespace recurdim {

enum class Orientation { increasing, decreasing };

/// x -> slope * x + intercept on exact rationals.
struct AffineMap {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& x) const { return slope * x + intercept; }
  Rational inverse(const Rational& u) const { return (u - intercept) / slope; }
  double operator()(double x) const { return to_double(slope) * x + to_double(intercept); }

  Interval image(const Interval& J) const { return normalized((*this)(J.lo), (*this)(J.hi)); }
  Interval preimage(const Interval& J) const { return normalized(inverse(J.lo), inverse(J.hi)); }

 private:
  static Interval normalized(const Rational& a, const Rational& b) {
    return a <= b ? Interval{a, b} : Interval{b, a};
  }
};

/// One map W_n(x, y) = (L(x), S(x) y + q(x)) sending the graph over
/// D_n = [x_ell, x_r] onto the graph over I_n = [x_{n-1}, x_n].
struct MapSpec {
  int n = 0;
  int ell = 0;
  int r = 0;
  Orientation orientation = Orientation::increasing;
  AffineMap L;
  Polynomial S;
  Polynomial q;
};

struct Node {
  Rational x;
  double y = 0.0;
};

/// A complete recurrent fractal interpolation problem.
///
/// Construction enforces the structural invariants (N >= 2, strictly
/// increasing nodes, one map per index, ell < r in range) and derives each
/// L_n from its endpoints and orientation; the analytic conditions are left
/// to validate_spec().
class RfifSpec {
 public:
  /// `maps` may be given in any order; they are stored by index.
  RfifSpec(std::vector<Node> nodes, std::vector<MapSpec> maps);

  int size() const { return static_cast<int>(maps_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<MapSpec>& maps() const { return maps_; }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const MapSpec& map(int n) const { return maps_.at(static_cast<std::size_t>(n - 1)); }

  Rational x0() const { return nodes_.front().x; }
  Rational xN() const { return nodes_.back().x; }
  Rational width() const { return xN() - x0(); }
  Interval domain() const { return {x0(), xN()}; }

  /// I_n = [x_{n-1}, x_n].
  Interval interval(int n) const { return {node(n - 1).x, node(n).x}; }
  /// D_n = [x_ell(n), x_r(n)].
  Interval domain_of(int n) const { return {node(map(n).ell).x, node(map(n).r).x}; }

  /// max_n sup_{D_n} |S_n|.
  double contraction_bound() const;

 private:
  std::vector<Node> nodes_;
  std::vector<MapSpec> maps_;
};

/// The affine map sending [x_ell, x_r] onto [x_{n-1}, x_n] with the given orientation.
AffineMap derive_affine_map(const Interval& domain, const Interval& image, Orientation orientation);

RfifSpec parse_spec(std::string_view text);
RfifSpec load_spec(const std::string& path);
std::string serialize_spec(const RfifSpec& spec);

struct Violation {
  std::string code;
  std::string message;
  int map = 0;  ///< 0 when the violation is not tied to one map

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
  /// T_r per strongly connected component, in component order; empty when
  /// the ratio check could not run.
  std::vector<int> ratios;
  /// Informational lines (conditions that hold automatically, for instance).
  std::vector<std::string> notes;

  void add(Violation v) {
    violations.push_back(std::move(v));
    passed = false;
  }
  /// One `CODE<TAB>map=N<TAB>message` line per violation.
  std::string to_text() const;
};

inline constexpr double kInterpolationTolerance = 1e-9;

/// Checks uniform spacing, |S_n| < 1 on D_n, the interpolation constraint
/// and the per-component ratio condition, collecting every failure.
ValidationReport validate_spec(const RfifSpec& spec);

}  // namespace recurdim
