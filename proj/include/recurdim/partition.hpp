#pragma once

#include <optional>
#include <vector>

#include "recurdim/graph.hpp"
#include "recurdim/spec.hpp"

namespace recurdim {

/// Deepest level build_partition() accepts.
inline constexpr int kMaxLevel = 14;

/// Exact geometry of the T_r-adic grid on the intervals of one component.
///
/// Level-k index i = (t-1) T^{k-1} + j (1-based) names the j-th of T^{k-1}
/// equal pieces of I_{a_t}.
class ComponentGrid {
 public:
  ComponentGrid(const RfifSpec& spec, Component component);

  const Component& component() const { return component_; }
  int ratio() const { return component_.ratio; }
  int members() const { return component_.size(); }

  /// d_r T^{k-1}; throws std::out_of_range when the level is too fine to index.
  int count(int k) const;
  /// Length of every level-k interval.
  Rational step(int k) const;

  Interval interval(int k, int i) const;
  /// The map n with I^k_i inside I_n.
  int owner(int k, int i) const;
  /// L_owner^{-1}(I^k_i), normalized to lo <= hi.
  Interval preimage(int k, int i) const;
  /// Index of the level-k interval equal to J, if any.
  std::optional<int> locate(int k, const Interval& J) const;

  /// Level-(k+1) indices of the T children of level-k index i.
  int first_child(int i) const { return (i - 1) * ratio() + 1; }

 private:
  int member_slot(int k, int i) const;

  Component component_;
  std::vector<Rational> starts_;  // x_{a_t - 1}
  std::vector<AffineMap> maps_;   // L_{a_t}
  Rational base_step_;            // |I_n|
};

/// Surviving indices of one level.
struct PartitionLevel {
  int component = 0;
  int level = 0;
  std::vector<int> theta;        ///< Θ_{r,k}, sorted
  std::vector<int> theta_tilde;  ///< Θ̃_{r,k}: level-(k+1) children of Θ_{r,k}
  std::vector<bool> member;      ///< member[i] <=> i in Θ_{r,k}; index 0 unused

  bool survives(int i) const { return i > 0 && static_cast<std::size_t>(i) < member.size() && member[i]; }
};

/// Levels 1..depth of one component's basic intervals.
class Partition {
 public:
  Partition(ComponentGrid grid, std::vector<PartitionLevel> levels, bool stationary)
      : grid_(std::move(grid)), levels_(std::move(levels)), stationary_(stationary) {}

  const ComponentGrid& grid() const { return grid_; }
  const Component& component() const { return grid_.component(); }
  int depth() const { return static_cast<int>(levels_.size()); }
  const PartitionLevel& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
  /// True when B_{r,k} = B_{r,1} for every k.
  bool stationary() const { return stationary_; }

  /// B_{r,k} as a sorted list of maximal disjoint intervals.
  std::vector<Interval> basic_set(int k) const;

 private:
  ComponentGrid grid_;
  std::vector<PartitionLevel> levels_;
  bool stationary_;
};

/// I^k_{r,i}; throws std::out_of_range for an index outside 1..d_r T^{k-1}.
Interval basic_interval(const ComponentGrid& grid, int k, int i);

/// D^k_{r,i}.
Interval domain_interval(const ComponentGrid& grid, int k, int i);

/// Levels 1..kmax of component r (1-based). An index survives to level k+1
/// iff its preimage is exactly a surviving level-k interval.
Partition build_partition(const RfifSpec& spec, const std::vector<Component>& comps, int r, int kmax);

/// Θ_{r,2} == Θ̃_{r,1}, equivalently B_{r,k} = B_{r,1} for all k.
bool stationarity_check(const Partition& partition);

/// min over n in Λ_r of min |S_n| on D_n ∩ B_{r,k}; +inf when every
/// intersection is empty.
double min_abs_scaling(const RfifSpec& spec, const Partition& partition, int k);

}  // namespace recurdim
