#pragma once

#include <utility>
#include <vector>

#include "recurdim/spec.hpp"

namespace recurdim {

/// Digraph on vertices 1..N with an edge j -> i whenever I_j is contained in D_i.
class AddressGraph {
 public:
  AddressGraph() = default;
  /// Edges are (from, to) pairs on 1-based vertices.
  AddressGraph(int size, const std::vector<std::pair<int, int>>& edges);

  int size() const { return size_; }
  bool has_edge(int from, int to) const {
    return adjacency_[static_cast<std::size_t>((from - 1) * size_ + (to - 1))] != 0;
  }
  const std::vector<int>& successors(int v) const { return successors_[static_cast<std::size_t>(v - 1)]; }
  std::size_t edge_count() const;

 private:
  int size_ = 0;
  std::vector<char> adjacency_;
  std::vector<std::vector<int>> successors_;
};

AddressGraph build_address_graph(const RfifSpec& spec);

/// Tarjan decomposition of a digraph given by 0-based successor lists.
/// Returns every strongly connected class, singletons included, each sorted.
std::vector<std::vector<int>> scc_classes(const std::vector<std::vector<int>>& successors);

/// One strongly connected component Λ_r with its uniform ratio T_r.
struct Component {
  int index = 0;             ///< r, 1-based
  std::vector<int> members;  ///< sorted map indices a_{r,1} < ... < a_{r,d_r}
  int ratio = 0;             ///< T_r = |D_n| / |I_n|

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int n) const;
};

/// Strongly connected vertex sets that carry at least one edge (a singleton
/// only with a self-loop), ordered by smallest member.
std::vector<std::vector<int>> cycle_components(const AddressGraph& graph);

/// Ratio-condition failures for every cycle-bearing component.
std::vector<Violation> ratio_violations(const AddressGraph& graph, const RfifSpec& spec);

/// Components with their ratios; throws RatioError on the first map whose
/// |D_n|/|I_n| is non-integer, non-uniform within its component, or below 2.
std::vector<Component> components(const AddressGraph& graph, const RfifSpec& spec);

/// Depth of each vertex in the condensation order.
struct PositionMap {
  std::vector<int> position;               ///< P(i) at index i-1
  std::vector<std::vector<int>> ancestors;  ///< 𝒜(i) at index i-1, sorted

  int operator()(int i) const { return position[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& ancestors_of(int i) const { return ancestors[static_cast<std::size_t>(i - 1)]; }
};

PositionMap positions(const AddressGraph& graph, const std::vector<Component>& comps);

/// reach[a][b] == true iff a nonempty path leads from vertex a+1 to b+1.
std::vector<std::vector<bool>> reachability(const AddressGraph& graph);

}  // namespace recurdim
