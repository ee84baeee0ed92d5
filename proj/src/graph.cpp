#include "recurdim/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

#include "recurdim/error.hpp"

namespace recurdim {

AddressGraph::AddressGraph(int size, const std::vector<std::pair<int, int>>& edges)
    : size_(size),
      adjacency_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0),
      successors_(static_cast<std::size_t>(size)) {
  for (auto [from, to] : edges) {
    auto& cell = adjacency_[static_cast<std::size_t>((from - 1) * size_ + (to - 1))];
    if (cell) continue;
    cell = 1;
    successors_[static_cast<std::size_t>(from - 1)].push_back(to);
  }
  for (auto& s : successors_) std::sort(s.begin(), s.end());
}

std::size_t AddressGraph::edge_count() const {
  return static_cast<std::size_t>(std::count(adjacency_.begin(), adjacency_.end(), 1));
}

AddressGraph build_address_graph(const RfifSpec& spec) {
  const int N = spec.size();
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j <= N; ++j) {
    for (int i = 1; i <= N; ++i) {
      if (spec.domain_of(i).contains(spec.interval(j))) edges.emplace_back(j, i);
    }
  }
  return AddressGraph(N, edges);
}

std::vector<std::vector<int>> scc_classes(const std::vector<std::vector<int>>& successors) {
  const int n = static_cast<int>(successors.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> out;
  int counter = 0;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : successors[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> cls;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        cls.push_back(w);
      } while (w != v);
      std::sort(cls.begin(), cls.end());
      out.push_back(std::move(cls));
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return out;
}

bool Component::contains(int n) const {
  return std::binary_search(members.begin(), members.end(), n);
}

std::vector<std::vector<int>> cycle_components(const AddressGraph& graph) {
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(graph.size()));
  for (int v = 1; v <= graph.size(); ++v) {
    for (int w : graph.successors(v)) succ[v - 1].push_back(w - 1);
  }
  std::vector<std::vector<int>> out;
  for (auto& cls : scc_classes(succ)) {
    if (cls.size() == 1 && !graph.has_edge(cls[0] + 1, cls[0] + 1)) continue;
    for (auto& v : cls) ++v;
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

namespace {

struct RatioCheck {
  int ratio = 0;
  std::vector<Violation> violations;
};

RatioCheck check_ratio(const std::vector<int>& members, const RfifSpec& spec) {
  RatioCheck out;
  std::optional<Rational> common;
  for (int n : members) {
    const Rational ratio = spec.domain_of(n).length() / spec.interval(n).length();
    const std::string where = "|D_" + std::to_string(n) + "|/|I_" + std::to_string(n) + "| = " + to_string(ratio);
    if (ratio.denominator() != 1) {
      out.violations.push_back({"A4", where + " is not an integer", n});
    } else if (ratio < 2) {
      out.violations.push_back({"A4", where + " is below 2", n});
    } else if (common && *common != ratio) {
      out.violations.push_back({"A4", where + " differs from " + to_string(*common) + " within the component", n});
    }
    if (!common) common = ratio;
  }
  if (out.violations.empty() && common) out.ratio = static_cast<int>(common->numerator());
  return out;
}

}  // namespace

std::vector<Violation> ratio_violations(const AddressGraph& graph, const RfifSpec& spec) {
  std::vector<Violation> out;
  for (const auto& members : cycle_components(graph)) {
    auto check = check_ratio(members, spec);
    out.insert(out.end(), check.violations.begin(), check.violations.end());
  }
  return out;
}

std::vector<Component> components(const AddressGraph& graph, const RfifSpec& spec) {
  std::vector<Component> out;
  for (auto& members : cycle_components(graph)) {
    auto check = check_ratio(members, spec);
    if (!check.violations.empty()) {
      throw RatioError(check.violations.front().message, check.violations.front().map);
    }
    out.push_back({static_cast<int>(out.size()) + 1, std::move(members), check.ratio});
  }
  return out;
}

std::vector<std::vector<bool>> reachability(const AddressGraph& graph) {
  const int N = graph.size();
  std::vector<std::vector<bool>> reach(N, std::vector<bool>(N, false));
  for (int s = 1; s <= N; ++s) {
    std::vector<int> frontier(graph.successors(s).begin(), graph.successors(s).end());
    while (!frontier.empty()) {
      int v = frontier.back();
      frontier.pop_back();
      if (reach[s - 1][v - 1]) continue;
      reach[s - 1][v - 1] = true;
      for (int w : graph.successors(v)) {
        if (!reach[s - 1][w - 1]) frontier.push_back(w);
      }
    }
  }
  return reach;
}

PositionMap positions(const AddressGraph& graph, const std::vector<Component>& comps) {
  const int N = graph.size();
  // Vertices outside every component are only equivalent to themselves.
  std::vector<int> label(N);
  std::iota(label.begin(), label.end(), N + 1);
  for (const auto& c : comps) {
    for (int n : c.members) label[n - 1] = c.index;
  }
  const auto reach = reachability(graph);

  PositionMap out;
  out.position.assign(N, 0);
  out.ancestors.resize(N);
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= N; ++j) {
      if (label[j - 1] != label[i - 1] && reach[j - 1][i - 1]) out.ancestors[i - 1].push_back(j);
    }
  }
  // j in 𝒜(i) never has i in 𝒜(j), so the recursion terminates.
  std::function<int(int)> depth = [&](int i) -> int {
    int& p = out.position[i - 1];
    if (p > 0) return p;
    int best = 0;
    for (int j : out.ancestors[i - 1]) best = std::max(best, depth(j));
    p = best + 1;
    return p;
  };
  for (int i = 1; i <= N; ++i) depth(i);
  return out;
}

}  // namespace recurdim
