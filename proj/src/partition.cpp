#include "recurdim/partition.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace recurdim {

namespace {

constexpr std::int64_t kMaxIndexCount = std::int64_t{1} << 26;

std::int64_t checked_power(int base, int exponent) {
  std::int64_t out = 1;
  for (int e = 0; e < exponent; ++e) {
    out *= base;
    if (out > kMaxIndexCount) throw std::out_of_range("level too fine to index");
  }
  return out;
}

}  // namespace

ComponentGrid::ComponentGrid(const RfifSpec& spec, Component component)
    : component_(std::move(component)) {
  for (int n : component_.members) {
    starts_.push_back(spec.interval(n).lo);
    maps_.push_back(spec.map(n).L);
  }
  base_step_ = spec.width() / spec.size();
}

int ComponentGrid::count(int k) const {
  if (k < 1) throw std::out_of_range("level must be >= 1");
  const std::int64_t c = checked_power(ratio(), k - 1) * members();
  if (c > kMaxIndexCount) throw std::out_of_range("level too fine to index");
  return static_cast<int>(c);
}

Rational ComponentGrid::step(int k) const {
  return base_step_ / Rational(checked_power(ratio(), k - 1));
}

int ComponentGrid::member_slot(int k, int i) const {
  if (i < 1 || i > count(k)) {
    throw std::out_of_range("index " + std::to_string(i) + " outside 1.." + std::to_string(count(k)) +
                            " at level " + std::to_string(k));
  }
  return static_cast<int>((i - 1) / checked_power(ratio(), k - 1));
}

Interval ComponentGrid::interval(int k, int i) const {
  const int t = member_slot(k, i);
  const std::int64_t j = (i - 1) - t * checked_power(ratio(), k - 1);
  const Rational eps = step(k);
  const Rational lo = starts_[t] + eps * j;
  return {lo, lo + eps};
}

int ComponentGrid::owner(int k, int i) const { return component_.members[member_slot(k, i)]; }

Interval ComponentGrid::preimage(int k, int i) const {
  return maps_[member_slot(k, i)].preimage(interval(k, i));
}

std::optional<int> ComponentGrid::locate(int k, const Interval& J) const {
  const Rational eps = step(k);
  if (J.length() != eps) return std::nullopt;
  for (std::size_t t = 0; t < starts_.size(); ++t) {
    if (J.lo < starts_[t] || !(J.lo < starts_[t] + base_step_)) continue;
    const Rational offset = (J.lo - starts_[t]) / eps;
    if (offset.denominator() != 1) return std::nullopt;
    return static_cast<int>(static_cast<std::int64_t>(t) * checked_power(ratio(), k - 1) + offset.numerator() + 1);
  }
  return std::nullopt;
}

Interval basic_interval(const ComponentGrid& grid, int k, int i) { return grid.interval(k, i); }

Interval domain_interval(const ComponentGrid& grid, int k, int i) { return grid.preimage(k, i); }

namespace {

PartitionLevel make_level(const ComponentGrid& grid, int r, int k, std::vector<int> theta) {
  PartitionLevel level;
  level.component = r;
  level.level = k;
  level.member.assign(static_cast<std::size_t>(grid.count(k)) + 1, false);
  for (int i : theta) level.member[i] = true;
  const int T = grid.ratio();
  level.theta_tilde.reserve(theta.size() * static_cast<std::size_t>(T));
  for (int i : theta) {
    for (int t = 0; t < T; ++t) level.theta_tilde.push_back(grid.first_child(i) + t);
  }
  level.theta = std::move(theta);
  return level;
}

std::vector<int> full_range(int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = i + 1;
  return out;
}

std::vector<int> next_survivors(const ComponentGrid& grid, const PartitionLevel& prev) {
  const int k = prev.level;
  std::vector<int> out;
  const int count = grid.count(k + 1);
  for (int i = 1; i <= count; ++i) {
    const auto j = grid.locate(k, grid.preimage(k + 1, i));
    if (j && prev.survives(*j)) out.push_back(i);
  }
  return out;
}

}  // namespace

Partition build_partition(const RfifSpec& spec, const std::vector<Component>& comps, int r, int kmax) {
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
  if (kmax > kMaxLevel) {
    throw std::invalid_argument("kmax " + std::to_string(kmax) + " exceeds the cap " + std::to_string(kMaxLevel));
  }
  if (r < 1 || r > static_cast<int>(comps.size())) throw std::out_of_range("no component " + std::to_string(r));
  ComponentGrid grid(spec, comps[static_cast<std::size_t>(r - 1)]);

  std::vector<PartitionLevel> levels;
  levels.push_back(make_level(grid, r, 1, full_range(grid.members())));
  const auto second = next_survivors(grid, levels.front());
  const bool stationary = second == levels.front().theta_tilde;

  for (int k = 2; k <= kmax; ++k) {
    std::vector<int> theta;
    if (stationary) {
      theta = full_range(grid.count(k));
    } else if (k == 2) {
      theta = second;
    } else {
      theta = next_survivors(grid, levels.back());
    }
    levels.push_back(make_level(grid, r, k, std::move(theta)));
  }
  return Partition(std::move(grid), std::move(levels), stationary);
}

bool stationarity_check(const Partition& partition) { return partition.stationary(); }

std::vector<Interval> Partition::basic_set(int k) const {
  std::vector<Interval> runs;
  for (int i : level(k).theta) {
    const Interval I = grid_.interval(k, i);
    if (!runs.empty() && runs.back().hi == I.lo) {
      runs.back().hi = I.hi;
    } else {
      runs.push_back(I);
    }
  }
  return runs;
}

double min_abs_scaling(const RfifSpec& spec, const Partition& partition, int k) {
  double best = std::numeric_limits<double>::infinity();
  const auto runs = partition.basic_set(k);
  for (int n : partition.component().members) {
    const Interval D = spec.domain_of(n);
    for (const auto& run : runs) {
      const Rational lo = std::max(run.lo, D.lo);
      const Rational hi = std::min(run.hi, D.hi);
      if (hi < lo) continue;
      best = std::min(best, poly_abs_range(spec.map(n).S, {lo, hi}).min);
    }
  }
  return best;
}

}  // namespace recurdim
