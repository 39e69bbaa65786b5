#include "search_engine.hpp"

#include <algorithm>
#include <bit>

namespace ruzsa::search::detail {

namespace {

constexpr std::uint64_t kCheckEvery = 4096;

inline std::uint64_t bit(std::uint32_t x) { return std::uint64_t{1} << x; }

// Residues in [lo, hi] (inclusive) as a mask; empty when lo > hi.
inline std::uint64_t span_mask(std::uint32_t lo, std::uint32_t hi) {
  if (lo > hi || lo >= 64) return 0;
  const std::uint64_t upto = hi >= 63 ? ~std::uint64_t{0} : (bit(hi + 1) - 1);
  return upto & ~(bit(lo) - 1);
}

}  // namespace

Problem make_problem(std::uint32_t m, std::uint32_t r, std::uint32_t k, const symmetry::NormalizationPlan& plan) {
  Problem p{m, r, k, {}};
  for (const auto& b : plan.branches) {
    BranchSpec spec;
    for (auto f : b.forced) spec.forced |= bit(f);
    for (auto x : b.pool) spec.pool |= bit(x);
    spec.pool &= ~spec.forced;
    spec.widest_gap_last = b.widest_gap_last;
    p.branches.push_back(spec);
  }
  return p;
}

Explorer::Explorer(const Problem& problem, const simd::KernelTable& kernels) : problem_(problem), kernels_(kernels) {
  stack_.reserve(problem.k + 2);
}

bool Explorer::build_root(const WorkItem& item, Frame& frame) const {
  const std::uint32_t m = problem_.m;
  frame.members = item.members;
  frame.size = static_cast<std::uint32_t>(std::popcount(item.members));
  frame.next = item.next;
  frame.counts = simd::CountBlock{};
  std::uint64_t built = 0;
  std::uint32_t prev = 0;
  bool first = true;
  frame.last = 0;
  frame.widest = 0;
  for (std::uint64_t rest = item.members; rest != 0; rest &= rest - 1) {
    const auto x = static_cast<std::uint32_t>(std::countr_zero(rest));
    if (!kernels_.add_element(frame.counts, built, m, x, problem_.r)) return false;
    built |= bit(x);
    if (!first) frame.widest = std::max(frame.widest, x - prev);
    prev = x;
    first = false;
  }
  frame.last = prev;
  return true;
}

ItemResult Explorer::run(const WorkItem& item, std::size_t index, const StopSignals& stop,
                         std::optional<std::uint32_t> emit_size, std::vector<WorkItem>* emitted,
                         std::vector<std::uint64_t>* collect) {
  ItemResult result;
  const std::uint32_t m = problem_.m;
  const std::uint32_t k = problem_.k;
  const BranchSpec& branch = problem_.branches.at(item.branch);
  const bool gap_rule = branch.widest_gap_last;

  stack_.clear();
  stack_.emplace_back();
  if (!build_root(item, stack_.back())) {
    result.status = ItemStatus::complete;
    return result;
  }

  std::uint64_t since_check = 0;
  std::uint64_t flushed = 0;
  std::vector<std::uint64_t> local_depths(stop.live_depths ? stop.live_depths->size() : 0, 0);
  auto flush_live = [&] {
    if (stop.live_nodes) stop.live_nodes->fetch_add(result.nodes - flushed, std::memory_order_relaxed);
    flushed = result.nodes;
    for (std::size_t d = 0; d < local_depths.size(); ++d) {
      if (local_depths[d] != 0) {
        (*stop.live_depths)[d].fetch_add(local_depths[d], std::memory_order_relaxed);
        local_depths[d] = 0;
      }
    }
  };
  auto interrupt = [&](ItemStatus status) {
    result.status = status;
    if (status == ItemStatus::interrupted) {
      for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
        result.frontier.push_back(WorkItem{item.branch, it->members, it->next});
      }
    }
    flush_live();
    return result;
  };

  while (!stack_.empty()) {
    if (since_check >= kCheckEvery) {
      since_check = 0;
      flush_live();
      if (stop.best_found && index > stop.best_found->load(std::memory_order_relaxed)) {
        return interrupt(ItemStatus::aborted);
      }
      if (stop.deadline && std::chrono::steady_clock::now() >= *stop.deadline) {
        if (stop.deadline_hit) stop.deadline_hit->store(true);
        return interrupt(ItemStatus::interrupted);
      }
    }

    Frame& top = stack_.back();
    const std::uint32_t need = k - top.size;  // elements still to add, >= 1
    // Largest residue any future element may take.
    std::uint32_t limit = m - 1;
    if (gap_rule) limit = m - std::max<std::uint32_t>(top.widest, 1);
    const std::uint64_t open = branch.pool & span_mask(top.next, limit);
    if (need == 0 || static_cast<std::uint32_t>(std::popcount(open)) < need) {
      stack_.pop_back();
      continue;
    }
    const auto x = static_cast<std::uint32_t>(std::countr_zero(open));
    top.next = x + 1;
    const std::uint32_t widest = gap_rule ? std::max(top.widest, x - top.last) : 0;
    if (gap_rule && x > m - widest) {
      // Larger x only widen the gap further.
      top.next = m;
      continue;
    }

    ++result.nodes;
    ++since_check;
    const std::uint32_t size = top.size + 1;
    if (size < local_depths.size()) ++local_depths[size];

    Frame child;
    child.counts = top.counts;
    if (!kernels_.add_element(child.counts, top.members, m, x, problem_.r)) continue;
    child.members = top.members | bit(x);
    child.size = size;
    child.next = x + 1;
    child.last = x;
    child.widest = widest;

    if (size == k) {
      if (kernels_.zero_mask(child.counts, m) == 0) {
        if (collect) {
          collect->push_back(child.members);
          continue;
        }
        result.status = ItemStatus::found;
        result.witness = child.members;
        flush_live();
        return result;
      }
      continue;
    }

    // Coverage: every uncovered residue needs a pair with at least one new
    // element, drawn from the candidates that remain after x.
    const std::uint32_t left = k - size;
    const std::uint32_t child_limit = gap_rule ? m - widest : m - 1;
    const std::uint64_t candidates = branch.pool & span_mask(x + 1, child_limit);
    if (static_cast<std::uint32_t>(std::popcount(candidates)) < left) continue;
    const std::uint64_t uncovered = kernels_.zero_mask(child.counts, m);
    if (uncovered != 0) {
      // Each new element adds at most (current size + its own index) new sums.
      const std::uint64_t fresh = static_cast<std::uint64_t>(left) * size + left * (left + 1) / 2;
      if (static_cast<std::uint64_t>(std::popcount(uncovered)) > fresh) continue;
      const std::uint64_t reach = kernels_.sumset_reach(child.members | candidates, candidates, m);
      if ((uncovered & ~reach) != 0) continue;
    }

    if (emit_size && size == *emit_size) {
      emitted->push_back(WorkItem{item.branch, child.members, child.next});
      continue;
    }
    stack_.push_back(child);
  }

  result.status = ItemStatus::complete;
  flush_live();
  return result;
}

}  // namespace ruzsa::search::detail
