#include "ruzsa/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <boost/crc.hpp>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "ruzsa/bounds.hpp"
#include "ruzsa/version.hpp"
#include "search_engine.hpp"

namespace ruzsa::search {

using Clock = std::chrono::steady_clock;
using detail::ItemResult;
using detail::ItemStatus;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::found:
      return "found";
    case Verdict::exhausted:
      return "exhausted";
    case Verdict::timeout:
      return "timeout";
  }
  return "unknown";
}

std::string Progress::to_json() const {
  nlohmann::json j;
  j["nodes"] = nodes;
  j["depth_histogram"] = depth_histogram;
  j["elapsed_s"] = elapsed_s;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Checkpoint file

namespace {

std::uint32_t crc_of(const std::string& body) {
  boost::crc_32_type crc;
  crc.process_bytes(body.data(), body.size());
  return crc.checksum();
}

}  // namespace

std::string Checkpoint::serialize() const {
  nlohmann::json body;
  body["format"] = kCheckpointFormat;
  body["artifact_version"] = kVersion;
  body["m"] = m;
  body["r"] = r;
  body["k_range"] = {k_lo, k_hi};
  body["normalization"] = symmetry::to_string(normalization);
  body["normalization_digest"] = normalization_digest;
  body["k_current"] = k_current;
  body["nodes"] = nodes;
  body["finished"] = finished;
  auto items = nlohmann::json::array();
  for (const auto& it : frontier) items.push_back({it.branch, it.members, it.next});
  body["frontier"] = items;
  const std::string dumped = body.dump();
  nlohmann::json wrapper;
  wrapper["body"] = body;
  wrapper["crc32"] = crc_of(dumped);
  return wrapper.dump() + "\n";
}

Checkpoint Checkpoint::parse(const std::string& text) {
  Checkpoint cp;
  try {
    const auto wrapper = nlohmann::json::parse(text);
    const auto& body = wrapper.at("body");
    if (crc_of(body.dump()) != wrapper.at("crc32").get<std::uint32_t>()) {
      throw CheckpointError("checkpoint integrity check failed");
    }
    if (body.at("format").get<int>() != kCheckpointFormat) throw CheckpointError("unsupported checkpoint format");
    if (body.at("artifact_version").get<std::string>() != kVersion) {
      throw CheckpointError("checkpoint written by version " + body.at("artifact_version").get<std::string>() +
                            ", this is " + std::string(kVersion));
    }
    cp.m = body.at("m").get<std::uint32_t>();
    cp.r = body.at("r").get<std::uint32_t>();
    cp.k_lo = body.at("k_range").at(0).get<std::uint32_t>();
    cp.k_hi = body.at("k_range").at(1).get<std::uint32_t>();
    cp.normalization = symmetry::parse_normalization_mode(body.at("normalization").get<std::string>());
    cp.normalization_digest = body.at("normalization_digest").get<std::uint64_t>();
    cp.k_current = body.at("k_current").get<std::uint32_t>();
    cp.nodes = body.at("nodes").get<std::uint64_t>();
    cp.finished = body.at("finished").get<bool>();
    for (const auto& it : body.at("frontier")) {
      cp.frontier.push_back(
          WorkItem{it.at(0).get<std::uint32_t>(), it.at(1).get<std::uint64_t>(), it.at(2).get<std::uint32_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ParseError& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
  if (cp.m == 0 || cp.m > kMaxSearchModulus || cp.r == 0 || cp.k_lo == 0 || cp.k_lo > cp.k_hi || cp.k_hi > cp.m ||
      cp.k_current < cp.k_lo || cp.k_current > cp.k_hi) {
    throw CheckpointError("checkpoint fields out of range");
  }
  const auto plan = symmetry::search_normalization(cp.m, cp.normalization);
  if (plan.digest() != cp.normalization_digest) throw CheckpointError("checkpoint normalization does not match");
  for (const auto& it : cp.frontier) {
    if (it.branch >= plan.branches.size() || (it.members & ~simd::low_mask(cp.m)) != 0 || it.next > cp.m) {
      throw CheckpointError("checkpoint frontier entry out of range");
    }
  }
  return cp;
}

void Checkpoint::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint " + tmp);
    out << serialize();
    if (!out) throw CheckpointError("failed writing checkpoint " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw CheckpointError("cannot move checkpoint into " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot read checkpoint " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

// ---------------------------------------------------------------------------
// Driver

namespace {

struct RunState {
  SearchTask task;
  symmetry::NormalizationMode mode;  // resolved
  symmetry::NormalizationPlan plan;
  std::uint32_t k_current = 0;
  std::uint64_t nodes = 0;
  bool have_items = false;  // items for k_current already split
  std::vector<WorkItem> items;
};

class ProgressReporter {
 public:
  ProgressReporter(const ExecOptions& exec, std::size_t depths, Clock::time_point start)
      : exec_(exec), depths_(depths), start_(start) {
    if (exec_.on_progress) thread_ = std::thread([this] { loop(); });
  }
  ~ProgressReporter() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }
  std::atomic<std::uint64_t>* nodes() { return exec_.on_progress ? &nodes_ : nullptr; }
  std::vector<std::atomic<std::uint64_t>>* depths() { return exec_.on_progress ? &depths_ : nullptr; }

 private:
  void loop() {
    std::unique_lock lock(mutex_);
    while (!cv_.wait_for(lock, exec_.progress_interval, [this] { return stop_; })) {
      Progress p;
      p.nodes = nodes_.load();
      for (const auto& d : depths_) p.depth_histogram.push_back(d.load());
      p.elapsed_s = std::chrono::duration<double>(Clock::now() - start_).count();
      exec_.on_progress(p);
    }
  }

  const ExecOptions& exec_;
  std::atomic<std::uint64_t> nodes_{0};
  std::vector<std::atomic<std::uint64_t>> depths_;
  Clock::time_point start_;
  std::mutex mutex_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::thread thread_;
};

void validate_task(const SearchTask& task) {
  if (task.m == 0 || task.m > kMaxSearchModulus) {
    throw PreconditionError("the search engine supports 1 <= m <= " + std::to_string(kMaxSearchModulus));
  }
  if (task.r == 0) throw PreconditionError("cap r must be at least 1");
  if (task.k_lo == 0 || task.k_lo > task.k_hi || task.k_hi > task.m) {
    throw PreconditionError("invalid k range [" + std::to_string(task.k_lo) + ", " + std::to_string(task.k_hi) + "]");
  }
}

// Splits the tree for one k into work items; handles the case where the
// forced elements alone already have size k. Returns a found mask if so.
std::optional<std::uint64_t> split(const detail::Problem& problem, const ExecOptions& exec,
                                   const simd::KernelTable& kernels, std::vector<WorkItem>& items,
                                   std::uint64_t& nodes, std::vector<std::uint64_t>* collect) {
  detail::Explorer explorer(problem, kernels);
  detail::StopSignals none;
  for (std::uint32_t b = 0; b < problem.branches.size(); ++b) {
    const auto& spec = problem.branches[b];
    const auto forced = static_cast<std::uint32_t>(std::popcount(spec.forced));
    if (forced > problem.k) continue;
    if (forced == problem.k) {
      ++nodes;
      simd::CountBlock counts;
      std::uint64_t built = 0;
      bool ok = true;
      for (std::uint64_t rest = spec.forced; rest != 0 && ok; rest &= rest - 1) {
        const auto x = static_cast<std::uint32_t>(std::countr_zero(rest));
        ok = kernels.add_element(counts, built, problem.m, x, problem.r);
        built |= std::uint64_t{1} << x;
      }
      if (ok && kernels.zero_mask(counts, problem.m) == 0) {
        if (!collect) return spec.forced;
        collect->push_back(spec.forced);
      }
      continue;
    }
    const WorkItem root{b, spec.forced, 0};
    const std::uint32_t emit = std::min(forced + static_cast<std::uint32_t>(std::max(0, exec.split_depth)),
                                        problem.k - 1);
    if (emit <= forced) {
      items.push_back(root);
      continue;
    }
    const auto r = explorer.run(root, 0, none, emit, &items, nullptr);
    nodes += r.nodes;
  }
  return std::nullopt;
}

SearchOutcome drive(RunState& st, const ExecOptions& exec, Clock::time_point start,
                    std::optional<Clock::time_point> deadline) {
  const auto& kernels = simd::active_kernels();
  SearchOutcome out;
  ProgressReporter reporter(exec, st.task.k_hi + 2, start);
  auto finish = [&](Verdict v) {
    out.verdict = v;
    if (v != Verdict::timeout) {
      Checkpoint done;
      done.m = st.task.m;
      done.r = st.task.r;
      done.k_lo = st.task.k_lo;
      done.k_hi = st.task.k_hi;
      done.normalization = st.mode;
      done.normalization_digest = st.plan.digest();
      done.k_current = std::min(st.k_current, st.task.k_hi);
      done.nodes = st.nodes;
      done.finished = true;
      out.checkpoint = std::move(done);
    }
    out.nodes_explored = st.nodes;
    out.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  };

  for (; st.k_current <= st.task.k_hi; ++st.k_current) {
    const auto problem = detail::make_problem(st.task.m, st.task.r, st.k_current, st.plan);
    if (!st.have_items) {
      st.items.clear();
      if (auto hit = split(problem, exec, kernels, st.items, st.nodes, nullptr)) {
        out.witness = core::ResidueSet::from_mask(core::Modulus(st.task.m), *hit);
        return finish(Verdict::found);
      }
      st.have_items = true;
    }

    const std::size_t n = st.items.size();
    std::vector<ItemResult> results(n);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best_found{SIZE_MAX};
    std::atomic<bool> deadline_hit{false};
    detail::StopSignals signals;
    signals.deadline = deadline;
    signals.best_found = &best_found;
    signals.deadline_hit = &deadline_hit;
    signals.live_nodes = reporter.nodes();
    signals.live_depths = reporter.depths();

    auto worker = [&] {
      detail::Explorer explorer(problem, kernels);
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        if (i > best_found.load()) continue;
        if (deadline && Clock::now() >= *deadline) {
          deadline_hit.store(true);
          continue;
        }
        results[i] = explorer.run(st.items[i], i, signals);
        if (results[i].status == ItemStatus::found) {
          std::size_t cur = best_found.load();
          while (i < cur && !best_found.compare_exchange_weak(cur, i)) {
          }
        }
      }
    };
    const int threads = std::max(1, std::min<int>(exec.threads, static_cast<int>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // The first witness in item order counts only if everything before it
    // finished; otherwise it is rediscovered after resuming.
    const std::size_t found_at = best_found.load();
    bool prefix_complete = true;
    for (std::size_t i = 0; i < std::min(found_at, n); ++i) {
      if (results[i].status != ItemStatus::complete) {
        prefix_complete = false;
        break;
      }
    }
    if (found_at < n && prefix_complete) {
      for (std::size_t i = 0; i <= found_at; ++i) st.nodes += results[i].nodes;
      out.witness = core::ResidueSet::from_mask(core::Modulus(st.task.m), results[found_at].witness);
      return finish(Verdict::found);
    }
    if (!prefix_complete || deadline_hit.load()) {
      std::vector<WorkItem> frontier;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& r = results[i];
        switch (r.status) {
          case ItemStatus::complete:
            st.nodes += r.nodes;
            break;
          case ItemStatus::interrupted:
            st.nodes += r.nodes;
            frontier.insert(frontier.end(), r.frontier.begin(), r.frontier.end());
            break;
          default:
            frontier.push_back(st.items[i]);
            break;
        }
      }
      Checkpoint cp;
      cp.m = st.task.m;
      cp.r = st.task.r;
      cp.k_lo = st.task.k_lo;
      cp.k_hi = st.task.k_hi;
      cp.normalization = st.mode;
      cp.normalization_digest = st.plan.digest();
      cp.k_current = st.k_current;
      cp.nodes = st.nodes;
      cp.frontier = std::move(frontier);
      out.checkpoint = std::move(cp);
      return finish(Verdict::timeout);
    }
    for (const auto& r : results) st.nodes += r.nodes;
    st.have_items = false;
    st.items.clear();
  }
  return finish(Verdict::exhausted);
}

RunState fresh_state(const SearchTask& task) {
  validate_task(task);
  RunState st;
  st.task = task;
  st.mode = symmetry::resolve_mode(task.normalization, task.m, task.r);
  st.plan = symmetry::search_normalization(task.m, st.mode);
  for (const auto& b : st.plan.branches) {
    if (b.forced.size() > 1 && task.k_lo < b.forced.size()) {
      throw PreconditionError("normalization '" + st.plan.name + "' needs every k >= " +
                              std::to_string(b.forced.size()));
    }
  }
  st.task.normalization = st.mode;
  st.k_current = task.k_lo;
  return st;
}

std::optional<Clock::time_point> deadline_from(const ExecOptions& exec, Clock::time_point start) {
  if (!exec.time_budget) return std::nullopt;
  return start + *exec.time_budget;
}

}  // namespace

SearchTask default_task(std::uint32_t m, std::uint32_t r, symmetry::NormalizationMode mode) {
  SearchTask t;
  t.m = m;
  t.r = r;
  t.k_lo = static_cast<std::uint32_t>(bounds::size_lower(m));
  t.k_hi = static_cast<std::uint32_t>(std::min<std::int64_t>(m, bounds::size_upper(m, r)));
  t.normalization = mode;
  return t;
}

SearchOutcome find_basis(const SearchTask& task, const ExecOptions& exec) {
  const auto start = Clock::now();
  auto st = fresh_state(task);
  return drive(st, exec, start, deadline_from(exec, start));
}

SearchOutcome resume(const Checkpoint& checkpoint, const ExecOptions& exec) {
  if (checkpoint.finished) throw CheckpointError("checkpoint belongs to a search that already finished");
  const auto start = Clock::now();
  SearchTask task{checkpoint.m, checkpoint.r, checkpoint.k_lo, checkpoint.k_hi, checkpoint.normalization};
  auto st = fresh_state(task);
  if (st.plan.digest() != checkpoint.normalization_digest) {
    throw CheckpointError("checkpoint normalization does not match this build");
  }
  st.k_current = checkpoint.k_current;
  st.nodes = checkpoint.nodes;
  st.items = checkpoint.frontier;
  st.have_items = true;
  return drive(st, exec, start, deadline_from(exec, start));
}

std::vector<core::ResidueSet> enumerate_solutions(const SearchTask& task) {
  auto st = fresh_state(task);
  const auto& kernels = simd::active_kernels();
  std::vector<std::uint64_t> masks;
  ExecOptions exec;
  for (std::uint32_t k = st.task.k_lo; k <= st.task.k_hi; ++k) {
    const auto problem = detail::make_problem(st.task.m, st.task.r, k, st.plan);
    std::vector<WorkItem> items;
    std::uint64_t nodes = 0;
    split(problem, exec, kernels, items, nodes, &masks);
    detail::Explorer explorer(problem, kernels);
    for (const auto& it : items) explorer.run(it, 0, {}, std::nullopt, nullptr, &masks);
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<core::ResidueSet> out;
  for (auto mask : masks) out.push_back(core::ResidueSet::from_mask(core::Modulus(task.m), mask));
  return out;
}

// ---------------------------------------------------------------------------
// Ruzsa numbers

namespace {

RuzsaResult ruzsa_from(std::uint32_t m, std::uint32_t r_start, std::uint32_t ceiling, const ExecOptions& exec,
                       symmetry::NormalizationMode mode, std::optional<Checkpoint> pending, std::uint64_t nodes,
                       Clock::time_point start) {
  RuzsaResult res;
  res.nodes_explored = nodes;
  const auto deadline = deadline_from(exec, start);
  for (std::uint32_t r = r_start; r <= ceiling; ++r) {
    SearchOutcome outcome;
    std::optional<Clock::duration> left;
    if (deadline) left = std::max(Clock::duration::zero(), *deadline - Clock::now());
    ExecOptions sub = exec;
    if (left) sub.time_budget = std::chrono::duration_cast<std::chrono::milliseconds>(*left);
    if (pending && pending->r == r) {
      outcome = resume(*pending, sub);
      pending.reset();
      res.nodes_explored = 0;  // the checkpoint already carries earlier totals
    } else {
      auto task = default_task(m, r, mode);
      if (task.k_lo > task.k_hi) continue;
      outcome = find_basis(task, sub);
    }
    res.nodes_explored += outcome.nodes_explored;
    if (outcome.verdict == Verdict::found) {
      res.value = r;
      res.witness = outcome.witness;
      break;
    }
    if (outcome.verdict == Verdict::timeout) {
      res.checkpoint = outcome.checkpoint;
      break;
    }
  }
  res.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  if (!res.value && !res.checkpoint) {
    throw std::runtime_error("no witness for m = " + std::to_string(m) + " with r <= " + std::to_string(ceiling));
  }
  return res;
}

}  // namespace

RuzsaResult ruzsa_number(std::uint32_t m, std::uint32_t ceiling, const ExecOptions& exec,
                         symmetry::NormalizationMode mode) {
  if (m == 0 || m > kMaxSearchModulus) {
    throw PreconditionError("the search engine supports 1 <= m <= " + std::to_string(kMaxSearchModulus));
  }
  if (ceiling == 0) throw PreconditionError("ceiling must be at least 1");
  return ruzsa_from(m, 1, ceiling, exec, mode, std::nullopt, 0, Clock::now());
}

RuzsaResult resume_ruzsa(const Checkpoint& checkpoint, std::uint32_t ceiling, const ExecOptions& exec) {
  if (checkpoint.finished) throw CheckpointError("checkpoint belongs to a search that already finished");
  const auto expected = default_task(checkpoint.m, checkpoint.r, checkpoint.normalization);
  if (expected.k_lo != checkpoint.k_lo || expected.k_hi != checkpoint.k_hi) {
    throw CheckpointError("checkpoint was not produced by a Ruzsa-number computation");
  }
  return ruzsa_from(checkpoint.m, checkpoint.r, ceiling, exec, checkpoint.normalization, checkpoint, 0,
                    Clock::now());
}

BruteForceResult brute_force_ruzsa(std::uint32_t m) {
  if (m == 0 || m > 16) throw PreconditionError("brute_force_ruzsa supports 1 <= m <= 16");
  const core::Modulus mod(m);
  std::uint32_t best = UINT32_MAX;
  std::uint64_t best_mask = 0;
  std::vector<std::uint32_t> members;
  std::vector<std::uint32_t> counts(m);
  for (std::uint64_t rest = 0; rest < (std::uint64_t{1} << (m - 1)); ++rest) {
    const std::uint64_t mask = (rest << 1) | 1u;
    members.clear();
    for (std::uint32_t x = 0; x < m; ++x) {
      if ((mask >> x) & 1u) members.push_back(x);
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (auto a : members) {
      for (auto b : members) ++counts[(a + b) % m];
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    if (*lo >= 1 && *hi < best) {
      best = *hi;
      best_mask = mask;
    }
  }
  return {best, core::ResidueSet::from_mask(mod, best_mask)};
}

}  // namespace ruzsa::search
