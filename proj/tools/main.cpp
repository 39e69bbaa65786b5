// ruzsa: command-line front end.
//
// Exit codes: 0 success, 1 verified false, 2 usage or parse error,
// 3 timeout with a checkpoint.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "ruzsa/bounds.hpp"
#include "ruzsa/diffset.hpp"
#include "ruzsa/kernels.hpp"
#include "ruzsa/parallel.hpp"
#include "ruzsa/pipeline.hpp"
#include "ruzsa/search.hpp"
#include "ruzsa/version.hpp"
#include "ruzsa/zm_core.hpp"

namespace {

using namespace ruzsa;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;
constexpr int kTimeout = 3;

enum class Format { text, json, csv };

const std::map<std::string, Format> kFormats = {{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "90", "90s", "500ms", "10m", "2h"; "none" or "0" for no limit.
std::optional<std::chrono::milliseconds> parse_budget(const std::string& text) {
  if (text == "none" || text == "0") return std::nullopt;
  static const std::regex re(R"(^(\d+(?:\.\d+)?)(ms|s|m|h)?$)");
  std::smatch match;
  if (!std::regex_match(text, match, re)) throw UsageError("bad time budget '" + text + "'");
  const double value = std::stod(match[1]);
  const std::string unit = match[2];
  double ms = value * 1000;
  if (unit == "ms") ms = value;
  if (unit == "m") ms = value * 60'000;
  if (unit == "h") ms = value * 3'600'000;
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

std::string join(const std::vector<std::uint32_t>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

json set_json(const core::ResidueSet& a) { return json::parse(core::format_residue_set_json(a)); }

void print_progress(const search::Progress& p) { std::cerr << p.to_json() << std::endl; }

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string set;
  std::optional<std::uint32_t> r;
  Format format = Format::text;
};

int cmd_verify(const VerifyArgs& args) {
  const auto a = core::parse_residue_set(args.set);
  const auto rep = core::rep_function(a);
  const std::uint32_t r = args.r.value_or(rep.max() == 0 ? 1 : rep.max());
  const auto violation = core::first_violation(rep, r);
  const bool ok = violation < 0;
  switch (args.format) {
    case Format::json: {
      json j = {{"set", set_json(a)}, {"r", r}, {"valid", ok}, {"rep", rep.counts}, {"max_rep", rep.max()}};
      if (!ok) j["violation"] = {{"n", violation}, {"R", rep.counts[violation]}};
      std::cout << j.dump() << "\n";
      break;
    }
    case Format::csv:
      std::cout << "n,R\n";
      for (std::size_t n = 0; n < rep.counts.size(); ++n) std::cout << n << "," << rep.counts[n] << "\n";
      break;
    case Format::text:
      std::cout << core::format_residue_set(a) << "\n";
      std::cout << "R_A = [" << join(rep.counts, ",") << "]\n";
      if (ok) {
        std::cout << "valid: 1 <= R_A(n) <= " << r << " for all n\n";
      } else {
        std::cout << "invalid: R_A(" << violation << ") = " << rep.counts[violation] << " outside [1, " << r << "]\n";
      }
      break;
  }
  return ok ? kOk : kFalse;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
  std::uint32_t m = 0;
  std::uint32_t r = 0;
  std::uint32_t ceiling = search::kChenCeiling;
  std::optional<std::uint32_t> k_min;
  std::optional<std::uint32_t> k_max;
  int threads = 1;
  std::string budget = "5m";
  std::string checkpoint;
  std::string resume;
  std::string normalization = "auto";
  bool progress = false;
  Format format = Format::text;
};

search::ExecOptions exec_of(const SearchArgs& args) {
  search::ExecOptions exec;
  exec.threads = args.threads;
  exec.time_budget = parse_budget(args.budget);
  if (args.progress) exec.on_progress = print_progress;
  return exec;
}

std::string save_checkpoint(const search::Checkpoint& cp, const std::string& requested) {
  std::string path = requested;
  if (path.empty()) {
    path = "ruzsa_m" + std::to_string(cp.m) + "_r" + std::to_string(cp.r) + "_k" + std::to_string(cp.k_lo) + "-" +
           std::to_string(cp.k_hi) + ".ckpt";
  }
  cp.save(path);
  return path;
}

void print_timeout(Format format, const search::Checkpoint& cp, const std::string& path, std::uint64_t nodes,
                   double secs) {
  if (format == Format::json) {
    std::cout << json{{"status", "timeout"},    {"m", cp.m},          {"r", cp.r},
                      {"checkpoint", path},     {"nodes", nodes},     {"elapsed_s", secs},
                      {"frontier", cp.frontier.size()}}
                     .dump()
              << "\n";
  } else if (format == Format::csv) {
    std::cout << "status,m,r,checkpoint,nodes\ntimeout," << cp.m << "," << cp.r << "," << path << "," << nodes << "\n";
  } else {
    std::cout << "timeout at m = " << cp.m << ", r = " << cp.r << " after " << nodes << " nodes\n";
    std::cout << "checkpoint: " << path << "\n";
  }
}

int cmd_ruzsa(const SearchArgs& args) {
  const auto exec = exec_of(args);
  search::RuzsaResult res;
  if (!args.resume.empty()) {
    res = search::resume_ruzsa(search::Checkpoint::load(args.resume), args.ceiling, exec);
  } else {
    res = search::ruzsa_number(args.m, args.ceiling, exec, symmetry::parse_normalization_mode(args.normalization));
  }
  if (!res.value) {
    const auto path = save_checkpoint(*res.checkpoint, args.checkpoint);
    print_timeout(args.format, *res.checkpoint, path, res.nodes_explored, res.wall_time_s);
    return kTimeout;
  }
  const auto m = res.witness->m();
  switch (args.format) {
    case Format::json:
      std::cout << json{{"m", m}, {"R_m", *res.value}, {"witness", set_json(*res.witness)},
                        {"nodes", res.nodes_explored}}
                       .dump()
                << "\n";
      break;
    case Format::csv:
      std::cout << "m,R_m,set\n" << m << "," << *res.value << "," << join(res.witness->members(), " ") << "\n";
      break;
    case Format::text:
      std::cout << "R_" << m << " = " << *res.value << "\n";
      std::cout << "witness: " << core::format_residue_set(*res.witness) << "\n";
      std::cout << "nodes: " << res.nodes_explored << "\n";
      break;
  }
  return kOk;
}

int cmd_search(const SearchArgs& args) {
  const auto exec = exec_of(args);
  search::SearchOutcome out;
  if (!args.resume.empty()) {
    out = search::resume(search::Checkpoint::load(args.resume), exec);
  } else {
    if (args.r == 0) throw UsageError("--r is required");
    auto task = search::default_task(args.m, args.r, symmetry::parse_normalization_mode(args.normalization));
    if (args.k_min) task.k_lo = *args.k_min;
    if (args.k_max) task.k_hi = *args.k_max;
    out = search::find_basis(task, exec);
  }
  if (out.verdict == search::Verdict::timeout) {
    const auto path = save_checkpoint(*out.checkpoint, args.checkpoint);
    print_timeout(args.format, *out.checkpoint, path, out.nodes_explored, out.wall_time_s);
    return kTimeout;
  }
  const auto verdict = search::to_string(out.verdict);
  switch (args.format) {
    case Format::json: {
      json j = {{"status", verdict}, {"nodes", out.nodes_explored}};
      if (out.witness) j["witness"] = set_json(*out.witness);
      std::cout << j.dump() << "\n";
      break;
    }
    case Format::csv:
      std::cout << "status,nodes,set\n"
                << verdict << "," << out.nodes_explored << "," << (out.witness ? join(out.witness->members(), " ") : "")
                << "\n";
      break;
    case Format::text:
      std::cout << verdict << " after " << out.nodes_explored << " nodes\n";
      if (out.witness) std::cout << "witness: " << core::format_residue_set(*out.witness) << "\n";
      break;
  }
  return out.verdict == search::Verdict::found ? kOk : kFalse;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  std::string range = "21..500";
  std::string filter = "step2";
  bool max_only = false;
  bool all = false;
  int threads = 1;
  Format format = Format::text;
};

int cmd_scan(const ScanArgs& args) {
  static const std::regex re(R"(^(\d+)\.\.(\d+)$)");
  std::smatch match;
  if (!std::regex_match(args.range, match, re)) throw UsageError("range must look like 21..500");
  const std::int64_t lo = std::stoll(match[1]);
  const std::int64_t hi = std::stoll(match[2]);
  if (lo < 2 || lo > hi) throw UsageError("range must satisfy 2 <= lo <= hi");
  const std::map<std::string, bounds::Filter> filters = {
      {"eq5", bounds::Filter::eq5}, {"step1", bounds::Filter::step1}, {"step2", bounds::Filter::step2}};
  const auto rows = bounds::scan(lo, hi, filters.at(args.filter), 5, args.threads);
  auto pairs = bounds::survivors(rows);
  if (args.max_only && !pairs.empty()) pairs = {pairs.back()};
  switch (args.format) {
    case Format::json: {
      auto arr = json::array();
      for (const auto& p : pairs) arr.push_back({p.m, p.k});
      std::cout << json{{"filter", args.filter}, {"range", {lo, hi}}, {"pairs", arr}}.dump() << "\n";
      break;
    }
    case Format::csv:
      std::cout << "m,k,verdict,margin_num,margin_den\n";
      for (const auto& row : rows) {
        if (!args.all && !row.survives) continue;
        if (args.max_only && !(row.pair == pairs.back())) continue;
        std::cout << row.pair.m << "," << row.pair.k << "," << (row.survives ? "survives" : "eliminated") << ",";
        if (row.margin) std::cout << to_string(row.margin->num()) << "," << to_string(row.margin->den());
        else std::cout << ",";
        std::cout << "\n";
      }
      break;
    case Format::text:
      for (const auto& p : pairs) std::cout << "(" << p.m << "," << p.k << ")\n";
      std::cout << pairs.size() << " pair" << (pairs.size() == 1 ? "" : "s") << "\n";
      break;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
  std::string stage = "all";
  std::string budget = "5m";
  std::string checkpoint_dir;
  bool strict = false;
  int threads = 1;
  Format format = Format::text;
};

int cmd_reproduce(const ReproduceArgs& args) {
  pipeline::PipelineOptions options;
  options.exec.threads = args.threads;
  options.search_budget = parse_budget(args.budget);
  options.checkpoint_dir = args.checkpoint_dir;
  pipeline::ReproReport report;
  report.title = "reproduction: " + args.stage;
  if (args.stage == "appendix" || args.stage == "all") report.append(pipeline::verify_appendix());
  if (args.stage == "t1" || args.stage == "all") report.append(pipeline::reproduce_theorem1(options));
  if (args.stage == "t2" || args.stage == "all") report.append(pipeline::reproduce_theorem2(options));
  if (args.format == Format::json) {
    std::cout << report.to_json() << "\n";
  } else if (args.format == Format::csv) {
    std::cout << "stage,status,computed,expected\n";
    for (const auto& st : report.stages) {
      auto quote = [](std::string s) {
        std::string out = "\"";
        for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
        return out + "\"";
      };
      std::cout << quote(st.name) << "," << pipeline::to_string(st.status) << "," << quote(st.computed) << ","
                << quote(st.expected) << "\n";
    }
  } else {
    std::cout << report.to_text();
  }
  return report.passed(args.strict) ? kOk : kFalse;
}

// ---------------------------------------------------------------------------

struct DiffsetArgs {
  std::int64_t v = 0;
  std::int64_t k = 0;
  std::int64_t lambda = 0;
  bool brute_force = false;
  Format format = Format::text;
};

int cmd_diffset(const DiffsetArgs& args) {
  const diffset::DiffSetParams params{args.v, args.k, args.lambda};
  diffset::validate(params);
  const auto tc = diffset::test_c(params);
  std::optional<core::ResidueSet> found;
  if (args.brute_force) found = diffset::brute_force_exists(params);
  const std::string verdict = tc.ruled_out() ? "ruled_out" : "passes";
  switch (args.format) {
    case Format::json: {
      json j = {{"v", args.v}, {"k", args.k}, {"lambda", args.lambda}, {"verdict", verdict}, {"witness", nullptr}};
      if (tc.witness) {
        j["witness"] = {{"p", tc.witness->p}, {"w", tc.witness->w}, {"f", tc.witness->f}, {"e", tc.witness->e},
                        {"l", tc.witness->l}};
      }
      if (args.brute_force) j["difference_set"] = found ? set_json(*found) : json(nullptr);
      std::cout << j.dump() << "\n";
      break;
    }
    case Format::csv:
      std::cout << "v,k,lambda,test_c,p,w,f,e,l\n" << args.v << "," << args.k << "," << args.lambda << "," << verdict;
      if (tc.witness) {
        std::cout << "," << tc.witness->p << "," << tc.witness->w << "," << tc.witness->f << "," << tc.witness->e
                  << "," << tc.witness->l;
      } else {
        std::cout << ",,,,,";
      }
      std::cout << "\n";
      break;
    case Format::text:
      std::cout << "(" << args.v << "," << args.k << "," << args.lambda << "): " << verdict;
      if (tc.witness) {
        std::cout << ", witness (p,w,f,e,l) = (" << tc.witness->p << "," << tc.witness->w << "," << tc.witness->f
                  << "," << tc.witness->e << "," << tc.witness->l << ")";
      }
      std::cout << "\n";
      if (args.brute_force) {
        std::cout << "difference set: " << (found ? core::format_residue_set(*found) : std::string("none")) << "\n";
      }
      break;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_classify(std::uint64_t m, Format format) {
  const auto c = pipeline::classify(m);
  switch (format) {
    case Format::json:
      std::cout << json{{"m", m}, {"lower", c.lower}, {"upper", c.upper}, {"exact", c.exact}, {"basis", c.basis}}.dump()
                << "\n";
      break;
    case Format::csv:
      std::cout << "m,lower,upper,exact\n" << m << "," << c.lower << "," << c.upper << "," << c.exact << "\n";
      break;
    case Format::text:
      if (c.exact) {
        std::cout << "R_" << m << " = " << c.lower << "\n";
      } else {
        std::cout << c.lower << " <= R_" << m << " <= " << c.upper << "\n";
      }
      std::cout << "basis: " << c.basis << "\n";
      break;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruzsa numbers: verification, bounds and exhaustive search"};
  app.set_version_flag("--version", std::string(ruzsa::kVersion));
  app.require_subcommand(1);

  Format format = Format::text;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats));
  };
  const int default_threads = ruzsa::default_threads();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check 1 <= R_A(n) <= r for a set given as m:{a,b,...}");
  verify_cmd->add_option("set", verify.set, "Set, e.g. 19:{0,1,5,7,8,15,18}")->required();
  verify_cmd->add_option("--r", verify.r, "Upper bound on R_A (default: max R_A, so only coverage is checked)")
      ->check(CLI::PositiveNumber);
  add_format(verify_cmd);

  SearchArgs ruzsa;
  ruzsa.threads = default_threads;
  auto* ruzsa_cmd = app.add_subcommand("ruzsa", "Compute R_m by exhaustive search (m <= 64)");
  ruzsa_cmd->add_option("m", ruzsa.m, "Modulus")->check(CLI::Range(1u, search::kMaxSearchModulus));
  ruzsa_cmd->add_option("--ceiling", ruzsa.ceiling, "Largest r to try")->check(CLI::PositiveNumber);
  ruzsa_cmd->add_option("--threads", ruzsa.threads, "Worker threads (default RUZSA_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  ruzsa_cmd->add_option("--time-budget", ruzsa.budget, "Wall-clock budget: 90s, 10m, 2h or none");
  ruzsa_cmd->add_option("--checkpoint", ruzsa.checkpoint, "Where to write the checkpoint on timeout");
  ruzsa_cmd->add_option("--resume", ruzsa.resume, "Continue from a checkpoint");
  ruzsa_cmd->add_option("--normalization", ruzsa.normalization, "auto, generic, zero or targeted");
  ruzsa_cmd->add_flag("--progress", ruzsa.progress, "JSON progress lines on stderr");
  add_format(ruzsa_cmd);

  SearchArgs search_args;
  search_args.threads = default_threads;
  auto* search_cmd = app.add_subcommand("search", "Search for A with 1 <= R_A <= r at fixed m and r");
  search_cmd->add_option("m", search_args.m, "Modulus")->check(CLI::Range(1u, search::kMaxSearchModulus));
  search_cmd->add_option("--r", search_args.r, "Cap on R_A")->check(CLI::PositiveNumber);
  search_cmd->add_option("--k-min", search_args.k_min, "Smallest |A|");
  search_cmd->add_option("--k-max", search_args.k_max, "Largest |A|");
  search_cmd->add_option("--threads", search_args.threads, "Worker threads")->check(CLI::PositiveNumber);
  search_cmd->add_option("--time-budget", search_args.budget, "Wall-clock budget: 90s, 10m, 2h or none");
  search_cmd->add_option("--checkpoint", search_args.checkpoint, "Where to write the checkpoint on timeout");
  search_cmd->add_option("--resume", search_args.resume, "Continue from a checkpoint");
  search_cmd->add_option("--normalization", search_args.normalization, "auto, generic, zero or targeted");
  search_cmd->add_flag("--progress", search_args.progress, "JSON progress lines on stderr");
  add_format(search_cmd);

  ScanArgs scan;
  scan.threads = default_threads;
  auto* scan_cmd = app.add_subcommand("scan", "List (m, k) pairs surviving an analytic filter");
  scan_cmd->add_option("range", scan.range, "m range, e.g. 21..500");
  scan_cmd->add_option("--filter", scan.filter, "eq5, step1 or step2")
      ->check(CLI::IsMember({"eq5", "step1", "step2"}));
  scan_cmd->add_flag("--max", scan.max_only, "Print only the largest surviving pair");
  scan_cmd->add_flag("--all", scan.all, "CSV: include eliminated pairs");
  scan_cmd->add_option("--threads", scan.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_format(scan_cmd);

  ReproduceArgs repro;
  repro.threads = default_threads;
  auto* repro_cmd = app.add_subcommand("reproduce", "Run the classification reports");
  repro_cmd->add_option("--stage", repro.stage, "all, t1, t2 or appendix")
      ->check(CLI::IsMember({"all", "t1", "t2", "appendix"}));
  repro_cmd->add_option("--time-budget", repro.budget, "Budget per heavy search stage");
  repro_cmd->add_option("--checkpoint-dir", repro.checkpoint_dir, "Directory for checkpoints of timed-out stages");
  repro_cmd->add_flag("--strict", repro.strict, "Treat incomplete stages as failures");
  repro_cmd->add_option("--threads", repro.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_format(repro_cmd);

  DiffsetArgs diff;
  auto* diff_cmd = app.add_subcommand("diffset", "Test C for cyclic (v, k, lambda) difference sets");
  diff_cmd->add_option("--v", diff.v)->required();
  diff_cmd->add_option("--k", diff.k)->required();
  diff_cmd->add_option("--lambda", diff.lambda)->required();
  diff_cmd->add_flag("--brute-force", diff.brute_force, "Also search for a difference set (v <= 25)");
  add_format(diff_cmd);

  std::uint64_t classify_m = 0;
  auto* classify_cmd = app.add_subcommand("classify", "What is known about R_m");
  classify_cmd->add_option("m", classify_m, "Modulus")->required()->check(CLI::PositiveNumber);
  add_format(classify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify_cmd) {
      verify.format = format;
      return cmd_verify(verify);
    }
    if (*ruzsa_cmd) {
      if (ruzsa.m == 0 && ruzsa.resume.empty()) throw UsageError("m or --resume is required");
      ruzsa.format = format;
      return cmd_ruzsa(ruzsa);
    }
    if (*search_cmd) {
      if (search_args.m == 0 && search_args.resume.empty()) throw UsageError("m or --resume is required");
      search_args.format = format;
      return cmd_search(search_args);
    }
    if (*scan_cmd) {
      scan.format = format;
      return cmd_scan(scan);
    }
    if (*repro_cmd) {
      repro.format = format;
      return cmd_reproduce(repro);
    }
    if (*diff_cmd) {
      diff.format = format;
      return cmd_diffset(diff);
    }
    if (*classify_cmd) return cmd_classify(classify_m, format);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ruzsa::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ruzsa::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ruzsa::CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFalse;
  }
  return kUsage;
}
