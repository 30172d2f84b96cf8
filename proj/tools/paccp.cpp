// Command-line front end: solve single instances, run benchmark manifests,
// compute lifted lower bounds, and verify small instances against brute
// force.  Exit codes: 0 success, 2 usage/parse/budget error, 3 internal
// error, 4 verification mismatch.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "paccp/core.hpp"
#include "paccp/instance.hpp"
#include "paccp/lifting.hpp"
#include "paccp/solver.hpp"

namespace {

using nlohmann::json;

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("PACCP_LOG");
    if (env == nullptr) return 1;
    const std::string s(env);
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
  }();
  return level;
}

void log_at(int level, const std::string& msg) {
  if (log_level() >= level) std::fprintf(stderr, "paccp: %s\n", msg.c_str());
}

paccp::Instance load_instance(const std::string& path,
                              const std::string& format) {
  return paccp::load_instance_file(path, format).first;
}

paccp::BncSetting parse_setting(const std::string& s) {
  if (s == "1") return paccp::BncSetting::S1;
  if (s == "1H") return paccp::BncSetting::S1H;
  if (s == "1HS") return paccp::BncSetting::S1HS;
  if (s == "1HSL") return paccp::BncSetting::S1HSL;
  throw std::invalid_argument("unknown setting: " + s +
                              " (expected 1, 1H, 1HS or 1HSL)");
}

const char* status_name(paccp::SolveStatus s) {
  switch (s) {
    case paccp::SolveStatus::Optimal: return "Optimal";
    case paccp::SolveStatus::TimeLimit: return "TimeLimit";
    case paccp::SolveStatus::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared instance/problem flags for solve, bound and verify.
struct ProblemArgs {
  std::string instance_path;
  std::string format;
  int p = 0;
  int alpha = 0;
  std::string setting = "1HSL";
  double time_limit_s = 1800.0;
  std::uint64_t seed = 0;
};

void add_problem_flags(CLI::App* cmd, ProblemArgs* args, bool with_solver) {
  cmd->add_option("--instance", args->instance_path, "instance file path")
      ->required();
  cmd->add_option("--format", args->format, "instance format")
      ->required()
      ->check(CLI::IsMember({"pmed", "tsplib"}));
  cmd->add_option("--p", args->p, "number of facilities to open")->required();
  cmd->add_option("--alpha", args->alpha, "closest centers per customer")
      ->required();
  if (with_solver) {
    cmd->add_option("--setting", args->setting, "solver setting")
        ->check(CLI::IsMember({"1", "1H", "1HS", "1HSL"}));
    cmd->add_option("--time-limit", args->time_limit_s,
                    "wall-clock limit in seconds");
    cmd->add_option("--seed", args->seed, "random seed");
  }
}

paccp::BncConfig make_config(const ProblemArgs& args) {
  paccp::BncConfig config;
  config.setting = parse_setting(args.setting);
  config.time_limit_s = args.time_limit_s;
  config.seed = args.seed;
  return config;
}

json report_to_json(const paccp::Instance& inst, const ProblemArgs& args,
                    const paccp::RunReport& r) {
  json j;
  j["instance"] = inst.name();
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["p"] = args.p;
  j["alpha"] = args.alpha;
  j["setting"] = args.setting;
  j["status"] = status_name(r.status);
  j["upper_bound"] = std::isfinite(r.upper_bound) ? json(r.upper_bound)
                                                  : json(nullptr);
  j["lower_bound"] = r.lower_bound;
  j["root_lb"] = r.root_lb;
  j["wall_time_s"] = r.wall_time_s;
  j["nodes"] = r.nodes;
  j["cuts_linking"] = r.cuts_linking;
  j["cuts_ub"] = r.cuts_ub;
  j["cuts_lifted"] = r.cuts_lifted;
  j["fixings"] = r.fixings;
  json open = json::array();
  for (int id : r.incumbent.open) open.push_back(id + 1);  // 1-based ids
  j["incumbent"] = {{"open", open}, {"value", r.incumbent.value}};
  return j;
}

int cmd_solve(const ProblemArgs& args, const std::string& out_path) {
  paccp::Instance inst = [&] {
    try {
      return load_instance(args.instance_path, args.format);
    } catch (const std::exception& e) {
      log_at(0, e.what());
      std::exit(2);
    }
  }();
  try {
    log_at(1, "solving " + inst.name() + " p=" + std::to_string(args.p) +
                  " alpha=" + std::to_string(args.alpha) + " setting=" +
                  args.setting);
    const paccp::RunReport r =
        paccp::solve(inst, args.p, args.alpha, make_config(args));
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw std::invalid_argument("cannot write: " + out_path);
      out << report_to_json(inst, args, r).dump(2) << "\n";
    }
    std::printf("%s,%d,%d,%s,%s,%s,%s,%lld,%s\n", inst.name().c_str(), args.p,
                args.alpha, args.setting.c_str(), fmt_num(r.upper_bound).c_str(),
                fmt_num(r.lower_bound).c_str(), fmt_num(r.wall_time_s).c_str(),
                r.nodes, status_name(r.status));
    return 0;
  } catch (const std::invalid_argument& e) {
    log_at(0, e.what());
    return 2;
  } catch (const std::exception& e) {
    log_at(0, std::string("internal error: ") + e.what());
    return 3;
  }
}

struct BenchEntry {
  std::string path;
  std::string format;
  int p = 0;
  int alpha = 0;
  std::string setting;
  double time_limit_s = 0.0;
  std::uint64_t seed = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Manifest rows: path,format,p,alpha,setting,time_limit_s,seed.  Blank lines
// and lines starting with '#' are skipped; relative paths are resolved
// against the manifest's directory.
std::vector<BenchEntry> parse_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in)
    throw std::invalid_argument("cannot open manifest: " + manifest_path);
  const std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  std::vector<BenchEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 7)
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": expected 7 comma-separated fields, got " +
                                  std::to_string(fields.size()));
    BenchEntry e;
    std::filesystem::path path(fields[0]);
    if (path.is_relative()) path = base / path;
    e.path = path.string();
    e.format = fields[1];
    try {
      e.p = std::stoi(fields[2]);
      e.alpha = std::stoi(fields[3]);
      e.setting = fields[4];
      e.time_limit_s = std::stod(fields[5]);
      e.seed = std::stoull(fields[6]);
    } catch (const std::exception&) {
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": malformed numeric field");
    }
    parse_setting(e.setting);  // validate early
    if (e.format != "pmed" && e.format != "tsplib")
      throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                  ": unknown format " + e.format);
    entries.push_back(std::move(e));
  }
  return entries;
}

int cmd_bench(const std::string& manifest_path, const std::string& out_path,
              int jobs) {
  std::vector<BenchEntry> entries;
  std::vector<paccp::Instance> instances;
  try {
    entries = parse_manifest(manifest_path);
    instances.reserve(entries.size());
    for (const BenchEntry& e : entries)
      instances.push_back(load_instance(e.path, e.format));
  } catch (const std::exception& e) {
    log_at(0, e.what());
    return 2;
  }
  std::ofstream out(out_path);
  if (!out) {
    log_at(0, "cannot write: " + out_path);
    return 2;
  }
  out << "instance,n,p,alpha,setting,UB,LB,root_LB,time_s,nodes,status,"
         "cuts_linking,cuts_ub,cuts_lifted,fixings\n";
  out.flush();

  const std::size_t count = entries.size();
  std::vector<std::optional<std::string>> rows(count);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  bool failed = false;

  auto run_one = [&](std::size_t i) -> std::string {
    const BenchEntry& e = entries[i];
    const paccp::Instance& inst = instances[i];
    log_at(1, "bench " + inst.name() + " p=" + std::to_string(e.p) +
                  " alpha=" + std::to_string(e.alpha));
    paccp::BncConfig config;
    config.setting = parse_setting(e.setting);
    config.time_limit_s = e.time_limit_s;
    config.seed = e.seed;
    const paccp::RunReport r = paccp::solve(inst, e.p, e.alpha, config);
    std::ostringstream row;
    row << inst.name() << ',' << inst.n() << ',' << e.p << ',' << e.alpha << ','
        << e.setting << ',' << fmt_num(r.upper_bound) << ','
        << fmt_num(r.lower_bound) << ',' << fmt_num(r.root_lb) << ','
        << fmt_num(r.wall_time_s) << ',' << r.nodes << ','
        << status_name(r.status) << ',' << r.cuts_linking << ',' << r.cuts_ub
        << ',' << r.cuts_lifted << ',' << r.fixings;
    return row.str();
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      std::string row;
      try {
        row = run_one(i);
      } catch (const std::exception& e) {
        row = std::string("!") + e.what();
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        rows[i] = std::move(row);
      }
      cv.notify_all();
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return rows[i].has_value(); });
    const std::string row = *rows[i];
    lock.unlock();
    if (!row.empty() && row[0] == '!') {
      log_at(0, "entry " + std::to_string(i + 1) + " failed: " + row.substr(1));
      failed = true;
      continue;
    }
    out << row << "\n";
    out.flush();
  }
  for (std::thread& t : pool) t.join();
  return failed ? 3 : 0;
}

int cmd_bound(const ProblemArgs& args, const std::string& method) {
  paccp::Instance inst = [&] {
    try {
      return load_instance(args.instance_path, args.format);
    } catch (const std::exception& e) {
      log_at(0, e.what());
      std::exit(2);
    }
  }();
  try {
    paccp::LbSharpResult result;
    if (method == "lb3")
      result = paccp::compute_lb_sharp(inst, args.p, args.alpha,
                                       paccp::LiftVariant::L3);
    else if (method == "lb3v")
      result = paccp::compute_lb_sharp(inst, args.p, args.alpha,
                                       paccp::LiftVariant::L3V);
    else
      result = paccp::compute_lb_sharp_1(inst, args.p, args.alpha);
    std::printf("%s,%s,%d\n", method.c_str(), fmt_num(result.value).c_str(),
                result.iterations);
    return 0;
  } catch (const std::invalid_argument& e) {
    log_at(0, e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    if (msg.find("budget") != std::string::npos) {
      log_at(0, "subset budget exceeded: " + msg);
      return 2;
    }
    log_at(0, std::string("internal error: ") + msg);
    return 3;
  }
}

int cmd_verify(const ProblemArgs& args, long long max_subsets) {
  paccp::Instance inst = [&] {
    try {
      return load_instance(args.instance_path, args.format);
    } catch (const std::exception& e) {
      log_at(0, e.what());
      std::exit(2);
    }
  }();
  const long long subsets = paccp::binomial(inst.m(), args.p);
  if (inst.m() > 16 || subsets > max_subsets) {
    log_at(0, "brute-force budget exceeded: C(" + std::to_string(inst.m()) +
                  "," + std::to_string(args.p) + ") = " +
                  std::to_string(subsets) + " > " +
                  std::to_string(max_subsets));
    return 2;
  }
  try {
    const paccp::RunReport r =
        paccp::solve(inst, args.p, args.alpha, make_config(args));
    const auto [opt, best] = paccp::brute_force_opt(inst, args.p, args.alpha);
    const bool match = r.status == paccp::SolveStatus::Optimal &&
                       std::abs(r.upper_bound - opt) <= 1e-6;
    std::printf("solver=%s brute=%s verdict=%s\n",
                fmt_num(r.upper_bound).c_str(), fmt_num(opt).c_str(),
                match ? "match" : "mismatch");
    return match ? 0 : 4;
  } catch (const std::invalid_argument& e) {
    log_at(0, e.what());
    return 2;
  } catch (const std::exception& e) {
    log_at(0, std::string("internal error: ") + e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver suite for the p-alpha-closest-center problem"};
  app.require_subcommand(1);

  ProblemArgs solve_args;
  std::string solve_out;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "solve one instance to proven optimality");
  add_problem_flags(solve_cmd, &solve_args, /*with_solver=*/true);
  solve_cmd->add_option("--out", solve_out, "write a JSON report here");

  std::string bench_manifest, bench_out;
  int bench_jobs = 1;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a benchmark manifest to CSV");
  bench_cmd->add_option("--manifest", bench_manifest, "manifest file")
      ->required();
  bench_cmd->add_option("--out", bench_out, "output CSV path")->required();
  bench_cmd->add_option("--jobs", bench_jobs, "concurrent entries")
      ->check(CLI::PositiveNumber);

  ProblemArgs bound_args;
  std::string bound_method;
  CLI::App* bound_cmd =
      app.add_subcommand("bound", "compute an iterated lifted lower bound");
  add_problem_flags(bound_cmd, &bound_args, /*with_solver=*/false);
  bound_cmd->add_option("--method", bound_method, "bound variant")
      ->required()
      ->check(CLI::IsMember({"lb3", "lb3v", "lb1"}));

  ProblemArgs verify_args;
  long long verify_max_subsets = 1000000;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "cross-check the solver against brute force");
  add_problem_flags(verify_cmd, &verify_args, /*with_solver=*/true);
  verify_cmd->add_option("--max-subsets", verify_max_subsets,
                         "largest allowed C(m,p)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // normalize CLI11's parse-error codes
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args, solve_out);
    if (bench_cmd->parsed()) return cmd_bench(bench_manifest, bench_out,
                                              bench_jobs);
    if (bound_cmd->parsed()) return cmd_bound(bound_args, bound_method);
    if (verify_cmd->parsed()) return cmd_verify(verify_args,
                                                verify_max_subsets);
  } catch (const std::exception& e) {
    log_at(0, std::string("internal error: ") + e.what());
    return 3;
  }
  return 2;
}
