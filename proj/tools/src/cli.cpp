#include "optplan/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "optplan/discovery.hpp"
#include "optplan/domains.hpp"
#include "optplan/error.hpp"
#include "optplan/mdp_io.hpp"

namespace optplan {

namespace {

struct InstanceFlags {
  std::string domain;
  std::string map;
  std::string mdp;
  std::optional<double> gamma;
  double epsilon = kDefaultEpsilon;
  std::optional<std::uint64_t> budget;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& f) {
  auto* domain = cmd->add_option("--domain", f.domain, "Built-in domain");
  auto* map = cmd->add_option("--map", f.map, "Grid map file");
  auto* mdp = cmd->add_option("--mdp", f.mdp, "MDP JSON file");
  domain->excludes(map, mdp);
  map->excludes(mdp);
  cmd->add_option("--gamma", f.gamma, "Discount factor override");
  cmd->add_option("--epsilon", f.epsilon, "Optimality tolerance")->capture_default_str();
  cmd->add_option("--budget", f.budget, "Enumeration cap (overrides OPTPLAN_BUDGET)");
}

Domain load_instance(const InstanceFlags& f) {
  if (!f.domain.empty()) return load_builtin(f.domain, f.gamma);
  if (!f.map.empty()) {
    GridSpec spec = parse_grid_map(read_text_file(f.map));
    if (f.gamma) spec.gamma = *f.gamma;
    return grid_domain(std::filesystem::path(f.map).stem().string(), build_grid_world(spec));
  }
  if (!f.mdp.empty()) {
    Mdp mdp = parse_mdp_json(read_text_file(f.mdp));
    if (f.gamma) {
      mdp.gamma = *f.gamma;
      require_valid(mdp);
    }
    Domain d;
    d.name = std::filesystem::path(f.mdp).stem().string();
    d.state_names = default_state_names(mdp);
    d.mdp = std::move(mdp);
    return d;
  }
  throw input_error("one of --domain, --map or --mdp is required");
}

PlanningContext make_context(const Domain& d, const InstanceFlags& f) {
  return PlanningContext(d.mdp, f.epsilon, f.budget.value_or(default_budget()));
}

// Writes to --out when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw input_error("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// ---------------------------------------------------------------------------

void cmd_solve(const InstanceFlags& f, std::ostream& out) {
  const Domain d = load_instance(f);
  require_valid(d.mdp);
  const ValueFunction vstar = solve_optimal(d.mdp, reference_tolerance(f.epsilon));
  const ConvergenceResult run = value_iteration(d.mdp, {}, f.epsilon, vstar);
  out << "state,value,iterations\n" << std::setprecision(12);
  for (State s = 0; s < d.mdp.n_states; ++s) {
    out << d.state_names[static_cast<std::size_t>(s)] << ',' << vstar[s] << ','
        << run.per_state_iteration[static_cast<std::size_t>(s)] << '\n';
  }
  out << "L=" << run.iterations << '\n';
}

void cmd_distance(const InstanceFlags& f, const std::string& out_path, std::ostream& out) {
  const Domain d = load_instance(f);
  const DistanceMatrix dist = distance_matrix(d.mdp, f.epsilon);
  std::vector<State> rows;
  for (State s = 0; s < d.mdp.n_states; ++s)
    if (s != d.mdp.goal) rows.push_back(s);

  Sink sink(out_path, out);
  std::ostream& csv = sink.get();
  csv << "state";
  for (State t : rows) csv << ',' << d.state_names[static_cast<std::size_t>(t)];
  csv << '\n';
  for (State s : rows) {
    csv << d.state_names[static_cast<std::size_t>(s)];
    for (State t : rows) csv << ',' << dist.at(s, t);
    csv << '\n';
  }
}

void cmd_discover(const InstanceFlags& f, const std::string& method_name_arg, std::optional<int> k,
                  std::optional<int> ell, std::ostream& out) {
  const auto method = parse_method(method_name_arg);
  if (!method) throw input_error("unknown method '" + method_name_arg + "'");
  const std::optional<int> param = takes_ell(*method) ? ell : k;
  if (!param) throw input_error(std::string("method ") + method_name_arg + (takes_ell(*method) ? " needs --ell" : " needs --k"));

  const Domain d = load_instance(f);
  const PlanningContext ctx = make_context(d, f);
  // k = 0 always means no options, whatever the method.
  const OptionSet set =
      (!takes_ell(*method) && *param == 0) ? ctx.make_set(*method, {}) : discover(ctx, *method, *param);

  out << option_set_to_json(set) << '\n';
  if (d.grid) out << '\n' << render_grid(*d.grid, set.initiation_states());
}

struct ExperimentRecord {
  std::string method;
  int param = 0;
  int result = 0;
  long long wall_ms = 0;
};

void cmd_experiment(const InstanceFlags& f, const std::string& sweep, const std::string& k_range,
                    const std::string& ell_range, const std::string& methods_arg, int seed, bool no_timing,
                    const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (sweep != "k" && sweep != "ell") throw input_error("--sweep must be 'k' or 'ell'");
  const bool by_ell = sweep == "ell";

  std::vector<Method> methods;
  std::stringstream list(methods_arg);
  for (std::string name; std::getline(list, name, ',');) {
    if (name.empty()) continue;
    if (name == "optimal") name = by_ell ? "optimal-momi" : "optimal-mimo";
    const auto m = parse_method(name);
    if (!m) throw input_error("unknown method '" + name + "'");
    if (takes_ell(*m) != by_ell) throw input_error("method " + name + " does not sweep over " + sweep);
    if (std::find(methods.begin(), methods.end(), *m) == methods.end()) methods.push_back(*m);
  }
  if (methods.empty()) throw input_error("no methods given");

  const Domain d = load_instance(f);
  const PlanningContext ctx = make_context(d, f);
  std::vector<int> params;
  if (by_ell) {
    params = ell_range.empty() ? parse_int_range("2.." + std::to_string(ctx.baseline_L())) : parse_int_range(ell_range);
  } else {
    if (k_range.empty()) throw input_error("--k range is required for a k sweep");
    params = parse_int_range(k_range);
  }

  std::vector<ExperimentRecord> records;
  for (Method m : methods) {
    for (int p : params) {
      const auto start = std::chrono::steady_clock::now();
      OptionSet set;
      try {
        if (!by_ell && p == 0) {
          set = ctx.make_set(m, {});
        } else {
          set = discover(ctx, m, p);
          if (m == Method::kBetweenness || m == Method::kEigen) set = best_subset(ctx, set);
        }
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::kInput) throw;
        err << "skipping " << method_name(m) << ' ' << sweep << '=' << p << ": " << e.what() << '\n';
        continue;
      }
      const auto elapsed = std::chrono::steady_clock::now() - start;
      ExperimentRecord rec;
      rec.method = std::string(method_name(m));
      rec.param = p;
      rec.result = by_ell ? static_cast<int>(set.options.size()) : set.measured_L;
      rec.wall_ms = no_timing ? 0 : std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
      records.push_back(rec);
    }
  }
  std::sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.method, a.param) < std::tie(b.method, b.param);
  });

  Sink sink(out_path, out);
  std::ostream& csv = sink.get();
  csv << "domain,method,param,result,wall_time_ms,seed\n";
  for (const ExperimentRecord& r : records)
    csv << d.name << ',' << r.method << ',' << r.param << ',' << r.result << ',' << r.wall_ms << ',' << seed << '\n';
}

void cmd_reduce(const std::string& input, std::optional<double> gamma, const std::string& out_path, std::ostream& out) {
  const SetCoverInstance inst = parse_set_cover_json(read_text_file(input));
  Mdp mdp;
  try {
    mdp = from_set_cover(inst.universe, inst.subsets, gamma.value_or(0.95));
  } catch (const Error& e) {
    // An uncovered element is malformed input for the reduction.
    throw input_error(e.what());
  }
  Sink sink(out_path, out);
  sink.get() << mdp_to_json(mdp);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return kExitInput;
    case ErrorKind::kBudget: return kExitBudget;
    case ErrorKind::kInfeasible:
    case ErrorKind::kConvergence: return kExitInfeasible;
  }
  return kExitInput;
}

}  // namespace

std::vector<int> parse_int_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw input_error("bad range '" + text + "'");
    return v;
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw input_error("empty range '" + text + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream list(text);
  for (std::string item; std::getline(list, item, ',');) out.push_back(to_int(item));
  if (out.empty()) throw input_error("empty range");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Point-option discovery for value-iteration planning", "optplan"};
  app.require_subcommand(1);

  InstanceFlags solve_flags, dist_flags, disc_flags, exp_flags;
  std::string dist_out, exp_out, reduce_out, reduce_in;
  std::string disc_method = "a-mimo", exp_methods, sweep = "k", k_range, ell_range;
  std::optional<int> disc_k, disc_ell;
  std::optional<double> reduce_gamma;
  int seed = 0;
  bool no_timing = false;

  auto* solve = app.add_subcommand("solve", "Print V* and the option-free iteration counts");
  add_instance_flags(solve, solve_flags);

  auto* distance = app.add_subcommand("distance", "Convergence distance matrix as CSV");
  add_instance_flags(distance, dist_flags);
  distance->add_option("--out", dist_out, "Output file");

  auto* disc = app.add_subcommand("discover", "Run one discovery method");
  add_instance_flags(disc, disc_flags);
  disc->add_option("--method", disc_method, "a-momi, a-mimo, optimal-mimo, optimal-momi, greedy, betweenness, eigen")
      ->capture_default_str();
  disc->add_option("--k", disc_k, "Number of options");
  disc->add_option("--ell", disc_ell, "Iteration target");

  auto* exp = app.add_subcommand("experiment", "Sweep k or ell over several methods and write CSV");
  add_instance_flags(exp, exp_flags);
  exp->add_option("--sweep", sweep, "k or ell")->capture_default_str();
  exp->add_option("--k", k_range, "k values, e.g. 1..8");
  exp->add_option("--ell", ell_range, "ell values (default 2..L of no options)");
  exp->add_option("--method", exp_methods, "Comma-separated methods; 'optimal' picks the exact one")->required();
  exp->add_option("--seed", seed, "Recorded in every row")->capture_default_str();
  exp->add_flag("--no-timing", no_timing, "Write 0 for wall_time_ms");
  exp->add_option("--out", exp_out, "Output file");

  auto* reduce = app.add_subcommand("reduce", "Build the shortest-path MDP for a set-cover instance");
  reduce->add_option("input", reduce_in, "Set-cover JSON")->required();
  reduce->add_option("--gamma", reduce_gamma, "Discount factor");
  reduce->add_option("--out", reduce_out, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve) cmd_solve(solve_flags, out);
    if (*distance) cmd_distance(dist_flags, dist_out, out);
    if (*disc) cmd_discover(disc_flags, disc_method, disc_k, disc_ell, out);
    if (*exp) cmd_experiment(exp_flags, sweep, k_range, ell_range, exp_methods, seed, no_timing, exp_out, out, err);
    if (*reduce) cmd_reduce(reduce_in, reduce_gamma, reduce_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kExitOk;
}

}  // namespace optplan
