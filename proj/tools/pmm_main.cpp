// Command-line front end: validate, synth, simulate, oracle-check, dcnet.
// Reports are JSON on stdout (or --out); --human adds a short text summary
// on stderr. Exit codes: 0 success/converged, 1 condition violation,
// 2 input/parse/limit error, 3 diverged.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "pmm/bellman.hpp"
#include "pmm/dcnet.hpp"
#include "pmm/oracle.hpp"
#include "pmm/problem.hpp"
#include "pmm/simulate.hpp"

namespace {

using nlohmann::json;
using namespace pmm;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDiverged = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + out_path);
  out << content;
}

json violations_to_json(const std::vector<Violation>& violations) {
  json arr = json::array();
  for (const Violation& v : violations) {
    arr.push_back({{"condition", v.condition},
                   {"row", v.row + 1},
                   {"col", v.col + 1},
                   {"margin", v.margin}});
  }
  return arr;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix parse_matrix_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ParseError("design field \"" + name +
                     "\" must be an array of row arrays");
  Matrix M(j.size(), j.front().size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j.front().size())
      throw ParseError("design field \"" + name + "\" has ragged rows");
    for (size_t k = 0; k < j[i].size(); ++k)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          j[i][k].get<double>();
  }
  return M;
}

Vector parse_vector_json(const json& j, const std::string& name) {
  if (!j.is_array())
    throw ParseError("design field \"" + name + "\" must be a flat array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Vector parse_x0(const std::string& text, Eigen::Index n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError("--x0: cannot parse \"" + item + "\" as a number");
    }
  }
  if (vals.empty()) throw ParseError("--x0: empty value");
  Vector x0(n);
  if (vals.size() == 1) {
    x0.setConstant(vals[0]);  // scalar broadcasts to all states
  } else if (static_cast<Eigen::Index>(vals.size()) == n) {
    for (Eigen::Index i = 0; i < n; ++i) x0(i) = vals[static_cast<size_t>(i)];
  } else {
    throw ParseError("--x0: expected 1 or " + std::to_string(n) + " values");
  }
  return x0;
}

struct CommonOpts {
  std::string problem_path;
  std::string out_path;
  bool human = false;
  double tol = 1e-10;
  long max_iter = 100000;
  double cap = 1e12;
};

int run_validate(const CommonOpts& opts) {
  ProblemInstance inst = load_problem(read_file(opts.problem_path));
  ValidationReport rep = validate(inst);
  json doc = {{"dim_ok", rep.dim_ok},
              {"cond_2a_ok", rep.positivity.ok},
              {"cond_2b_ok", rep.cost.ok},
              {"positivity_min_margin", rep.positivity.min_margin},
              {"cost_min_margin", rep.cost.min_margin},
              {"violations", violations_to_json(rep.positivity.violations)}};
  for (const auto& v : violations_to_json(rep.cost.violations))
    doc["violations"].push_back(v);
  write_output(opts.out_path, doc.dump(2) + "\n");
  if (opts.human)
    std::cerr << (rep.all_ok() ? "both feasibility conditions hold"
                               : "feasibility conditions violated")
              << "\n";
  return rep.all_ok() ? kExitOk : kExitViolation;
}

const char* status_name(IterationStatus s) {
  switch (s) {
    case IterationStatus::Converged: return "Converged";
    case IterationStatus::Diverged: return "Diverged";
    default: return "MaxIterationsReached";
  }
}

int run_synth(const CommonOpts& opts, const std::string& x0_text) {
  ProblemInstance inst = load_problem(read_file(opts.problem_path));
  ValidationReport vrep = validate(inst);
  if (!vrep.all_ok()) {
    json doc = {{"error", "instance fails the feasibility conditions"},
                {"cond_2a_ok", vrep.positivity.ok},
                {"cond_2b_ok", vrep.cost.ok}};
    write_output(opts.out_path, doc.dump(2) + "\n");
    return kExitViolation;
  }

  IterationOptions iopts;
  iopts.tol = opts.tol;
  iopts.max_iter = opts.max_iter;
  iopts.cap = opts.cap;
  IterationResult res = value_iterate(inst, iopts);

  json doc = {{"status", status_name(res.status)},
              {"iterations", res.value.iterations},
              {"residual_inf_norm", res.value.residual_inf_norm},
              {"p", vector_to_json(res.value.p)}};
  if (res.status == IterationStatus::Converged) {
    GainMatrix K = synthesize_gain(res.value, inst);
    GainMatrix L = adversary_gain(res.value, inst);
    doc["K"] = matrix_to_json(K.K);
    doc["K_signs"] = K.signs;
    doc["L"] = matrix_to_json(L.K);
    doc["L_signs"] = L.signs;
    if (!x0_text.empty()) {
      Vector x0 = parse_x0(x0_text, inst.n());
      doc["x0"] = vector_to_json(x0);
      doc["optimal_cost"] = optimal_cost(res.value, x0);
    }
  }
  write_output(opts.out_path, doc.dump(2) + "\n");
  if (opts.human)
    std::cerr << status_name(res.status) << " after " << res.value.iterations
              << " iterations\n";
  return res.status == IterationStatus::Converged ? kExitOk : kExitDiverged;
}

int run_simulate(const CommonOpts& opts, const std::string& gain_path,
                 const std::string& policy, long horizon, std::uint64_t seed,
                 const std::string& x0_text, const std::string& csv_path) {
  if (horizon < 1) throw ParseError("--horizon must be >= 1");
  ProblemInstance inst = load_problem(read_file(opts.problem_path));
  ValidationReport vrep = validate(inst);
  if (!vrep.all_ok()) {
    write_output(opts.out_path,
                 json({{"error", "instance fails the feasibility conditions"}})
                         .dump(2) +
                     "\n");
    return kExitViolation;
  }

  IterationOptions iopts;
  iopts.tol = opts.tol;
  iopts.max_iter = opts.max_iter;
  iopts.cap = opts.cap;
  IterationResult res = value_iterate(inst, iopts);
  if (res.status != IterationStatus::Converged) {
    write_output(opts.out_path,
                 json({{"status", status_name(res.status)},
                       {"error", "value iteration did not converge"}})
                         .dump(2) +
                     "\n");
    return kExitDiverged;
  }

  GainMatrix K;
  if (gain_path.empty()) {
    K = synthesize_gain(res.value, inst);
  } else {
    json gdoc = json::parse(read_file(gain_path));
    if (!gdoc.contains("K")) throw ParseError("gain file missing field \"K\"");
    K.K = parse_matrix_json(gdoc["K"], "K");
    K.signs.assign(static_cast<size_t>(K.K.rows()), +1);
  }
  GainMatrix L = adversary_gain(res.value, inst);

  DisturbancePolicy w_policy;
  if (policy == "worst") {
    w_policy = DisturbancePolicy::worst_case(L.K);
  } else if (policy == "zero") {
    w_policy = DisturbancePolicy::zero();
  } else if (policy == "random") {
    w_policy = DisturbancePolicy::random_admissible(seed);
  } else {
    throw ParseError("--policy must be one of worst, zero, random");
  }

  Vector x0 = x0_text.empty() ? Vector::Ones(inst.n())
                              : parse_x0(x0_text, inst.n());
  Trajectory traj = simulate(inst, K, w_policy, x0, horizon);
  if (!csv_path.empty()) write_output(csv_path, trajectory_to_csv(traj));

  const Vector& p = res.value.p;
  double telescoping_max_error = 0.0;
  for (size_t t = 0; t < traj.stage_costs.size(); ++t) {
    const double lhs = traj.stage_costs[t] + p.dot(traj.states[t + 1]);
    telescoping_max_error =
        std::max(telescoping_max_error, std::abs(lhs - p.dot(traj.states[t])));
  }

  json doc = {{"accumulated_cost", accumulated_cost(traj)},
              {"optimal_cost", p.dot(x0)},
              {"terminal_value", p.dot(traj.states.back())},
              {"telescoping_max_error", telescoping_max_error},
              {"policy", policy},
              {"horizon", horizon},
              {"seed", seed}};
  write_output(opts.out_path, doc.dump(2) + "\n");
  if (opts.human)
    std::cerr << "accumulated cost " << accumulated_cost(traj) << " vs p'x0 "
              << p.dot(x0) << "\n";
  return kExitOk;
}

int run_oracle_check(const CommonOpts& opts, long horizon, long samples,
                     std::uint64_t seed, double tol) {
  ProblemInstance inst = load_problem(read_file(opts.problem_path));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::vector<Vector> states;
  for (long i = 0; i < samples; ++i) {
    Vector x(inst.n());
    for (Eigen::Index k = 0; k < inst.n(); ++k) x(k) = coord(rng);
    states.push_back(std::move(x));
  }
  LinearValueCheck check = verify_linear_value(inst, horizon, states, tol);
  json doc = {{"ok", check.ok},
              {"max_deviation", check.max_deviation},
              {"horizon", horizon},
              {"samples", samples},
              {"tol", tol}};
  write_output(opts.out_path, doc.dump(2) + "\n");
  if (opts.human)
    std::cerr << (check.ok ? "oracle agrees" : "oracle disagrees")
              << ", max deviation " << check.max_deviation << "\n";
  return check.ok ? kExitOk : kExitViolation;
}

int run_dcnet(const std::string& network_path, const std::string& design_path,
              double h_override, bool want_hmax, const std::string& out_path,
              const std::string& report_path, bool human) {
  DcNetwork net = load_network(read_file(network_path));

  Matrix E = Matrix::Zero(net.n(), net.n());
  Matrix G = Matrix::Zero(net.n(), net.n());
  Vector s = Vector::Zero(net.n());
  Vector r = Vector::Zero(net.n());
  Vector gamma = Vector::Zero(net.n());
  double h = h_override;
  if (!design_path.empty()) {
    json ddoc = json::parse(read_file(design_path));
    if (ddoc.contains("E")) E = parse_matrix_json(ddoc["E"], "E");
    if (ddoc.contains("G")) G = parse_matrix_json(ddoc["G"], "G");
    if (ddoc.contains("s")) s = parse_vector_json(ddoc["s"], "s");
    if (ddoc.contains("r")) r = parse_vector_json(ddoc["r"], "r");
    if (ddoc.contains("gamma"))
      gamma = parse_vector_json(ddoc["gamma"], "gamma");
    if (h <= 0.0 && ddoc.contains("h")) h = ddoc["h"].get<double>();
  }

  StepSizeResult step = max_step_size(net, E, G);
  json report = {{"h_max", step.unbounded ? json("unbounded")
                                          : json(step.h_max)},
                 {"structural_violations",
                  violations_to_json(step.structural_violations)}};

  if (!step.structural_violations.empty()) {
    report["error"] = "E + G exceeds the line conductance pattern";
    write_output(report_path, report.dump(2) + "\n");
    return kExitViolation;
  }
  if (want_hmax && h <= 0.0) {
    write_output(report_path, report.dump(2) + "\n");
    return kExitOk;
  }
  if (h <= 0.0)
    throw ParseError("step size h must be given via --h or the design file");

  try {
    ProblemInstance inst = assemble_problem(net, h, E, G, s, r, gamma);
    report["h"] = h;
    report["feasible"] = true;
    write_output(out_path, serialize_problem(inst));
    write_output(report_path, report.dump(2) + "\n");
    if (human) std::cerr << "assembled feasible problem at h = " << h << "\n";
    return kExitOk;
  } catch (const AssemblyError& e) {
    report["feasible"] = false;
    report["error"] = e.what();
    report["cond_2a_ok"] = e.report.positivity.ok;
    report["cond_2b_ok"] = e.report.cost.ok;
    json viols = violations_to_json(e.report.positivity.violations);
    for (const auto& v : violations_to_json(e.report.cost.violations))
      viols.push_back(v);
    report["violations"] = viols;
    write_output(report_path, report.dump(2) + "\n");
    if (human) std::cerr << e.what() << "\n";
    return kExitViolation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimax optimal control of positive linear systems"};
  // --h is a domain flag (step size), so help is --help only
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  CommonOpts opts;
  std::string x0_text, gain_path, policy = "worst", csv_path;
  std::string network_path, design_path, report_path;
  long horizon = 100, samples = 10;
  std::uint64_t seed = 0;
  double oracle_tol = 1e-9, h = 0.0;
  bool want_hmax = false;

  auto add_common = [&](CLI::App* cmd, bool needs_problem = true) {
    if (needs_problem)
      cmd->add_option("problem", opts.problem_path, "problem file (JSON)")
          ->required();
    cmd->add_option("--out", opts.out_path, "write the report here");
    cmd->add_flag("--human", opts.human, "also print a text summary");
  };

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check the feasibility conditions");
  add_common(validate_cmd);

  CLI::App* synth_cmd =
      app.add_subcommand("synth", "value iteration and gain synthesis");
  add_common(synth_cmd);
  synth_cmd->add_option("--tol", opts.tol, "step-change tolerance");
  synth_cmd->add_option("--max-iter", opts.max_iter, "iteration limit");
  synth_cmd->add_option("--cap", opts.cap, "divergence cap");
  synth_cmd->add_option("--x0", x0_text, "initial state for the cost report");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "closed-loop rollout");
  add_common(sim_cmd);
  sim_cmd->add_option("--tol", opts.tol, "step-change tolerance");
  sim_cmd->add_option("--max-iter", opts.max_iter, "iteration limit");
  sim_cmd->add_option("--cap", opts.cap, "divergence cap");
  sim_cmd->add_option("--gain-file", gain_path,
                      "JSON {\"K\": [[...]]}; default synthesizes the gain");
  sim_cmd->add_option("--policy", policy, "worst | zero | random");
  sim_cmd->add_option("--horizon", horizon, "number of steps T");
  sim_cmd->add_option("--seed", seed, "seed for the random policy");
  sim_cmd->add_option("--x0", x0_text, "initial state (default all ones)");
  sim_cmd->add_option("--csv", csv_path, "write the trajectory CSV here");

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle-check", "brute-force dynamic-programming verification");
  add_common(oracle_cmd);
  oracle_cmd->add_option("--horizon", horizon, "DP horizon k")
      ->default_val(4);
  oracle_cmd->add_option("--samples", samples, "number of random states");
  oracle_cmd->add_option("--seed", seed, "sampling seed")->required();
  oracle_cmd->add_option("--tol", oracle_tol, "relative agreement tolerance");

  CLI::App* dcnet_cmd =
      app.add_subcommand("dcnet", "assemble a problem from a DC network");
  dcnet_cmd->set_help_flag("--help", "print usage");
  dcnet_cmd->add_option("network", network_path, "network file (JSON)")
      ->required();
  dcnet_cmd->add_option("--design", design_path,
                        "JSON with E, G, s, r, gamma and optionally h");
  dcnet_cmd->add_option("--h", h, "discretization step");
  dcnet_cmd->add_flag("--hmax", want_hmax, "report the maximal feasible step");
  dcnet_cmd->add_option("--out", opts.out_path, "write the problem file here");
  dcnet_cmd->add_option("--report", report_path, "write the report here");
  dcnet_cmd->add_flag("--human", opts.human, "also print a text summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return run_validate(opts);
    if (app.got_subcommand(synth_cmd)) return run_synth(opts, x0_text);
    if (app.got_subcommand(sim_cmd))
      return run_simulate(opts, gain_path, policy, horizon, seed, x0_text,
                          csv_path);
    if (app.got_subcommand(oracle_cmd))
      return run_oracle_check(opts, horizon, samples, seed, oracle_tol);
    if (app.got_subcommand(dcnet_cmd))
      return run_dcnet(network_path, design_path, h, want_hmax, opts.out_path,
                       report_path, opts.human);
  } catch (const OracleLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
