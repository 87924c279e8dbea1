#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli/io.hpp"
#include "pta/sampling.hpp"

namespace pta::cli {

namespace {

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.max_iters = cfg.max_iters;
  std::string start = cfg.start;
  if (!cfg.start_file.empty() && start == "bracket_mid") start = "file";
  if (start == "bracket_mid") {
    opts.start = StartRule::BracketMid;
  } else if (start == "ones") {
    opts.start = StartRule::Ones;
  } else if (start == "perron") {
    opts.start = StartRule::Perron;
  } else if (start == "file") {
    if (cfg.start_file.empty()) {
      throw Error(ErrorKind::InvalidParameter, "--start file needs --start-file PATH");
    }
    opts.start = StartRule::Given;
    opts.start_vector = start_vector_from(read_json_file(cfg.start_file));
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown start rule '" + start + "'");
  }
  return opts;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace(const std::string& path, const std::vector<double>& history) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidParameter, "cannot write trace file " + path);
  os << "iter,residual_y\n";
  for (std::size_t k = 0; k < history.size(); ++k) os << k << ',' << fmt17(history[k]) << '\n';
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

void emit_certificate(std::ostream& out, const RunConfig& cfg, const SolvabilityCertificate& c) {
  if (cfg.format == "csv") {
    out << "r,s,r_pow_s,criterion,verdict,margin,boundary_warning\n"
        << fmt17(c.r) << ',' << fmt17(c.s) << ',' << fmt17(c.r_pow_s) << ','
        << fmt17(c.criterion) << ',' << to_string(c.verdict) << ',' << fmt17(c.margin) << ','
        << (c.boundary_warning ? "true" : "false") << '\n';
  } else {
    emit(out, to_json(c));
  }
}

void emit_no_solution(std::ostream& out, const RunConfig& cfg, const SolvabilityCertificate& c) {
  if (cfg.format == "csv") {
    emit_certificate(out, cfg, c);
  } else {
    emit(out, json{{"status", "NoSolution"}, {"certificate", to_json(c)}});
  }
}

void emit_columns(std::ostream& out, const std::vector<std::string>& names,
                  const std::vector<const Vector*>& cols) {
  out << "component";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < cols.front()->size(); ++i) {
    out << i;
    for (const Vector* c : cols) out << ',' << fmt17((*c)(i));
    out << '\n';
  }
}

// Shared error policy for every command: 2 infeasible, 3 iteration budget,
// 1 for everything else.
template <class Body>
int guarded(std::ostream& out, const RunConfig& cfg, Body&& body) {
  try {
    return body();
  } catch (const NoSolutionError& e) {
    emit_no_solution(out, cfg, e.certificate());
    return kInfeasible;
  } catch (const MaxIterationsError& e) {
    emit(out, json{{"status", "MaxIterationsExceeded"},
                   {"iterations", e.iterations()},
                   {"last_relative_residual", e.last_relative_residual()},
                   {"message", e.what()}});
    return kIterationBudget;
  } catch (const Error& e) {
    emit(out, error_document(e.kind(), e.what()));
    return kError;
  } catch (const std::exception& e) {
    emit(out, error_document(ErrorKind::InvalidParameter, e.what()));
    return kError;
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "--tol must be positive");
  if (cfg.max_iters < 1) throw Error(ErrorKind::InvalidParameter, "--max-iters must be >= 1");
  if (cfg.format != "json" && cfg.format != "csv") {
    throw Error(ErrorKind::InvalidParameter, "--format must be json or csv");
  }
}

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
  if (!v) throw Error(ErrorKind::InvalidParameter, std::string("missing required ") + flag);
  return *v;
}

// A JSON vector, or a scalar broadcast to n states.
Vector state_vector(const std::string& arg, std::size_t n, const std::string& what) {
  const json j = json_from_arg(arg);
  if (j.is_number() || j.is_string()) {
    return Vector::Constant(static_cast<Eigen::Index>(n), number_from(j, what));
  }
  return vector_from(j, what);
}

double scalar_arg(const std::string& arg, const std::string& what) {
  return number_from(json_from_arg(arg), what);
}

MarkovChain chain_arg(const std::string& arg) {
  return MarkovChain::make(matrix_from(json_from_arg(arg), "chain"));
}

}  // namespace

int cmd_check(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  return guarded(out, cfg, [&] {
    validate_config(cfg);
    const PowerAffineSystem sys = system_from(read_json_file(path));
    const SolvabilityCertificate c = certify(sys);
    emit_certificate(out, cfg, c);
    return c.verdict == Verdict::UniqueSolution ? kSuccess : kInfeasible;
  });
}

int cmd_solve(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  return guarded(out, cfg, [&] {
    validate_config(cfg);
    const PowerAffineSystem sys = system_from(read_json_file(path));
    const SolveReport rep = solve(sys, solve_options(cfg));
    if (!cfg.trace.empty()) write_trace(cfg.trace, rep.residual_history);
    if (cfg.format == "csv") {
      emit_columns(out, {"x_star", "y_star"}, {&rep.x_star.values(), &rep.y_star.values()});
    } else {
      emit(out, to_json(rep));
    }
    return kSuccess;
  });
}

int cmd_props(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  return guarded(out, cfg, [&] {
    validate_config(cfg);
    const PowerAffineSystem sys = system_from(read_json_file(path));
    std::vector<ProbeReport> reports;
    reports.push_back(probe_cone_lattice(sys.size(), cfg.trials, cfg.seed));
    reports.push_back(probe_order_preserving(sys, cfg.trials, cfg.seed));
    reports.push_back(probe_shape(sys, cfg.trials, cfg.seed));

    const PerronData pd = perron(sys.a());
    const SolvabilityCertificate cert = certificate_from(pd.r, sys.s());
    if (cert.verdict == Verdict::UniqueSolution) {
      try {
        const SolveReport rep = solve(sys, solve_options(cfg));
        reports.push_back(probe_bracket(sys, rep.bracket));
        reports.push_back(probe_fixed_point_inequality(sys, rep));
      } catch (const MaxIterationsError& e) {
        reports.push_back(ProbeReport{"solve", 1, 1.0, 0.0, false, false, std::string(e.what())});
      }
    } else {
      std::vector<Vector> starts{Vector::Ones(static_cast<Eigen::Index>(sys.size())), pd.e};
      for (std::uint64_t k = 0; k < 3; ++k) {
        starts.push_back(Rng::split(cfg.seed, k).log_uniform_vector(sys.size(), 1e-2, 1e2));
      }
      reports.push_back(probe_nonexistence(sys, starts));
    }

    bool all = true;
    for (const auto& r : reports) all = all && r.passed;
    if (cfg.format == "csv") {
      out << "probe_name,trials,worst_violation,tolerance,passed,inconclusive\n";
      for (const auto& r : reports) {
        out << r.probe_name << ',' << r.trials << ',' << fmt17(r.worst_violation) << ','
            << fmt17(r.tolerance) << ',' << (r.passed ? "true" : "false") << ','
            << (r.inconclusive ? "true" : "false") << '\n';
      }
    } else {
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(to_json(r));
      emit(out, json{{"certificate", to_json(cert)}, {"probes", arr}, {"all_passed", all}});
    }
    return all ? kSuccess : kError;
  });
}

int cmd_app(const std::string& model, const AppParams& p, const RunConfig& cfg,
            std::ostream& out) {
  return guarded(out, cfg, [&] {
    validate_config(cfg);
    const SolveOptions opts = solve_options(cfg);
    const auto solution = [&]() -> AppSolution {
      if (model == "toda") {
        const MarkovChain chain = chain_arg(need(p.chain, "--chain"));
        return solve_toda(state_vector(need(p.beta, "--beta"), chain.size(), "beta"),
                          state_vector(need(p.gross_return, "--R"), chain.size(), "R"),
                          need(p.gamma, "--gamma"), chain, opts);
      }
      if (model == "ez") {
        const MarkovChain chain = chain_arg(need(p.chain, "--chain"));
        return solve_epstein_zin(scalar_arg(need(p.beta, "--beta"), "beta"), need(p.rho, "--rho"),
                                 need(p.alpha, "--alpha"),
                                 state_vector(need(p.consumption, "--c"), chain.size(), "c"),
                                 chain, opts);
      }
      if (model == "wc") {
        return solve_wealth_consumption(scalar_arg(need(p.beta, "--beta"), "beta"),
                                        need(p.s, "--s"),
                                        matrix_from(json_from_arg(need(p.q, "--Q")), "Q"), opts);
      }
      if (model == "ces") {
        return solve_ces(need(p.savings, "--savings"), need(p.theta, "--theta"),
                         need(p.rho, "--rho"),
                         matrix_from(json_from_arg(need(p.technology, "--A")), "A"), opts);
      }
      throw Error(ErrorKind::InvalidParameter, "unknown model '" + model + "'");
    }();
    if (!cfg.trace.empty()) write_trace(cfg.trace, solution.report.residual_history);
    if (cfg.format == "csv") {
      if (solution.secondary_name.empty()) {
        emit_columns(out, {solution.output_name}, {&solution.primary_output});
      } else {
        emit_columns(out, {solution.output_name, solution.secondary_name},
                     {&solution.primary_output, &solution.secondary_output});
      }
    } else {
      emit(out, to_json(solution));
    }
    return kSuccess;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve and certify power-transformed affine systems x = (A x^s)^{1/s} + b", "pta"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string path;
  AppParams params;
  std::string model;

  const auto add_common = [&](CLI::App* sc) {
    sc->add_option("--tol", cfg.tol, "Relative residual tolerance in the y-domain");
    sc->add_option("--max-iters", cfg.max_iters, "Iteration budget");
    sc->add_option("--start", cfg.start, "Start rule")
        ->check(CLI::IsMember({"bracket_mid", "ones", "perron", "file"}));
    sc->add_option("--start-file", cfg.start_file,
                   "JSON start vector, or a previous solve report");
    sc->add_option("--seed", cfg.seed, "Seed for all randomness");
    sc->add_option("--trace", cfg.trace, "Write iter,residual_y CSV to this path");
    sc->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--trials", cfg.trials, "Trials per randomized probe");
  };

  std::string command;
  for (const char* name : {"check", "solve", "props"}) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("system", path, "System JSON file")->required();
    add_common(sc);
    sc->callback([&command, name] { command = name; });
  }
  app.get_subcommand("check")->description("Certify existence and uniqueness");
  app.get_subcommand("solve")->description("Compute the strictly positive solution");
  app.get_subcommand("props")->description("Run the property probes");

  auto* app_cmd = app.add_subcommand("app", "Solve one of the application models");
  app_cmd->require_subcommand(1);
  const auto add_model = [&](const char* name, const char* desc) {
    auto* sc = app_cmd->add_subcommand(name, desc);
    add_common(sc);
    sc->callback([&command, &model, name] {
      command = "app";
      model = name;
    });
    return sc;
  };
  auto* toda = add_model("toda", "State-dependent discounting consumption rule");
  toda->add_option("--beta", params.beta, "Discount factors (vector or scalar)");
  toda->add_option("--R", params.gross_return, "Gross returns (vector or scalar)");
  toda->add_option("--gamma", params.gamma, "Relative risk aversion gamma > 0");
  toda->add_option("--chain", params.chain, "Transition matrix");
  auto* ez = add_model("ez", "Epstein-Zin lifetime utility");
  ez->add_option("--beta", params.beta, "Discount factor in (0, 1)");
  ez->add_option("--rho", params.rho);
  ez->add_option("--alpha", params.alpha);
  ez->add_option("--c", params.consumption, "Consumption by state (vector or scalar)");
  ez->add_option("--chain", params.chain, "Transition matrix");
  auto* wc = add_model("wc", "Wealth-consumption ratio");
  wc->add_option("--beta", params.beta);
  wc->add_option("--s", params.s);
  wc->add_option("--Q", params.q, "Irreducible nonnegative operator");
  auto* ces = add_model("ces", "Multisector CES steady state");
  ces->add_option("--savings", params.savings);
  ces->add_option("--theta", params.theta);
  ces->add_option("--rho", params.rho);
  ces->add_option("--A", params.technology, "Irreducible technology matrix");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    emit(out, error_document(ErrorKind::ParseError, e.what()));
    err << e.what() << '\n';
    return kError;
  }

  if (command == "check") return cmd_check(path, cfg, out);
  if (command == "solve") return cmd_solve(path, cfg, out);
  if (command == "props") return cmd_props(path, cfg, out);
  if (command == "app") return cmd_app(model, params, cfg, out);
  err << "no command given\n";
  return kError;
}

}  // namespace pta::cli
