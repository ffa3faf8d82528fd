#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "poly/bounds.hpp"
#include "poly/engine.hpp"
#include "poly/frontend.hpp"
#include "poly/interp.hpp"
#include "poly/structure.hpp"
#include "poly/tmc.hpp"

using namespace poly;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCertification = 3;
constexpr int kExitFuel = 4;
constexpr int kExitBound = 5;

Polygraph load_program(const std::string& path) { return elaborate(parse_program_file(path)); }

std::vector<TermP> parse_args(const Polygraph& P, CellId f, const std::vector<std::string>& raw) {
  const TwoCell& fc = P.cell(f);
  if (raw.size() != static_cast<size_t>(fc.arity()))
    throw ArityError("`" + fc.name + "` expects " + std::to_string(fc.arity()) + " arguments, got " +
                     std::to_string(raw.size()));
  std::vector<TermP> args;
  for (size_t i = 0; i < raw.size(); ++i) args.push_back(parse_value_literal(P, raw[i], fc.src[i]));
  return args;
}

int cmd_check(const std::string& path, int depth) {
  Polygraph P = load_program(path);
  ValidationReport rep = validate_polygraph(P);
  if (!rep.ok()) {
    std::cout << rep.to_string();
    return kExitValidation;
  }
  auto orth = check_orthogonal(P);
  auto comp = check_completeness(P, depth);
  std::cout << "cells: " << P.one_cells.size() << " sorts, " << P.two_cells.size() << " 2-cells, "
            << P.three_cells.size() << " 3-cells\n";
  std::cout << "validation: OK\n";
  std::cout << "orthogonal: " << (orth.orthogonal() ? "yes" : "NO") << "\n";
  for (const auto& o : orth.overlaps)
    std::cout << "  overlap: " << o.rule1 << "  ~  " << o.rule2 << (o.weak ? "  (weak, equal right sides)" : "")
              << "\n";
  std::cout << "complete at depth " << depth << ": " << (comp.complete() ? "yes" : "NO") << " (" << comp.checked
            << " value tuples)\n";
  if (!comp.complete()) {
    for (size_t i = 0; i < comp.gaps.size() && i < 5; ++i) {
      std::cout << "  no rule for: " << comp.gaps[i].function << "(";
      for (size_t k = 0; k < comp.gaps[i].args.size(); ++k)
        std::cout << (k ? ", " : "") << term_str(comp.gaps[i].args[k]);
      std::cout << ")\n";
    }
  }
  return (orth.orthogonal() && comp.complete()) ? 0 : kExitValidation;
}

int cmd_run(const std::string& path, const std::string& fn, const std::vector<std::string>& raw,
            const std::string& trace_out, const std::string& strategy, size_t fuel) {
  Polygraph P = load_program(path);
  CellId f = P.two_id(fn);
  auto args = parse_args(P, f, raw);
  Strategy st = strategy == "structure-eager" ? Strategy::StructureEager : Strategy::LeftmostTopmost;
  EvalResult r = evaluate(P, f, args, st, fuel);
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    out << trace_to_jsonl(r.trace);
  }
  if (r.status == EvalStatus::FuelExhausted) {
    std::cerr << "fuel exhausted after " << r.trace.total() << " events\n";
    return kExitFuel;
  }
  if (r.status == EvalStatus::Undefined) {
    std::cerr << "undefined: normal form is not a value\n";
    return kExitValidation;
  }
  for (size_t i = 0; i < r.outputs.size(); ++i) std::cout << (i ? " " : "") << pretty_term(P, r.outputs[i]);
  std::cout << "\n";
  return 0;
}

int cmd_certify(const std::string& path, const std::string& ipath, long long B, int depth, bool json, bool serial) {
  Polygraph P = load_program(path);
  Interp it = parse_interp_file(P, ipath);
  Certificate cert = certify(P, it, B, depth, !serial);
  std::cout << (json ? cert.to_json() : cert.to_text());
  if (!json) std::cout.flush();
  return cert.member() ? 0 : kExitCertification;
}

int cmd_bounds(const std::string& path, const std::string& ipath, const std::string& fn,
               const std::vector<std::string>& raw, bool json) {
  Polygraph P = load_program(path);
  Interp it = parse_interp_file(P, ipath);
  BoundSet bs = compute_bounds(P, it);
  CellId f = P.two_id(fn);
  const TwoCell& fc = P.cell(f);
  const FunctionBounds& fb = bs.per_function.at(f);
  std::vector<std::string> vars;
  for (int i = 0; i < fc.arity(); ++i) vars.push_back("x" + std::to_string(i + 1));

  nlohmann::json j;
  j["gamma"] = bs.gamma;
  j["K"] = bs.bigK;
  j["function"] = fc.name;
  j["M"] = expr_str(fb.M, vars);
  j["S"] = expr_str(fb.S, vars);
  j["P"] = expr_str(fb.P, vars);
  j["Q"] = expr_str(fb.Q, vars);
  if (!json) {
    std::cout << "gamma = " << bs.gamma << ", K = " << bs.bigK << "\n";
    std::cout << fc.name << ":\n  M = " << j["M"].get<std::string>() << "\n  S = " << j["S"].get<std::string>()
              << "\n  P = " << j["P"].get<std::string>() << "\n  Q = " << j["Q"].get<std::string>() << "\n";
  }

  bool violated = false;
  nlohmann::json rows = nlohmann::json::array();
  if (!raw.empty() && raw.size() % static_cast<size_t>(std::max(1, fc.arity())) != 0)
    throw ArityError("argument count not a multiple of the function arity");
  TraceSampler sampler = make_sampler(it);
  for (size_t off = 0; off + fc.arity() <= raw.size(); off += static_cast<size_t>(std::max(1, fc.arity()))) {
    std::vector<std::string> chunk(raw.begin() + off, raw.begin() + off + fc.arity());
    auto args = parse_args(P, f, chunk);
    EvalResult r = evaluate(P, f, args, Strategy::LeftmostTopmost, 10'000'000, &sampler);
    if (r.status != EvalStatus::Value) throw PolyError("evaluation did not reach a value");
    MonitorReport rep = monitor_trace(P, it, r.trace, f, args, bs);
    auto sizes = nu_of(P, args);
    nlohmann::json row;
    row["input"] = chunk;
    row["nu"] = sizes;
    row["computation_steps"] = r.trace.computation();
    row["total_steps"] = r.trace.total();
    row["P_bound"] = eval_bound(it, fb.P, fc.src, sizes);
    row["Q_bound"] = eval_bound(it, fb.Q, fc.src, sizes);
    row["M_bound"] = eval_bound(it, fb.M, fc.src, sizes);
    row["ok"] = rep.ok();
    rows.push_back(row);
    if (!json) {
      std::cout << "input";
      for (const auto& c : chunk) std::cout << " " << c;
      std::cout << ": nu=(";
      for (size_t i = 0; i < sizes.size(); ++i) std::cout << (i ? "," : "") << sizes[i];
      std::cout << ")  computation " << r.trace.computation() << " <= " << row["P_bound"] << "  total "
                << r.trace.total() << " <= " << row["Q_bound"] << (rep.ok() ? "" : "  VIOLATION") << "\n";
      if (!rep.ok()) std::cout << rep.to_string();
    }
    violated = violated || !rep.ok();
  }
  j["runs"] = rows;
  if (json) std::cout << j.dump(2) << "\n";
  return violated ? kExitBound : 0;
}

int cmd_compile_tm(const std::string& tm_path, const std::string& out_prefix, const std::string& clock) {
  TuringMachine M = parse_tm_file(tm_path);
  if (clock.empty()) {
    ProgramAST ast = compile_tm_ast(M);
    std::ofstream out(out_prefix + ".poly");
    out << program_to_text(ast);
    std::cout << "wrote " << out_prefix << ".poly (" << ast.rules.size() << " rules)\n";
    return 0;
  }
  ClockedCompile cc = compile_clocked_tm(M, parse_poly(clock));
  {
    std::ofstream out(out_prefix + ".poly");
    out << program_to_text(cc.ast);
  }
  {
    std::ofstream out(out_prefix + ".interp");
    out << cc.interp_text;
  }
  std::cout << "wrote " << out_prefix << ".poly (" << cc.ast.rules.size() << " rules) and " << out_prefix
            << ".interp\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polygraphic programs: evaluation, certification, bounds"};
  app.require_subcommand(1);

  std::string prog, ipath, fn, trace_out, strategy = "leftmost", tm_path, out_prefix, clock;
  std::vector<std::string> raw;
  int depth = 4;
  long long B = 64;
  size_t fuel = 10'000'000;
  bool json = false, serial = false;

  auto* check = app.add_subcommand("check", "validate, orthogonality, completeness");
  check->add_option("program", prog)->required();
  check->add_option("--depth", depth);

  auto* run = app.add_subcommand("run", "evaluate a function on values");
  run->add_option("program", prog)->required();
  run->add_option("function", fn)->required();
  run->allow_extras();
  run->add_option("--trace", trace_out);
  run->add_option("--strategy", strategy)->check(CLI::IsMember({"leftmost", "structure-eager"}));
  run->add_option("--fuel", fuel);

  auto* cert = app.add_subcommand("certify", "check a polygraphic interpretation");
  cert->add_option("program", prog)->required();
  cert->add_option("interp", ipath)->required();
  cert->add_option("--bound", B);
  cert->add_option("--depth", depth);
  cert->add_flag("--json", json);
  cert->add_flag("--serial", serial);

  auto* bounds = app.add_subcommand("bounds", "bound maps and trace monitoring");
  bounds->add_option("program", prog)->required();
  bounds->add_option("interp", ipath)->required();
  bounds->add_option("function", fn)->required();
  bounds->allow_extras();
  bounds->add_flag("--json", json);

  auto* ctm = app.add_subcommand("compile-tm", "compile a Turing machine to a program");
  ctm->add_option("machine", tm_path)->required();
  ctm->add_option("out_prefix", out_prefix)->required();
  ctm->add_option("--clock", clock);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(prog, depth);
    if (run->parsed()) return cmd_run(prog, fn, run->remaining(), trace_out, strategy, fuel);
    if (cert->parsed()) return cmd_certify(prog, ipath, B, depth, json, serial);
    if (bounds->parsed()) return cmd_bounds(prog, ipath, fn, bounds->remaining(), json);
    if (ctm->parsed()) return cmd_compile_tm(tm_path, out_prefix, clock);
  } catch (const FuelExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFuel;
  } catch (const BoundViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
