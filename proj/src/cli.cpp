#include "ttk/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ttk/colimit.hpp"
#include "ttk/stdlib.hpp"
#include "ttk/structure.hpp"
#include "ttk/text.hpp"

namespace ttk {

namespace {

int default_fuel() {
  if (const char* env = std::getenv("TTK_DEFAULT_FUEL")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 50;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KernelError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const TheoryBlock& pick_theory(const ParsedFile& file, const std::string& name) {
  if (file.theories.empty()) throw KernelError("file declares no theory");
  if (name.empty()) return file.theories.front();
  const TheoryBlock* b = file.theory(name);
  if (!b) throw KernelError("no theory named " + name + " in file");
  return *b;
}

TheoryMorphism find_morphism(const ParsedFile& file, const std::string& name,
                             NamedArtifact* stdlib_meta) {
  // Stored stdlib metadata (witness tables, notes) applies whenever the name
  // matches, even when the morphism itself comes from the file.
  for (const auto& n : stdlib_morphism_names())
    if (n == name && stdlib_meta) *stdlib_meta = stdlib_morphism(name);
  if (const TheoryMorphism* m = file.morphism(name)) return *m;
  if (stdlib_meta && stdlib_meta->morphism) return *stdlib_meta->morphism;
  throw KernelError("no morphism named " + name);
}

nlohmann::ordered_json term_json(const Term& t) { return print_term(t); }

int cmd_check(const std::string& path, Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  rep.verdict = "ok";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& block : file.theories) {
    ValidationReport vr = validate_theory(block.theory);
    nlohmann::ordered_json j;
    j["theory"] = block.theory.name;
    j["issues"] = nlohmann::ordered_json::array();
    for (const auto& issue : vr.issues) {
      nlohmann::ordered_json e;
      e["code"] = issue.code;
      e["position"] = issue.position;
      e["detail"] = issue.detail;
      j["issues"].push_back(e);
    }
    if (!vr.ok()) rep.verdict = "refuted";
    arr.push_back(j);
  }
  for (const auto& m : file.morphisms) {
    ValidationReport vr = validate_morphism(m);
    if (!vr.ok()) rep.verdict = "refuted";
  }
  rep.details["checked"] = arr;
  return rep.exit_code();
}

int cmd_prove(const std::string& path, const std::string& goal_name,
              const std::string& theory_name, int depth, int fuel, Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  const TheoryBlock& block = pick_theory(file, theory_name);
  const Sequent* goal = block.goal(goal_name);
  Theory th = block.theory;
  if (!goal) {
    const NamedAxiom* ax = block.theory.axiom(goal_name);
    if (!ax) throw KernelError("no goal or axiom named " + goal_name);
    goal = &ax->sequent;
  }
  rep.bounds["depth"] = depth;
  rep.bounds["fuel"] = fuel;
  ProveResult r = prove(th, *goal, depth, fuel);
  rep.verdict = r.certified() ? "ok" : "inconclusive";
  rep.details["goal"] = goal_name;
  rep.details["certified"] = r.certified();
  if (r.certified()) {
    auto sizes = nlohmann::ordered_json::array();
    for (const auto& t : r.trees) sizes.push_back(t->size());
    rep.details["tree_sizes"] = sizes;
  }
  return rep.exit_code();
}

int cmd_normalize(const std::string& path, const std::string& term_text,
                  const std::string& tel_name, const std::string& theory_name, int fuel,
                  Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  const TheoryBlock& block = pick_theory(file, theory_name);
  Telescope tel;
  if (!tel_name.empty()) {
    const Telescope* t = block.telescope(tel_name);
    if (!t) throw KernelError("no telescope named " + tel_name);
    tel = *t;
  }
  Term t = parse_term(term_text, block.theory, tel.var_list());
  SeparationCertificate cert = classify_separated(block.theory, 2);
  TRS trs = extract_directed(block.theory, cert);
  auto tel_rules = telescope_rules(tel, block.theory);
  ReductionTrace trace = normalize(trs, tel_rules, t, fuel);
  rep.bounds["fuel"] = fuel;
  rep.verdict = trace.fuel_exhausted ? "inconclusive" : "ok";
  rep.details["input"] = term_json(t);
  rep.details["normal_form"] = term_json(trace.end);
  rep.details["steps"] = trace.steps.size();
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json j;
    j["rule"] = s.rule_name;
    j["position"] = s.pos;
    j["result"] = term_json(s.result);
    steps.push_back(j);
  }
  rep.details["trace"] = steps;
  rep.details["replay_ok"] = replay(trs, tel_rules, trace);
  return rep.exit_code();
}

int cmd_confluence(const std::string& path, const std::string& tel_name,
                   const std::string& theory_name, int depth, int fuel, Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  const TheoryBlock& block = pick_theory(file, theory_name);
  Telescope tel;
  if (!tel_name.empty()) {
    const Telescope* t = block.telescope(tel_name);
    if (!t) throw KernelError("no telescope named " + tel_name);
    tel = *t;
  }
  SeparationCertificate cert = classify_separated(block.theory, 2);
  TRS trs = extract_directed(block.theory, cert);
  ConfluenceReport r = certify_confluent(block.theory, trs, tel, depth, fuel);
  rep.bounds["depth"] = depth;
  rep.bounds["fuel"] = fuel;
  switch (r.verdict) {
    case ConfluenceReport::Verdict::CertifiedAtBound: rep.verdict = "ok"; break;
    case ConfluenceReport::Verdict::Counterexample: rep.verdict = "refuted"; break;
    case ConfluenceReport::Verdict::Inconclusive: rep.verdict = "inconclusive"; break;
  }
  rep.details["verdict"] =
      r.verdict == ConfluenceReport::Verdict::CertifiedAtBound ? "certified-at-bound"
      : r.verdict == ConfluenceReport::Verdict::Counterexample ? "counterexample"
                                                               : "inconclusive";
  rep.details["checked_pairs"] = r.checked_pairs;
  rep.details["converse_checked"] = r.converse_checked;
  rep.details["converse_failed"] = r.converse_failed;
  rep.details["states"] = r.states;
  auto ces = nlohmann::ordered_json::array();
  for (const auto& ce : r.counterexamples) {
    nlohmann::ordered_json j;
    j["t"] = term_json(ce.t);
    j["s"] = term_json(ce.s);
    j["evidence"] = ce.evidence;
    ces.push_back(j);
  }
  rep.details["counterexamples"] = ces;
  for (const auto& n : r.notes) rep.details["notes"].push_back(n);
  return rep.exit_code();
}

int cmd_separated(const std::string& path, const std::string& theory_name, int bound,
                  Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  const TheoryBlock& block = pick_theory(file, theory_name);
  rep.bounds["bound"] = bound;
  try {
    SeparationCertificate cert = classify_separated(block.theory, bound);
    rep.verdict = cert.condition3.ok() ? "ok" : "inconclusive";
    auto ad = nlohmann::ordered_json::object();
    for (const auto& [sym, ax] : cert.a_d) ad[sym] = ax;
    rep.details["a_d"] = ad;
    rep.details["a_d_prime"] = cert.a_d_prime;
    rep.details["a_e"] = cert.a_e;
    rep.details["condition3_instances"] = cert.condition3.instances_checked;
    rep.details["condition3_violations"] = cert.condition3.violations;
  } catch (const NotSeparated& e) {
    rep.verdict = "refuted";
    rep.details["error"] = e.what();
  }
  return rep.exit_code();
}

int cmd_morita(const std::string& path, const std::string& morphism_name,
               const std::string& mode, int depth, int sub_depth, Report& rep) {
  ParsedFile file = parse_theory_file(slurp(path));
  NamedArtifact meta;
  TheoryMorphism m = find_morphism(file, morphism_name, &meta);
  rep.bounds["depth"] = depth;
  rep.details["morphism"] = morphism_name;
  rep.details["mode"] = mode;
  if (mode == "ext") {
    rep.bounds["sub_depth"] = sub_depth;
    // Extra axioms: target axioms that are not axioms of the source.
    std::vector<Sequent> extra;
    for (const auto& ax : m.target.axioms) {
      const NamedAxiom* s = m.source.axiom(ax.name);
      if (s && s->sequent == ax.sequent) continue;
      extra.push_back(ax.sequent);
    }
    auto tels = enumerate_telescopes(m.source, 2, sub_depth, 3);
    ExtMoritaReport r = check_ext_morita(m.source, extra, tels, sub_depth, depth);
    rep.verdict = r.ok() ? "ok" : "refuted";
    rep.details["telescopes"] = tels.size();
    rep.details["instances"] = r.instances_enumerated;
    rep.details["premises_satisfied"] = r.premises_satisfied;
    rep.details["failures"] = r.failures.size();
    return rep.exit_code();
  }
  if (mode == "cond1") {
    if (!meta.cond1)
      throw KernelError("no stored condition-1 witness table for " + morphism_name);
    Cond1Report r = check_cond1_witness(m, *meta.cond1, depth, false);
    rep.verdict = r.ok() ? "ok" : "inconclusive";
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : r.symbols) {
      nlohmann::ordered_json j;
      j["symbol"] = s.symbol;
      j["ok"] = s.ok();
      arr.push_back(j);
    }
    rep.details["symbols"] = arr;
    return rep.exit_code();
  }
  if (mode == "type-lift") {
    auto tels = enumerate_telescopes(m.source, 1, 2, 3);
    TypeLiftReport r =
        check_type_lifting(m, tels, default_type_lift_provider(m.source), depth);
    rep.verdict = r.ok() ? "ok" : "inconclusive";
    rep.details["pairs_enumerated"] = r.pairs_enumerated;
    rep.details["pairs_checked"] = r.pairs_checked;
    rep.details["failures"] = r.failures.size();
    return rep.exit_code();
  }
  if (mode == "instance") {
    if (morphism_name != "contr_to_unit")
      throw KernelError("no stored lifting instance for " + morphism_name);
    LiftingInstance inst;
    inst.morphism = m;
    inst.source_type = Term::app(*m.source.fun("C"), {});
    inst.target_term = Term::app(*m.target.fun("unit"), {});
    inst.candidate = Term::app(*m.source.fun("c0"), {});
    inst.homotopy = HomotopyWitness::term(
        Term::app(*m.target.fun("refl"), {Term::app(*m.target.fun("unit"), {})}));
    LiftingReport r = check_weak_lifting_instance(inst, depth);
    rep.verdict = r.overall() == Verdict3::Certified ? "ok" : "inconclusive";
    rep.details["type_defined"] = verdict_name(r.type_defined);
    rep.details["boundary_match"] = verdict_name(r.boundary_match);
    rep.details["candidate_boundary"] = verdict_name(r.candidate_boundary);
    rep.details["image_relation"] = verdict_name(r.image_relation);
    return rep.exit_code();
  }
  throw KernelError("unknown morita mode: " + mode);
}

// Standard telescopes shipped with the golden theory files: over the empty
// context for theories with nil, over the distinguished closed type where
// one exists.
std::vector<std::pair<std::string, Telescope>> standard_telescopes(const Theory& th) {
  std::vector<std::pair<std::string, Telescope>> out;
  auto closed_ty = [&](const char* name) -> std::optional<Term> {
    const FunSymbol* f = th.fun(name);
    if (!f || f->arity() != 0 || f->result_sort != make_ty(0)) return std::nullopt;
    return Term::app(*f, {});
  };
  if (const FunSymbol* nil = th.fun("nil"); nil && th.fun("Pi")) {
    Telescope t1;
    t1.entries.push_back(TelescopeEntry{"v1", make_ty(0), Term::app(*nil, {})});
    out.emplace_back("tele1", t1);
    Telescope t2 = t1;
    t2.entries.push_back(TelescopeEntry{"v2", make_tm(0), Term::var("v1", make_ty(0))});
    out.emplace_back("tele2", t2);
  }
  for (const char* base_ty : {"C", "Top"}) {
    if (auto ty = closed_ty(base_ty)) {
      Telescope t;
      t.entries.push_back(TelescopeEntry{"x1", make_tm(0), *ty});
      out.emplace_back("tele1", t);
      break;
    }
  }
  return out;
}

int cmd_stdlib_dump(const std::string& dir, Report& rep) {
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw KernelError("cannot write " + dir + "/" + name);
    out << text;
  };
  auto block_of = [&](const Theory& th) {
    TheoryBlock block;
    block.theory = th;
    for (auto& [n, t] : standard_telescopes(th)) block.telescopes.emplace_back(n, t);
    return block;
  };
  auto files = nlohmann::ordered_json::array();
  for (const auto& name : stdlib_theory_names()) {
    NamedArtifact art = stdlib_theory(name);
    ParsedFile file;
    file.theories.push_back(block_of(*art.theory));
    write(name + ".th", print_theory_file(file));
    files.push_back(name + ".th");
  }
  const std::vector<std::pair<std::string, std::string>> morphism_files = {
      {"pi_incl", "pi"},
      {"pi2_incl", "pi2"},
      {"pi_iso", "pi_iso"},
      {"contr_to_unit", "contr_to_unit"}};
  for (const auto& [mname, fname] : morphism_files) {
    NamedArtifact art = stdlib_morphism(mname);
    ParsedFile file;
    file.theories.push_back(block_of(art.morphism->source));
    file.theories.push_back(block_of(art.morphism->target));
    file.morphisms.push_back(*art.morphism);
    write(fname + ".th", print_theory_file(file));
    files.push_back(fname + ".th");
  }
  rep.verdict = "ok";
  rep.details["written"] = files;
  return rep.exit_code();
}

int cmd_colimit(const std::vector<std::string>& paths, Report& rep) {
  TheoryDiagram diagram;
  diagram.base = *stdlib_theory("base").theory;
  for (const auto& p : paths) {
    ParsedFile file = parse_theory_file(slurp(p));
    if (file.theories.empty()) throw KernelError("file declares no theory: " + p);
    diagram.nodes.push_back(file.theories.front().theory);
  }
  ColimitResult r = theory_colimit(diagram);
  rep.verdict = "ok";
  ParsedFile out;
  TheoryBlock block;
  block.theory = r.theory;
  out.theories.push_back(std::move(block));
  rep.details["theory"] = print_theory_file(out);
  auto renames = nlohmann::ordered_json::array();
  for (const auto& [key, fresh] : r.renamed) {
    nlohmann::ordered_json j;
    j["node"] = key.first;
    j["name"] = key.second;
    j["renamed_to"] = fresh;
    renames.push_back(j);
  }
  rep.details["renamed"] = renames;
  return rep.exit_code();
}

}  // namespace

int run_command(const std::vector<std::string>& argv, Report& report,
                std::string& error_stream) {
  CLI::App app{"partial Horn theory kernel for algebraic dependent type theories"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

  std::string file, theory_name, goal, term_text, tel_name, morphism, mode = "ext";
  std::vector<std::string> files;
  int depth = 3, fuel = default_fuel(), bound = 3, sub_depth = 2;

  CLI::App* check = app.add_subcommand("check", "parse and validate a theory file");
  check->add_option("file", file)->required();
  check->add_option("--theory", theory_name);

  CLI::App* prove_cmd = app.add_subcommand("prove", "prove a goal or axiom");
  prove_cmd->add_option("file", file)->required();
  prove_cmd->add_option("--goal,--axiom-or-goal", goal)->required();
  prove_cmd->add_option("--theory", theory_name);
  prove_cmd->add_option("--depth", depth);
  prove_cmd->add_option("--fuel", fuel);

  CLI::App* norm = app.add_subcommand("normalize", "normalize a term");
  norm->add_option("file", file)->required();
  norm->add_option("--term", term_text)->required();
  norm->add_option("--telescope", tel_name);
  norm->add_option("--theory", theory_name);
  norm->add_option("--fuel", fuel);

  CLI::App* conf = app.add_subcommand("confluence", "bounded confluence certification");
  conf->add_option("file", file)->required();
  conf->add_option("--telescope", tel_name);
  conf->add_option("--theory", theory_name);
  conf->add_option("--depth", depth);
  conf->add_option("--fuel", fuel);

  CLI::App* sep = app.add_subcommand("separated", "separated-axiom classification");
  sep->add_option("file", file)->required();
  sep->add_option("--theory", theory_name);
  sep->add_option("--bound", bound);

  CLI::App* morita = app.add_subcommand("morita", "Morita equivalence checkers");
  morita->add_option("file", file)->required();
  morita->add_option("--morphism", morphism)->required();
  morita->add_option("--mode", mode)
      ->check(CLI::IsMember({"ext", "cond1", "type-lift", "instance"}));
  morita->add_option("--depth", depth);
  morita->add_option("--sub-depth", sub_depth);

  CLI::App* colim = app.add_subcommand("colimit", "coproduct of theory files");
  colim->add_option("files", files)->required()->expected(-1);

  std::string dump_dir = ".";
  CLI::App* dump = app.add_subcommand("stdlib-dump", "write the stdlib golden files");
  dump->add_option("--dir", dump_dir);

  for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; }))
    sc->fallthrough();
  try {
    std::vector<std::string> args = argv;  // CLI11 consumes the vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    error_stream = e.what();
    report.command = "usage";
    report.verdict = "error";
    report.details["error"] = e.what();
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = 2;
  try {
    if (check->parsed()) {
      report.command = "check";
      code = cmd_check(file, report);
    } else if (prove_cmd->parsed()) {
      report.command = "prove";
      code = cmd_prove(file, goal, theory_name, depth, fuel, report);
    } else if (norm->parsed()) {
      report.command = "normalize";
      code = cmd_normalize(file, term_text, tel_name, theory_name, fuel, report);
    } else if (conf->parsed()) {
      report.command = "confluence";
      code = cmd_confluence(file, tel_name, theory_name, depth, fuel, report);
    } else if (sep->parsed()) {
      report.command = "separated";
      code = cmd_separated(file, theory_name, bound, report);
    } else if (morita->parsed()) {
      report.command = "morita";
      code = cmd_morita(file, morphism, mode, depth, sub_depth, report);
    } else if (colim->parsed()) {
      report.command = "colimit";
      code = cmd_colimit(files, report);
    } else if (dump->parsed()) {
      report.command = "stdlib-dump";
      code = cmd_stdlib_dump(dump_dir, report);
    }
  } catch (const SyntaxError& e) {
    report.verdict = "error";
    report.details["error"] = e.what();
    report.details["line"] = e.line;
    report.details["col"] = e.col;
    error_stream = e.what();
    code = 2;
  } catch (const DuplicateName& e) {
    report.verdict = "error";
    report.details["error"] = e.what();
    report.details["line"] = e.line;
    error_stream = e.what();
    code = 2;
  } catch (const UnknownSort& e) {
    report.verdict = "error";
    report.details["error"] = e.what();
    report.details["line"] = e.line;
    error_stream = e.what();
    code = 2;
  } catch (const std::exception& e) {
    report.verdict = "error";
    report.details["error"] = e.what();
    error_stream = e.what();
    code = 2;
  }
  auto t1 = std::chrono::steady_clock::now();
  report.timing_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return code;
}

}  // namespace ttk
