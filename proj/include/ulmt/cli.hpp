#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ulmt/io.hpp"
#include "ulmt/random.hpp"

namespace ulmt {

/// Exit statuses of run_command.
enum exit_status : int { exit_yes = 0, exit_no = 1, exit_usage = 2 };

namespace cli {

struct Options {
  std::vector<std::string> space;  // chain files or built-in names
  std::vector<std::string> chains; // extra chain files for models
  std::size_t max_domain = 2;
  std::uint64_t max_candidates = 1'000'000;
  int depth = 1;
  std::size_t kappa = 1;
  std::size_t subset_cap = kDefaultSubsetCap;
  std::size_t type_size_cap = kDefaultTypeSizeCap;
  std::string vars = "x";
  unsigned jobs = 1;
  std::string format = "text";
  std::string out_file;

  std::vector<std::string> inputs;  // positional files
  std::string model, small, large, tableau, type, theory, models, formulas, pairs;
  std::string formula, premises, assign, params, constants;

  std::uint64_t seed = 1;
  std::string kind = "formula";
  std::size_t count = 10;
  std::size_t atoms = 3;
};

/// Output in one of two shapes: readable text, or `key=value` records.
class Report {
 public:
  Report(std::ostream& out, bool machine) : out_(out), machine_(machine) {}

  void field(const std::string& key, const std::string& value) {
    if (machine_)
      out_ << key << '=' << value << '\n';
    else
      out_ << key << ": " << value << '\n';
  }
  void field(const std::string& key, bool value) { field(key, std::string(value ? "true" : "false")); }
  template <class N>
    requires std::is_arithmetic_v<N>
  void field(const std::string& key, N value) {
    field(key, std::to_string(value));
  }

  /// A multi-line block in a file format; machine mode emits one record per line.
  void block(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    if (!machine_) out_ << key << ":\n";
    for (std::string line; std::getline(in, line);) {
      if (machine_)
        out_ << key << '=' << line << '\n';
      else
        out_ << "  " << line << '\n';
    }
  }

  std::ostream& raw() { return out_; }
  bool machine() const { return machine_; }

 private:
  std::ostream& out_;
  bool machine_;
};

inline std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

inline std::string formulas_text(const std::vector<Formula>& fs) {
  return render([&](std::ostream& o) { write_formulas(o, fs); });
}

inline std::string evaluation_text(const Structure& s, const Evaluation& v) {
  std::string out;
  for (const auto& [var, e] : v.bindings()) out += var + " = " + s.domain()[e] + "\n";
  return out;
}

class Context {
 public:
  Context(Options& opt, std::ostream& out) : opt_(opt), report_(out, opt.format == "machine") {}

  Options& opt() { return opt_; }
  Report& report() { return report_; }

  ChainRegistry& registry() {
    if (!chains_loaded_) {
      for (const auto& c : opt_.chains) registry_.load(c);
      for (const auto& c : opt_.space)
        if (std::filesystem::is_regular_file(c)) registry_.load(c);
      chains_loaded_ = true;
    }
    return registry_;
  }

  SearchSpace space() {
    if (opt_.space.empty()) throw CLI::ValidationError("--space", "this command needs --space");
    std::vector<std::shared_ptr<const UlChain>> chains;
    for (const auto& c : opt_.space) chains.push_back(registry().load(c));
    return SearchSpace(std::move(chains), opt_.max_domain, opt_.max_candidates, opt_.jobs);
  }

  FormulaBounds bounds() const {
    FormulaBounds b;
    b.depth = opt_.depth;
    b.vars = split_words(opt_.vars);
    b.workers = opt_.jobs;
    return b;
  }

  Structure load_model_file(const std::string& path) { return load_model(path, registry()); }

  Formula parse(const std::string& text) { return parse_formula_extending(text, sig_); }
  std::vector<Formula> parse_list(const std::string& text) {
    std::vector<Formula> out;
    for (const auto& part : split_formula_list(text)) out.push_back(parse(part));
    return out;
  }
  Signature& signature() { return sig_; }
  void seed_signature(const Signature& s) { sig_.merge(s); }

  /// Writes a witness model to --out when given.
  void save_model(const Structure& s) {
    if (opt_.out_file.empty()) return;
    std::ofstream f(opt_.out_file);
    if (!f) throw error(errc::io_error, "cannot write '" + opt_.out_file + "'");
    write_model(f, s);
  }

 private:
  Options& opt_;
  Report report_;
  ChainRegistry registry_;
  bool chains_loaded_ = false;
  Signature sig_;
};

inline void print_interpretation(Context& ctx, const std::string& key, const Interpretation& m) {
  ctx.report().block(key, render([&](std::ostream& o) { write_model(o, m.structure); }));
  if (!m.evaluation.empty()) ctx.report().block("evaluation", evaluation_text(m.structure, m.evaluation));
  ctx.save_model(m.structure);
}

inline void print_mismatch(Context& ctx, const ValueMismatch& m) {
  ctx.report().field("counterexample", to_string(m.formula));
  std::string assignment;
  for (std::size_t i = 0; i < m.vars.size(); ++i) assignment += (i ? ", " : "") + m.vars[i] + "=" + m.assignment[i];
  ctx.report().field("assignment", assignment.empty() ? std::string("-") : assignment);
  ctx.report().field("value_small", m.small_value);
  ctx.report().field("value_large", m.large_value);
}

// ---------------------------------------------------------------------------
// Commands. Each returns an exit status.

inline int cmd_verify_algebra(Context& ctx) {
  bool all = true;
  std::vector<std::string> specs = ctx.opt().inputs;
  specs.insert(specs.end(), ctx.opt().space.begin(), ctx.opt().space.end());
  if (specs.empty()) throw CLI::ValidationError("verify-algebra", "give at least one chain file or name");
  for (const auto& spec : specs) {
    const UlChain chain = std::filesystem::is_regular_file(spec) ? load_chain(spec) : *ctx.registry().resolve(spec);
    const auto report = verify_ul_axioms(chain);
    ctx.report().field("chain", chain.name());
    for (const auto& c : report.checks) {
      std::string line = c.passed ? "pass" : "FAIL";
      if (!c.passed) {
        line += " witness";
        for (Degree d : c.witness) line += " " + std::to_string(d);
        if (!c.detail.empty()) line += " (" + c.detail + ")";
      }
      ctx.report().field(c.axiom, line);
    }
    all = all && report.all_passed();
  }
  ctx.report().field("verdict", all);
  return all ? exit_yes : exit_no;
}

inline int cmd_eval(Context& ctx) {
  const Structure s = ctx.load_model_file(ctx.opt().model);
  ctx.seed_signature(s.signature());
  const Formula f = ctx.parse(ctx.opt().formula);
  Evaluation v;
  for (const auto& item : split_words(ctx.opt().assign)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--assign", "expected var=element, got '" + item + "'");
    v.set(item.substr(0, eq), s.require_element(item.substr(eq + 1)));
  }
  const Degree value = eval_formula(s, v, f);
  ctx.report().field("formula", to_string(f));
  ctx.report().field("value", value);
  ctx.report().field("designated", s.chain().designated(value));
  return exit_yes;
}

inline int cmd_check_model(Context& ctx) {
  const Structure s = ctx.load_model_file(ctx.opt().model);
  ctx.seed_signature(s.signature());
  std::vector<Formula> theory;
  if (!ctx.opt().theory.empty()) theory = load_theory(ctx.opt().theory, ctx.signature());
  if (!ctx.opt().formula.empty()) {
    auto extra = ctx.parse_list(ctx.opt().formula);
    theory.insert(theory.end(), extra.begin(), extra.end());
  }
  for (const auto& f : theory) {
    const Degree v = eval_sentence(s, f);
    if (!s.chain().designated(v)) {
      ctx.report().field("model", false);
      ctx.report().field("failing_sentence", to_string(f));
      ctx.report().field("value", v);
      return exit_no;
    }
  }
  ctx.report().field("model", true);
  return exit_yes;
}

inline int cmd_entails(Context& ctx) {
  const auto space = ctx.space();
  const auto premises = ctx.parse_list(ctx.opt().premises);
  const Formula goal = ctx.parse(ctx.opt().formula);
  const auto cm = find_countermodel(space, premises, goal);
  ctx.report().field("entails", !cm.has_value());
  if (cm) print_interpretation(ctx, "countermodel", *cm);
  return cm ? exit_no : exit_yes;
}

inline Tableau load_cli_tableau(Context& ctx) {
  if (ctx.opt().tableau.empty()) throw CLI::ValidationError("--tableau", "a tableau file is required");
  return load_tableau(ctx.opt().tableau, ctx.signature());
}

inline int cmd_find_model(Context& ctx) {
  const auto space = ctx.space();
  const Tableau t = load_cli_tableau(ctx);
  const auto m = find_satisfying_model(space, t);
  if (!m) {
    ctx.report().field("result", std::string("unsatisfiable"));
    return exit_no;
  }
  ctx.report().field("result", std::string("satisfiable"));
  print_interpretation(ctx, "model", *m);
  return exit_yes;
}

inline int cmd_consistent(Context& ctx) {
  const auto space = ctx.space();
  const Tableau t = load_cli_tableau(ctx);
  const auto w = find_inconsistency_witness(space, t, ctx.opt().subset_cap);
  ctx.report().field("consistent", !w.has_value());
  if (w) ctx.report().block("entailed_join_of", formulas_text(*w));
  return w ? exit_no : exit_yes;
}

inline int cmd_finite_character(Context& ctx) {
  const auto space = ctx.space();
  const Tableau t = load_cli_tableau(ctx);
  const auto r = check_finite_character(space, t, ctx.opt().subset_cap);
  ctx.report().field("all_subtableaux_satisfiable", r.all_subtableaux_satisfiable);
  ctx.report().field("satisfiable", r.satisfiable);
  ctx.report().field("consistent", r.consistent);
  ctx.report().field("finite_character", r.finite_character_holds());
  ctx.report().field("model_existence", r.model_existence_holds());
  if (r.unsatisfiable_subtableau)
    ctx.report().block("unsatisfiable_subtableau", render([&](std::ostream& o) { write_tableau(o, *r.unsatisfiable_subtableau); }));
  return r.finite_character_holds() && r.model_existence_holds() ? exit_yes : exit_no;
}

inline int cmd_henkin(Context& ctx) {
  const auto space = ctx.space();
  const Tableau t = load_cli_tableau(ctx);
  std::vector<Formula> formulas;
  if (!ctx.opt().formulas.empty()) formulas = load_theory(ctx.opt().formulas, ctx.signature());
  std::vector<std::pair<Formula, Formula>> pairs;
  if (!ctx.opt().pairs.empty()) {
    auto in = detail::open_input(ctx.opt().pairs);
    for (const auto& line : detail::content_lines(in)) {
      const auto parts = split_formula_list(line.text);
      if (parts.size() != 2)
        throw error(errc::syntax_error, ctx.opt().pairs + ":" + std::to_string(line.number) + ": expected 'theta, psi'");
      pairs.emplace_back(ctx.parse(parts[0]), ctx.parse(parts[1]));
    }
  }
  const auto r = henkin_complete(space, t, split_words(ctx.opt().constants), formulas, pairs, ctx.opt().subset_cap);
  for (const auto& stage : r.stages)
    ctx.report().field("stage " + std::to_string(stage.number), stage.action);
  ctx.report().block("tableau", render([&](std::ostream& o) { write_tableau(o, r.tableau); }));
  return exit_yes;
}

inline int cmd_substructure(Context& ctx) {
  const Structure a = ctx.load_model_file(ctx.opt().small);
  const Structure b = ctx.load_model_file(ctx.opt().large);
  const auto r = check_substructure(a, b, std::max(ctx.opt().depth, 0), ctx.bounds().vars);
  ctx.report().field("domain_included", r.domain_included);
  ctx.report().field("functions_agree", r.functions_agree);
  ctx.report().field("chain_embeds", r.chain_embeds);
  ctx.report().field("atoms_agree", r.atoms_agree);
  ctx.report().field("quantifier_free_agree", r.qf_agree);
  ctx.report().field("substructure", r.holds());
  if (!r.holds()) ctx.report().field("reason", r.failure);
  return r.holds() ? exit_yes : exit_no;
}

inline int cmd_elementary(Context& ctx) {
  const Structure a = ctx.load_model_file(ctx.opt().small);
  const Structure b = ctx.load_model_file(ctx.opt().large);
  const auto r = check_elementary_substructure(a, b, ctx.bounds());
  ctx.report().field("depth", r.depth);
  ctx.report().field("substructure", r.substructure);
  ctx.report().field("formulas_checked", r.formulas_checked);
  ctx.report().field("elementary", r.holds());
  if (!r.substructure) ctx.report().field("reason", r.failure);
  if (r.counterexample) print_mismatch(ctx, *r.counterexample);
  return r.holds() ? exit_yes : exit_no;
}

inline int cmd_union(Context& ctx) {
  const auto links = load_model_chain(ctx.opt().models, ctx.registry());
  const Structure u = union_of_chain(links);
  ctx.report().block("union", render([&](std::ostream& o) { write_model(o, u); }));
  ctx.save_model(u);
  return exit_yes;
}

inline int cmd_tarski_vaught(Context& ctx) {
  const auto links = load_model_chain(ctx.opt().models, ctx.registry());
  const auto r = check_union_preservation(links, ctx.bounds());
  ctx.report().field("depth", r.depth);
  ctx.report().field("precondition_verified", r.precondition_verified);
  if (r.precondition_failure)
    ctx.report().field("precondition_failure", "links " + std::to_string(*r.precondition_failure) + " and " +
                                                   std::to_string(*r.precondition_failure + 1));
  ctx.report().field("preserved", r.holds());
  if (r.counterexample) {
    ctx.report().field("link", *r.counterexample_link);
    print_mismatch(ctx, *r.counterexample);
  }
  return r.holds() ? exit_yes : exit_no;
}

inline int cmd_exhaustive(Context& ctx) {
  const Structure s = ctx.load_model_file(ctx.opt().model);
  const auto r = check_exhaustive(s, ctx.bounds());
  ctx.report().field("depth", r.depth);
  for (std::size_t v = 0; v < r.witness.size(); ++v)
    ctx.report().field("value " + std::to_string(v), r.witness[v] ? to_string(*r.witness[v]) : std::string("-"));
  ctx.report().field("exhaustive", r.exhaustive());
  return r.exhaustive() ? exit_yes : exit_no;
}

inline int cmd_theory(Context& ctx) {
  const Structure s = ctx.load_model_file(ctx.opt().model);
  const auto params = ctx.opt().params == "*" ? s.domain() : split_words(ctx.opt().params);
  const auto th = theory_of(s, params, ctx.bounds());
  ctx.report().field("depth", ctx.opt().depth);
  ctx.report().field("theory_size", th.theory.size());
  ctx.report().field("co_theory_size", th.co_theory.size());
  ctx.report().block("theory", formulas_text(th.theory));
  ctx.report().block("co_theory", formulas_text(th.co_theory));
  return exit_yes;
}

inline TypePair load_cli_type(Context& ctx) {
  if (ctx.opt().type.empty()) throw CLI::ValidationError("--type", "a type file is required");
  return load_type(ctx.opt().type, ctx.signature());
}

inline int cmd_is_type(Context& ctx) {
  const auto space = ctx.space();
  const Tableau t = ctx.opt().tableau.empty() ? Tableau{} : load_cli_tableau(ctx);
  const TypePair p = load_cli_type(ctx);
  const bool ok = is_type_of_tableau(space, t, p);
  ctx.report().field("type", ok);
  return ok ? exit_yes : exit_no;
}

inline int cmd_realize(Context& ctx) {
  const Structure s = ctx.load_model_file(ctx.opt().model);
  ctx.seed_signature(s.signature());
  const TypePair p = load_cli_type(ctx);
  const auto m = find_realizer(s, p);
  ctx.report().field("realized", m.has_value());
  if (m) ctx.report().field("element", s.domain()[*m]);
  return m ? exit_yes : exit_no;
}

inline int cmd_saturated(Context& ctx) {
  const auto space = ctx.space();
  const Structure s = ctx.load_model_file(ctx.opt().model);
  const auto r = check_saturated(s, ctx.opt().kappa, ctx.bounds(), space, ctx.opt().type_size_cap);
  ctx.report().field("kappa", r.kappa);
  ctx.report().field("depth", r.depth);
  ctx.report().field("type_size_cap", r.type_size_cap);
  ctx.report().field("cap_limited", r.cap_limited);
  ctx.report().field("saturated", r.saturated);
  if (r.witness) {
    std::string params;
    for (const auto& d : *r.witness_parameters) params += (params.empty() ? "" : " ") + d;
    ctx.report().field("parameters", params.empty() ? std::string("-") : params);
    ctx.report().block("unrealized_type", render([&](std::ostream& o) { write_type(o, *r.witness); }));
    ctx.report().field("witness_confirmed", r.witness_confirmed);
  }
  return r.saturated ? exit_yes : exit_no;
}

inline int cmd_saturate_step(Context& ctx) {
  const auto space = ctx.space();
  const Structure s = ctx.load_model_file(ctx.opt().model);
  ctx.seed_signature(s.signature());
  const TypePair p = load_cli_type(ctx);
  try {
    const auto step = saturate_step(s, p, space, ctx.bounds());
    ctx.report().field("result", std::string(step.in_place ? "realized-in-place" : "extended"));
    ctx.report().field("realizer", step.model.domain()[step.realizer]);
    ctx.report().block("model", render([&](std::ostream& o) { write_model(o, step.model); }));
    ctx.save_model(step.model);
    return exit_yes;
  } catch (const error& e) {
    if (e.code() != errc::not_a_type && e.code() != errc::bounds_exhausted) throw;
    ctx.report().field("result", std::string(to_string(e.code())));
    return exit_no;
  }
}

inline int cmd_generate(Context& ctx) {
  std::mt19937_64 rng(ctx.opt().seed);
  FormulaGenerator gen;
  for (std::size_t i = 0; i < ctx.opt().atoms; ++i) gen.propositions.push_back(std::string(1, static_cast<char>('p' + i % 5)) + (i >= 5 ? std::to_string(i / 5) : ""));
  if (ctx.opt().kind == "formula") {
    for (std::size_t i = 0; i < ctx.opt().count; ++i) ctx.report().field("formula", to_string(gen(rng, ctx.opt().depth)));
  } else if (ctx.opt().kind == "tableau") {
    for (std::size_t i = 0; i < ctx.opt().count; ++i) {
      const Tableau t = random_tableau(rng, gen, 3, 3, ctx.opt().depth);
      ctx.report().block("tableau " + std::to_string(i), render([&](std::ostream& o) { write_tableau(o, t); }));
    }
  } else {
    throw CLI::ValidationError("--kind", "expected formula or tableau");
  }
  return exit_yes;
}

}  // namespace cli

/**
 * Runs one command line (without the program name). Exit status: 0 for an
 * affirmative verdict, 1 for a negative one, 2 for usage, input or resource
 * errors.
 */
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  Options opt;
  CLI::App app{"Graded first-order model theory over finite UL-chains", "ulmt"};
  app.require_subcommand(1);
  app.fallthrough();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--space", opt.space, "Chain files or built-in names (L<n>, G<n>, Z<k>)")->delimiter(',');
    sub->add_option("--chain", opt.chains, "Extra chain files that model files may refer to")->delimiter(',');
    sub->add_option("--max-domain", opt.max_domain, "Largest domain size searched")->check(CLI::PositiveNumber);
    sub->add_option("--max-candidates", opt.max_candidates, "Ceiling on candidate structures")->check(CLI::PositiveNumber);
    sub->add_option("--depth", opt.depth, "Formula depth bound")->check(CLI::NonNegativeNumber);
    sub->add_option("--vars", opt.vars, "Variables for formula enumeration");
    sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", opt.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--out", opt.out_file, "Write the witness model to this file");
  };

  struct Entry {
    const char* name;
    const char* help;
    std::function<int(Context&)> run;
    std::function<void(CLI::App*)> extra;
  };
  auto model_opt = [&](CLI::App* s) { s->add_option("--model", opt.model, "Model file")->required(); };
  auto tableau_opt = [&](CLI::App* s) { s->add_option("--tableau", opt.tableau, "Tableau file"); };
  auto pair_opts = [&](CLI::App* s) {
    s->add_option("--small", opt.small, "Smaller model file")->required();
    s->add_option("--large", opt.large, "Larger model file")->required();
  };
  auto subset_opt = [&](CLI::App* s) { s->add_option("--subset-cap", opt.subset_cap, "Largest formula set for subset sweeps"); };
  const std::vector<Entry> entries = {
      {"verify-algebra", "Check the UL-chain axioms", cmd_verify_algebra,
       [&](CLI::App* s) { s->add_option("chains", opt.inputs, "Chain files or built-in names"); }},
      {"eval", "Value of a formula in a model", cmd_eval,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--formula", opt.formula)->required();
         s->add_option("--assign", opt.assign, "Variable values, e.g. x=a,y=b");
       }},
      {"check-model", "Whether a model designates every sentence of a theory", cmd_check_model,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--theory", opt.theory, "Theory file");
         s->add_option("--formula", opt.formula, "Comma-separated sentences");
       }},
      {"entails", "Consequence over the search space", cmd_entails,
       [&](CLI::App* s) {
         s->add_option("--premises", opt.premises, "Comma-separated premises");
         s->add_option("--formula", opt.formula)->required();
       }},
      {"find-model", "First model satisfying a tableau", cmd_find_model, tableau_opt},
      {"consistent", "Tableau consistency", cmd_consistent,
       [&](CLI::App* s) {
         tableau_opt(s);
         subset_opt(s);
       }},
      {"finite-character", "Subtableau satisfiability, satisfiability and consistency", cmd_finite_character,
       [&](CLI::App* s) {
         tableau_opt(s);
         subset_opt(s);
       }},
      {"henkin", "Staged witness and linearity completion", cmd_henkin,
       [&](CLI::App* s) {
         tableau_opt(s);
         subset_opt(s);
         s->add_option("--constants", opt.constants, "Fresh constants, in order");
         s->add_option("--formulas", opt.formulas, "Formula enumeration file");
         s->add_option("--pairs", opt.pairs, "Pair file, one 'theta, psi' per line");
       }},
      {"substructure", "Substructure test", cmd_substructure, pair_opts},
      {"elementary", "Depth-bounded elementary substructure test", cmd_elementary, pair_opts},
      {"union", "Union of a chain of models", cmd_union,
       [&](CLI::App* s) { s->add_option("--models", opt.models, "List of model files")->required(); }},
      {"tarski-vaught", "Union preservation over a chain of models", cmd_tarski_vaught,
       [&](CLI::App* s) { s->add_option("--models", opt.models, "List of model files")->required(); }},
      {"exhaustive", "Whether every chain element is a formula value", cmd_exhaustive, model_opt},
      {"theory", "Designated and non-designated sentences with parameters", cmd_theory,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--params", opt.params, "Parameter elements, or * for the whole domain");
       }},
      {"is-type", "Whether a pair is a type of a tableau", cmd_is_type,
       [&](CLI::App* s) {
         tableau_opt(s);
         s->add_option("--type", opt.type, "Type file")->required();
       }},
      {"realize", "First element realizing a type", cmd_realize,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--type", opt.type, "Type file")->required();
       }},
      {"saturated", "Depth-bounded saturation check", cmd_saturated,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--kappa", opt.kappa, "Parameter sets of size < kappa")->check(CLI::PositiveNumber);
         s->add_option("--type-size-cap", opt.type_size_cap, "Largest |p| + |p'| considered");
       }},
      {"saturate-step", "One extension realizing a type", cmd_saturate_step,
       [&](CLI::App* s) {
         model_opt(s);
         s->add_option("--type", opt.type, "Type file")->required();
       }},
      {"generate", "Random formulas or tableaux", cmd_generate,
       [&](CLI::App* s) {
         s->add_option("--seed", opt.seed, "Random seed");
         s->add_option("--kind", opt.kind, "formula or tableau");
         s->add_option("--count", opt.count, "How many");
         s->add_option("--atoms", opt.atoms, "Number of propositional atoms");
       }},
  };

  std::function<int(Context&)> chosen;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    common(sub);
    e.extra(sub);
    sub->callback([&chosen, run = e.run] { chosen = run; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_yes : exit_usage;
  }

  try {
    Context ctx(opt, out);
    return chosen(ctx);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == errc::inconsistent_input) return exit_no;
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace ulmt
