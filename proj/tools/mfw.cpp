// mfw -- command-line workbench for normal modal logics on finite frames.
//
// Twelve subcommands over the header library: parse, eval, frame-valid,
// classify, unravel, jankov, labels, simulate, classify-statement, decide,
// audit, suite.  Exit status: 0 for success / valid verdicts, 1 for
// falsified / refuted verdicts (so shells can branch on it), 2 for usage or
// input errors.  All output is deterministic: byte-identical across repeated
// runs and across --jobs settings.  No environment variables are consulted.
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <mfw/suite.hpp>

namespace {

using namespace mfw;

// "@Name" anywhere in a formula argument expands to the catalogued axiom,
// parenthesised.  Name characters: alphanumerics, '.', '_' and any non-ASCII
// byte (axiom names may carry accented letters).
std::string expand_axiom_refs(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '@') {
      out += text[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size()) {
      const unsigned char c = static_cast<unsigned char>(text[j]);
      if (std::isalnum(c) || c == '.' || c == '_' || c >= 0x80)
        ++j;
      else
        break;
    }
    const std::string name = text.substr(i + 1, j - i - 1);
    const std::optional<Axiom> ax = axiom_by_name(name);
    if (!ax) throw error("--formula: unknown axiom '@" + name + "'");
    out += "(" + render(axiom_formula(*ax)) + ")";
    i = j;
  }
  return out;
}

Formula formula_arg(const std::string& text) {
  try {
    return parse(expand_axiom_refs(text));
  } catch (const parse_error& e) {
    // e.what() already reads "line:column: message"
    throw error(std::string("--formula:") + e.what());
  }
}

Frame rt_closure(const Frame& fr) {
  const std::size_t n = fr.size();
  std::vector<std::uint64_t> succ(n);
  for (std::size_t w = 0; w < n; ++w) succ[w] = fr.successors(w) | (std::uint64_t(1) << w);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u = 0; u < n; ++u)
      for (std::uint64_t rest = succ[u]; rest;) {
        const std::size_t v = std::size_t(std::countr_zero(rest));
        rest &= rest - 1;
        if (succ[v] & ~succ[u]) {
          succ[u] |= succ[v];
          changed = true;
        }
      }
  }
  Frame out;
  for (std::size_t w = 0; w < n; ++w) out.add_world(fr.name(w));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if ((succ[u] >> v) & 1) out.add_edge(u, v);
  return out;
}

ModelFile load_model(const std::string& path, const std::string& close) {
  std::ifstream in(path);
  if (!in) throw error(path + ": cannot open file");
  ModelFile mf = read_model_file(in, path);
  if (close == "rt")
    mf.model.frame = rt_closure(mf.model.frame);  // same indices, masks stay valid
  else if (!close.empty())
    throw error("--close: unknown closure '" + close + "' (supported: rt)");
  return mf;
}

std::size_t world_arg(const Frame& fr, const std::string& id, const char* flag) {
  if (auto w = fr.find(id)) return *w;
  throw error(std::string(flag) + ": unknown world '" + id + "'");
}

// The designated world: an explicit flag wins, else the file's point.
std::size_t pick_point(const ModelFile& mf, const std::string& at, const char* flag) {
  if (!at.empty()) return world_arg(mf.model.frame, at, flag);
  if (mf.point) return *mf.point;
  throw error(std::string(flag) + ": the file declares no point and no world was given");
}

std::vector<std::string> gen_names(const char* stem, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

// Smallest k with 2^k >= n, so k switches can tell n cluster members apart.
std::size_t switch_count_for(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t(1) << k) < n) ++k;
  return k;
}

std::size_t bottom_cluster_first_world(const Frame& fr) {
  const QuotientResult q = quotient(fr);
  std::size_t bottom = 0;
  for (std::size_t c = 0; c < q.frame.size(); ++c)
    if (q.frame.successors(c) == q.frame.full_mask()) bottom = c;
  for (std::size_t w = 0; w < fr.size(); ++w)
    if (q.cls[w] == bottom) return w;
  throw error("internal: empty bottom cluster");
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

// Display width of UTF-8 text: bytes minus continuation bytes.  Keeps table
// columns straight when axiom names carry accented letters.
std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (char ch : s)
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  for (std::size_t w = display_width(s); w < width; ++w) out += ' ';
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.  Each returns the process exit code.

struct ParseOpts {
  std::string formula;
  bool porcelain = false;
};

int run_parse(const ParseOpts& o) {
  const Formula f = formula_arg(o.formula);
  if (!o.porcelain) {
    std::cout << render(f) << "\n";
    return 0;
  }
  const std::set<std::string> used = atoms(f);
  const std::vector<std::string> names(used.begin(), used.end());
  std::cout << "formula=" << render(f) << "\n"
            << "atoms=" << join(names, ",") << "\n"
            << "modal_depth=" << modal_depth(f) << "\n";
  return 0;
}

struct EvalOpts {
  std::string model, formula, at, close;
  bool porcelain = false;
};

int run_eval(const EvalOpts& o) {
  const ModelFile mf = load_model(o.model, o.close);
  const std::size_t w = pick_point(mf, o.at, "--at");
  const bool v = eval(mf.model, w, formula_arg(o.formula));
  if (o.porcelain)
    std::cout << "value=" << (v ? "true" : "false") << "\n";
  else
    std::cout << (v ? "true" : "false") << "\n";
  return v ? 0 : 1;
}

struct FrameValidOpts {
  std::string frame, formula, close;
  int jobs = 1;
  std::uint64_t max_valuations = std::uint64_t(1) << 24;
  bool porcelain = false;
};

int run_frame_valid(const FrameValidOpts& o) {
  const ModelFile mf = load_model(o.frame, o.close);
  const ValidityReport rep =
      frame_valid(mf.model.frame, formula_arg(o.formula), SearchLimits{o.max_valuations, o.jobs});
  if (o.porcelain) {
    std::cout << "valid=" << (rep.valid ? "true" : "false") << "\n"
              << "valuations_examined=" << rep.valuations_examined << "\n";
    if (!rep.valid) {
      std::cout << "witness_world=" << rep.witness.frame.name(rep.witness_world) << "\n"
                << "worlds=" << rep.witness.frame.size() << "\n";
      write_model_file(std::cout, rep.witness, rep.witness_world);
    }
    return rep.valid ? 0 : 1;
  }
  if (rep.valid) {
    std::cout << "valid (" << rep.valuations_examined << " valuations examined)\n";
    return 0;
  }
  std::cout << "falsified at world " << rep.witness.frame.name(rep.witness_world) << " ("
            << rep.valuations_examined << " valuations examined)\n";
  write_model_file(std::cout, rep.witness, rep.witness_world);
  return 1;
}

struct ClassifyOpts {
  std::string frame, close;
  bool porcelain = false;
};

int run_classify(const ClassifyOpts& o) {
  const ModelFile mf = load_model(o.frame, o.close);
  const FrameProfile p = classify(mf.model.frame);
  const char* sep = o.porcelain ? "=" : ": ";
  std::cout << "worlds" << sep << mf.model.frame.size() << "\n";
  for (const auto& [key, value] : profile_items(p)) std::cout << key << sep << value << "\n";
  return 0;
}

struct UnravelOpts {
  std::string frame, root, close;
  bool porcelain = false;
};

int run_unravel(const UnravelOpts& o) {
  const ModelFile mf = load_model(o.frame, o.close);
  const Frame& fr = mf.model.frame;
  const UnravelResult ur = unravel(fr, world_arg(fr, o.root, "--root"));
  std::vector<std::string> bale_names;
  for (std::size_t w : ur.bale) bale_names.push_back(ur.frame.name(w));
  if (o.porcelain) {
    std::cout << "worlds=" << ur.frame.size() << "\n"
              << "root=" << ur.frame.name(ur.root) << "\n"
              << "bale=" << join(bale_names, ",") << "\n";
    for (std::size_t w = 0; w < ur.frame.size(); ++w)
      std::cout << "origin." << ur.frame.name(w) << "=" << fr.name(ur.origin[w]) << "\n";
    write_model_file(std::cout, Model{ur.frame, {}}, ur.root);
    return 0;
  }
  // Human output is itself a frame file; the reader drops the '#' comments.
  std::cout << "# " << ur.frame.size() << " worlds, root " << ur.frame.name(ur.root) << ", bale {"
            << join(bale_names, ", ") << "}\n";
  for (std::size_t w = 0; w < ur.frame.size(); ++w)
    std::cout << "world " << ur.frame.name(w) << "  # from " << fr.name(ur.origin[w]) << "\n";
  for (std::size_t u = 0; u < ur.frame.size(); ++u)
    for (std::size_t v = 0; v < ur.frame.size(); ++v)
      if (ur.frame.edge(u, v))
        std::cout << "edge " << ur.frame.name(u) << " " << ur.frame.name(v) << "\n";
  std::cout << "point " << ur.frame.name(ur.root) << "\n";
  return 0;
}

struct JankovOpts {
  std::string frame, close;
  bool porcelain = false;
};

int run_jankov(const JankovOpts& o) {
  const ModelFile mf = load_model(o.frame, o.close);
  const Formula f = jankov_fine(mf.model.frame);
  if (o.porcelain)
    std::cout << "worlds=" << mf.model.frame.size() << "\n"
              << "formula=" << render(f) << "\n";
  else
    std::cout << render(f) << "\n";
  return 0;
}

struct LabelsOpts {
  std::string frame, kind = "auto", start, close;
  std::uint64_t init = 0;
  bool porcelain = false;
};

int run_labels(const LabelsOpts& o) {
  const ModelFile mf = load_model(o.frame, o.close);
  const Frame& fr = mf.model.frame;
  const FrameProfile p = classify(fr);

  std::string kind = o.kind;
  if (kind == "auto") {
    if (p.lattice)
      kind = "lattice";
    else if (p.linear_preorder)
      kind = "linear";
    else if (p.prelattice)
      kind = "prelattice";
    else
      throw error("--frame: not a lattice, pre-lattice or linear pre-order; no labelling applies");
  }

  LabelAssignment la;
  if (kind == "lattice") {
    if (!o.start.empty()) throw error("--start: lattice labellings fix their own root");
    if (o.init != 0) throw error("--init: lattice labellings use no switches");
    la = lattice_labels(fr, gen_names("b", fr.size()));
  } else if (kind == "prelattice" || kind == "linear") {
    const std::size_t w0 =
        o.start.empty() ? bottom_cluster_first_world(fr) : world_arg(fr, o.start, "--start");
    const std::size_t ns = switch_count_for(p.max_cluster_size);
    if (o.init >= (std::uint64_t(1) << ns))
      throw error("--init: pattern " + std::to_string(o.init) + " is not a subset of " +
                  std::to_string(ns) + " switches");
    if (kind == "linear") {
      std::vector<Formula> levels, running;
      for (std::size_t i = 0; i + 1 < p.cluster_count; ++i) {
        running.push_back(atom("b" + std::to_string(i)));
        levels.push_back(conj_all(running));
      }
      la = linear_labels(fr, levels, gen_names("s", ns), w0, o.init);
    } else {
      la = prelattice_labels(fr, gen_names("b", p.cluster_count), gen_names("s", ns), w0, o.init);
    }
  } else {
    throw error("--kind: unknown labelling '" + kind +
                "' (supported: auto, lattice, prelattice, linear)");
  }

  const char* sep = o.porcelain ? "=" : ": ";
  std::cout << "kind" << sep << kind << "\n"
            << "root" << sep << fr.name(la.root) << "\n"
            << "buttons" << sep << join(la.button_atoms, o.porcelain ? "," : " ") << "\n"
            << "switches" << sep << join(la.switch_atoms, o.porcelain ? "," : " ") << "\n";
  for (std::size_t w = 0; w < fr.size(); ++w)
    std::cout << "p_" << fr.name(w) << sep << render(la.labels[w]) << "\n";
  return 0;
}

struct SimulateOpts {
  std::string model, formula, at, close;
  bool porcelain = false;
};

int run_simulate(const SimulateOpts& o) {
  const ModelFile mf = load_model(o.model, o.close);
  const Frame& fr = mf.model.frame;
  const std::size_t w0 = pick_point(mf, o.at, "--at");
  const FrameProfile p = classify(fr);
  if (!p.prelattice)
    throw error("--model: simulation requires a pre-lattice frame (pre-order, lattice quotient)");
  {
    const QuotientResult q = quotient(fr);
    std::size_t bottom = 0;
    for (std::size_t c = 0; c < q.frame.size(); ++c)
      if (q.frame.successors(c) == q.frame.full_mask()) bottom = c;
    if (q.cls[w0] != bottom)
      throw error("--at: the designated world must lie in the bottom cluster");
  }
  const std::size_t ns = switch_count_for(p.max_cluster_size);
  const PointedModel host = preboolean_model(p.cluster_count, ns);
  const LabelAssignment la =
      prelattice_labels(fr, gen_names("b", p.cluster_count), gen_names("s", ns), w0, 0);
  const Formula f = formula_arg(o.formula);
  const bool ok = verify_simulation(PointedModel{mf.model, w0}, host, la, f);
  if (o.porcelain)
    std::cout << "holds=" << (ok ? "true" : "false") << "\n"
              << "clusters=" << p.cluster_count << "\n"
              << "switches=" << ns << "\n"
              << "host_worlds=" << host.model.frame.size() << "\n";
  else
    std::cout << (ok ? "true" : "false") << "\n";
  return ok ? 0 : 1;
}

struct ClassifyStatementOpts {
  std::string model, formula, at, close;
  bool porcelain = false;
};

int run_classify_statement(const ClassifyStatementOpts& o) {
  const ModelFile mf = load_model(o.model, o.close);
  const std::size_t w = pick_point(mf, o.at, "--at");
  const StatementClass c = classify_statement(PointedModel{mf.model, w}, formula_arg(o.formula));
  std::cout << (o.porcelain ? "class=" : "") << statement_class_name(c) << "\n";
  return 0;
}

struct DecideOpts {
  std::string theory, formula, cls;
  std::size_t max = 0;
  int jobs = 1;
  std::uint64_t max_valuations = std::uint64_t(1) << 24;
  bool porcelain = false;
};

int run_decide(const DecideOpts& o) {
  const std::optional<Theory> t = theory_by_name(o.theory);
  if (!t) throw error("--theory: unknown theory '" + o.theory + "'");
  std::optional<FrameClass> choice;
  if (!o.cls.empty()) {
    choice = frame_class_by_name(o.cls);
    if (!choice) throw error("--class: unknown frame class '" + o.cls + "'");
  }
  const Formula f = formula_arg(o.formula);
  const SearchReport rep =
      countermodel_search(f, *t, o.max, choice, SearchLimits{o.max_valuations, o.jobs});
  if (o.porcelain) {
    std::cout << "theory=" << theory_name(rep.theory) << "\n"
              << "class=" << frame_class_name(rep.searched_class) << "\n"
              << "bound=" << rep.bound << "\n"
              << "formula=" << render(f) << "\n"
              << "refuted=" << (rep.refuted() ? "true" : "false") << "\n"
              << "frames_examined=" << rep.frames_examined << "\n"
              << "valuations_examined=" << rep.valuations_examined << "\n";
    if (rep.refuted()) {
      std::cout << "worlds=" << rep.counter->model.frame.size() << "\n";
      write_model_file(std::cout, rep.counter->model, rep.counter->point);
    }
    return rep.refuted() ? 1 : 0;
  }
  if (rep.refuted()) {
    std::cout << "refuted: " << rep.counter->model.frame.size() << "-world countermodel (theory "
              << theory_name(rep.theory) << ", class " << frame_class_name(rep.searched_class)
              << ", bound " << rep.bound << ")\n"
              << "frames examined: " << rep.frames_examined
              << ", valuations examined: " << rep.valuations_examined << "\n";
    write_model_file(std::cout, rep.counter->model, rep.counter->point);
    return 1;
  }
  std::cout << "no countermodel up to " << rep.bound << " worlds (theory "
            << theory_name(rep.theory) << ", class " << frame_class_name(rep.searched_class)
            << ")\n"
            << "frames examined: " << rep.frames_examined
            << ", valuations examined: " << rep.valuations_examined << "\n"
            << "note: bounded evidence only, not a theoremhood claim\n";
  return 0;
}

struct AuditOpts {
  std::string theory, cls;
  std::size_t max = 0;
  int jobs = 1;
  std::uint64_t max_valuations = std::uint64_t(1) << 24;
  bool porcelain = false;
};

int run_audit(const AuditOpts& o) {
  const std::optional<Theory> t = theory_by_name(o.theory);
  if (!t) throw error("--theory: unknown theory '" + o.theory + "'");
  std::optional<FrameClass> choice;
  if (!o.cls.empty()) {
    choice = frame_class_by_name(o.cls);
    if (!choice) throw error("--class: unknown frame class '" + o.cls + "'");
  }
  const FrameClass cls = search_class(*t, choice);
  const std::vector<AuditRow> rows =
      frame_class_audit(*t, o.max, choice, SearchLimits{o.max_valuations, o.jobs});
  if (o.porcelain) {
    std::vector<std::string> good, bad;
    for (const AuditRow& r : rows) (r.valid ? good : bad).push_back(axiom_name(r.axiom));
    std::cout << "theory=" << theory_name(*t) << "\n"
              << "class=" << frame_class_name(cls) << "\n"
              << "bound=" << o.max << "\n"
              << "valid=" << join(good, ",") << "\n"
              << "falsified=" << join(bad, ",") << "\n";
    return 0;
  }
  std::cout << "theory " << theory_name(*t) << ", class " << frame_class_name(cls) << ", bound "
            << o.max << "\n";
  for (const AuditRow& r : rows) {
    std::cout << "  " << pad(axiom_name(r.axiom), 5);
    if (r.valid)
      std::cout << "valid      (" << r.frames_examined << " frames, " << r.valuations_examined
                << " valuations)\n";
    else
      std::cout << "falsified  (" << r.falsifier->model.frame.size() << "-world witness at "
                << r.falsifier->model.frame.name(r.falsifier->point) << ")\n";
  }
  return 0;
}

struct SuiteOpts {
  bool porcelain = false;
};

int run_suite(const SuiteOpts& o) {
  const SuiteReport rep = run_acceptance();
  if (o.porcelain) {
    for (const CriterionResult& r : rep.rows)
      std::cout << "criterion." << r.number << "=" << (r.pass ? "pass" : "fail") << "\n";
    std::cout << "all=" << (rep.all_pass ? "pass" : "fail") << "\n";
  } else {
    std::cout << rep.text;
  }
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{"mfw -- a finite-frame workbench for normal modal logics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mfw 1.0");
  int rc = 0;

  ParseOpts parse_o;
  auto* sc_parse = app.add_subcommand("parse", "parse a formula and print its normal rendering");
  sc_parse->add_option("--formula", parse_o.formula, "formula text; @Name expands an axiom")
      ->required();
  sc_parse->add_flag("--porcelain", parse_o.porcelain, "stable key=value output");
  sc_parse->callback([&] { rc = run_parse(parse_o); });

  EvalOpts eval_o;
  auto* sc_eval = app.add_subcommand("eval", "evaluate a formula at a world of a model file");
  sc_eval->add_option("--model", eval_o.model, "model file")->required();
  sc_eval->add_option("--formula", eval_o.formula, "formula text; @Name expands an axiom")
      ->required();
  sc_eval->add_option("--at", eval_o.at, "world name (default: the file's point)");
  sc_eval->add_option("--close", eval_o.close, "closure applied on load (rt)");
  sc_eval->add_flag("--porcelain", eval_o.porcelain, "stable key=value output");
  sc_eval->callback([&] { rc = run_eval(eval_o); });

  FrameValidOpts fv_o;
  auto* sc_fv = app.add_subcommand("frame-valid",
                                   "check a formula under every valuation of a frame");
  sc_fv->add_option("--frame", fv_o.frame, "frame file (valuations in it are ignored)")
      ->required();
  sc_fv->add_option("--formula", fv_o.formula, "formula text; @Name expands an axiom")->required();
  sc_fv->add_option("--close", fv_o.close, "closure applied on load (rt)");
  sc_fv->add_option("--jobs", fv_o.jobs, "worker threads (output is identical regardless)")
      ->check(CLI::PositiveNumber);
  sc_fv->add_option("--max-valuations", fv_o.max_valuations, "budget for the valuation sweep");
  sc_fv->add_flag("--porcelain", fv_o.porcelain, "stable key=value output");
  sc_fv->callback([&] { rc = run_frame_valid(fv_o); });

  ClassifyOpts cl_o;
  auto* sc_cl = app.add_subcommand("classify", "print the structural profile of a frame");
  sc_cl->add_option("--frame", cl_o.frame, "frame file")->required();
  sc_cl->add_option("--close", cl_o.close, "closure applied on load (rt)");
  sc_cl->add_flag("--porcelain", cl_o.porcelain, "stable key=value output");
  sc_cl->callback([&] { rc = run_classify(cl_o); });

  UnravelOpts un_o;
  auto* sc_un = app.add_subcommand("unravel",
                                   "partially unravel a directed pre-order into a baled pre-tree");
  sc_un->add_option("--frame", un_o.frame, "frame file")->required();
  sc_un->add_option("--root", un_o.root, "world to unravel from")->required();
  sc_un->add_option("--close", un_o.close, "closure applied on load (rt)");
  sc_un->add_flag("--porcelain", un_o.porcelain, "stable key=value output");
  sc_un->callback([&] { rc = run_unravel(un_o); });

  JankovOpts jk_o;
  auto* sc_jk = app.add_subcommand("jankov", "print the frame formula of a finite frame");
  sc_jk->add_option("--frame", jk_o.frame, "frame file")->required();
  sc_jk->add_option("--close", jk_o.close, "closure applied on load (rt)");
  sc_jk->add_flag("--porcelain", jk_o.porcelain, "stable key=value output");
  sc_jk->callback([&] { rc = run_jankov(jk_o); });

  LabelsOpts lb_o;
  auto* sc_lb = app.add_subcommand("labels",
                                   "generate button/switch labels realizing a frame on its host");
  sc_lb->add_option("--frame", lb_o.frame, "frame file")->required();
  sc_lb->add_option("--kind", lb_o.kind, "labelling: auto, lattice, prelattice, linear");
  sc_lb->add_option("--start", lb_o.start, "bottom-cluster world labelled first (not for lattice)");
  sc_lb->add_option("--init", lb_o.init, "initial switch pattern (default 0)");
  sc_lb->add_option("--close", lb_o.close, "closure applied on load (rt)");
  sc_lb->add_flag("--porcelain", lb_o.porcelain, "stable key=value output");
  sc_lb->callback([&] { rc = run_labels(lb_o); });

  SimulateOpts sim_o;
  auto* sc_sim = app.add_subcommand("simulate",
                                    "verify that a formula transfers from a model to its host");
  sc_sim->add_option("--model", sim_o.model, "model file (frame must be a pre-lattice)")
      ->required();
  sc_sim->add_option("--formula", sim_o.formula, "formula text; @Name expands an axiom")
      ->required();
  sc_sim->add_option("--at", sim_o.at, "bottom-cluster world (default: the file's point)");
  sc_sim->add_option("--close", sim_o.close, "closure applied on load (rt)");
  sc_sim->add_flag("--porcelain", sim_o.porcelain, "stable key=value output");
  sc_sim->callback([&] { rc = run_simulate(sim_o); });

  ClassifyStatementOpts cs_o;
  auto* sc_cs = app.add_subcommand("classify-statement",
                                   "classify a statement as button, negated button or switch");
  sc_cs->add_option("--model", cs_o.model, "model file (frame must be a directed pre-order)")
      ->required();
  sc_cs->add_option("--formula", cs_o.formula, "formula text; @Name expands an axiom")->required();
  sc_cs->add_option("--at", cs_o.at, "world name (default: the file's point)");
  sc_cs->add_option("--close", cs_o.close, "closure applied on load (rt)");
  sc_cs->add_flag("--porcelain", cs_o.porcelain, "stable key=value output");
  sc_cs->callback([&] { rc = run_classify_statement(cs_o); });

  DecideOpts dc_o;
  auto* sc_dc = app.add_subcommand("decide",
                                   "search a theory's complete frame class for a countermodel");
  sc_dc->add_option("--theory", dc_o.theory, "K, K4, S4, S4.2, S4.3 or S5")->required();
  sc_dc->add_option("--formula", dc_o.formula, "formula text; @Name expands an axiom")->required();
  sc_dc->add_option("--max", dc_o.max, "largest frame size to search")->required();
  sc_dc->add_option("--class", dc_o.cls, "alternative complete class bound to the theory");
  sc_dc->add_option("--jobs", dc_o.jobs, "worker threads (output is identical regardless)")
      ->check(CLI::PositiveNumber);
  sc_dc->add_option("--max-valuations", dc_o.max_valuations, "budget per frame");
  sc_dc->add_flag("--porcelain", dc_o.porcelain, "stable key=value output");
  sc_dc->callback([&] { rc = run_decide(dc_o); });

  AuditOpts au_o;
  auto* sc_au = app.add_subcommand("audit",
                                   "check every catalogued axiom against a theory's frame class");
  sc_au->add_option("--theory", au_o.theory, "any catalogued theory")->required();
  sc_au->add_option("--max", au_o.max, "largest frame size to audit")->required();
  sc_au->add_option("--class", au_o.cls, "alternative complete class bound to the theory");
  sc_au->add_option("--jobs", au_o.jobs, "worker threads (output is identical regardless)")
      ->check(CLI::PositiveNumber);
  sc_au->add_option("--max-valuations", au_o.max_valuations, "budget per frame");
  sc_au->add_flag("--porcelain", au_o.porcelain, "stable key=value output");
  sc_au->callback([&] { rc = run_audit(au_o); });

  SuiteOpts su_o;
  auto* sc_su = app.add_subcommand("suite", "run the acceptance criteria and print the table");
  sc_su->add_flag("--porcelain", su_o.porcelain, "stable key=value output");
  sc_su->callback([&] { rc = run_suite(su_o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the help text or the usage error
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "mfw: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
