// The acceptance suite: the finitary laws this library exists to verify,
// bundled as ten criteria with deterministic pass/fail reporting.  Every
// criterion is exhaustive over its stated domain -- no sampling, no seeds --
// so two runs must render byte-identical reports; the tenth criterion checks
// exactly that.  Timing budgets participate in pass/fail but never in the
// rendered text.
#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "decide.hpp"
#include "jankov.hpp"

namespace mfw {

struct CriterionResult {
  int number = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::vector<std::string> numbered_atoms(const std::string& stem, std::size_t n) {
  std::vector<std::string> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

inline std::vector<std::size_t> bottom_cluster_worlds(const Frame& fr) {
  const QuotientResult q = quotient(fr);
  std::size_t bottom = 0;
  for (std::size_t c = 0; c < q.frame.size(); ++c)
    if (q.frame.successors(c) == q.frame.full_mask()) bottom = c;
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < fr.size(); ++w)
    if (q.cls[w] == bottom) out.push_back(w);
  return out;
}

// The three label laws for one (frame, labelling, host) triple: the frame
// description with the root label holds at the host's point, exactly one
// label holds at each host world, and a label-w world can reach label v
// exactly when w reaches v in the frame.  Returns violations; counts checks.
inline std::size_t label_law_violations(const Frame& fr, const LabelAssignment& la,
                                        const PointedModel& host, std::size_t& checks) {
  std::size_t bad = 0;
  const Formula want = substitute(conj(jankov_fine(fr), atom("p_" + fr.name(la.root))),
                                  label_substitution(fr, la));
  ++checks;
  if (!eval(host, want)) ++bad;

  std::vector<std::uint64_t> lmask(fr.size());
  for (std::size_t w = 0; w < fr.size(); ++w) lmask[w] = truth_mask(host.model, la.labels[w]);
  for (std::size_t u = 0; u < host.model.frame.size(); ++u) {
    std::size_t holders = 0, holder = 0;
    for (std::size_t w = 0; w < fr.size(); ++w)
      if ((lmask[w] >> u) & 1) {
        ++holders;
        holder = w;
      }
    ++checks;
    if (holders != 1) {
      ++bad;
      continue;
    }
    for (std::size_t v = 0; v < fr.size(); ++v) {
      ++checks;
      const bool forceable = (host.model.frame.successors(u) & lmask[v]) != 0;
      if (forceable != fr.edge(holder, v)) ++bad;
    }
  }
  return bad;
}

// The running 6-element example poset: 1 below 2 and 3, both below 4 and 5,
// both below 6, given with its reflexive-transitive closure.
inline Frame six_node_example() {
  Frame six;
  for (int i = 1; i <= 6; ++i) six.add_world(std::to_string(i));
  const std::uint64_t succ[6] = {0b111111, 0b111010, 0b111100, 0b101000, 0b110000, 0b100000};
  for (std::size_t w = 0; w < 6; ++w)
    for (std::size_t v = 0; v < 6; ++v)
      if ((succ[w] >> v) & 1) six.add_edge(w, v);
  return six;
}

inline Frame fork_frame() {
  Frame f;
  f.add_world("r");
  f.add_world("x");
  f.add_world("y");
  f.add_edge(0, 0);
  f.add_edge(0, 1);
  f.add_edge(0, 2);
  f.add_edge(1, 1);
  f.add_edge(2, 2);
  return f;
}

// Frames with <= 3 clusters of <= 2 worlds each, within the given family.
inline std::vector<Frame> small_clustered(FrameClass cls) {
  std::vector<Frame> out;
  for (const Frame& fr : enumerate_frames(6, cls)) {
    const FrameProfile p = classify(fr);
    if (p.cluster_count <= 3 && p.max_cluster_size <= 2) out.push_back(fr);
  }
  return out;
}

}  // namespace detail

// 1. The five S4.2 axioms sweep clean over every directed pre-order with at
// most five worlds.
inline CriterionResult criterion_soundness_at_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r{1, "the S4.2 axioms hold on all directed pre-orders up to 5 worlds", false, ""};
  const std::vector<Axiom> axioms = theory_axiom_list(Theory::S4_2);
  const std::size_t frames = enumerate_frames(5, FrameClass::DirectedPreorder).size();
  std::size_t counterexamples = 0;
  for (Axiom a : axioms)
    if (countermodel_search(axiom_formula(a), Theory::S4_2, 5).refuted()) ++counterexamples;
  const bool in_time = std::chrono::steady_clock::now() - t0 <= std::chrono::seconds(60);
  r.pass = axioms.size() == 5 && counterexamples == 0 && in_time;
  std::ostringstream d;
  d << axioms.size() << " axioms x " << frames << " frames, " << counterexamples
    << " counterexamples";
  r.detail = d.str();
  return r;
}

// 2. Each of the eight classic principles beyond S4.2 is refuted within five
// worlds, and every reported witness replays to false.
inline CriterionResult criterion_observation_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r{2, "the eight classic principles are refuted within 5 worlds", false, ""};
  static const std::vector<Axiom> targets{Axiom::Five, Axiom::M,   Axiom::W5,   Axiom::Dot3,
                                          Axiom::Dm,   Axiom::Grz, Axiom::Loeb, Axiom::H};
  std::size_t refuted = 0, replayed = 0;
  std::ostringstream sizes;
  for (Axiom a : targets) {
    const Formula f = axiom_formula(a);
    const SearchReport rep = countermodel_search(f, Theory::S4_2, 5);
    if (!rep.refuted()) {
      sizes << (sizes.tellp() > 0 ? "," : "") << "-";
      continue;
    }
    ++refuted;
    if (!eval(*rep.counter, f)) ++replayed;
    sizes << (sizes.tellp() > 0 ? "," : "") << rep.counter->model.frame.size();
  }
  const bool in_time = std::chrono::steady_clock::now() - t0 <= std::chrono::seconds(120);
  r.pass = refuted == targets.size() && replayed == targets.size() && in_time;
  std::ostringstream d;
  d << refuted << "/8 refuted, " << replayed << "/8 witnesses replay false, minimal sizes "
    << sizes.str();
  r.detail = d.str();
  return r;
}

// 3. Label laws on every lattice with <= 3 nodes and every pre-lattice with
// <= 3 clusters of <= 2 worlds, hosted on the matching product model, over
// every admissible starting world and initial switch pattern.
inline CriterionResult criterion_label_laws() {
  CriterionResult r{3, "labellings satisfy the frame-description laws on their hosts", false, ""};
  std::size_t checks = 0, bad = 0, lattices = 0, prelattices = 0;

  for (const Frame& fr : enumerate_frames(3, FrameClass::Prelattice)) {
    if (!classify(fr).lattice) continue;
    ++lattices;
    const LabelAssignment la = lattice_labels(fr, detail::numbered_atoms("b", fr.size()));
    bad += detail::label_law_violations(fr, la, preboolean_model(fr.size(), 0), checks);
  }

  for (const Frame& fr : detail::small_clustered(FrameClass::Prelattice)) {
    ++prelattices;
    const FrameProfile p = classify(fr);
    const std::size_t s = p.max_cluster_size > 1 ? 1 : 0;
    const PointedModel host = preboolean_model(p.cluster_count, s);
    for (std::size_t w0 : detail::bottom_cluster_worlds(fr))
      for (std::uint64_t init = 0; init < (std::uint64_t(1) << s); ++init) {
        const LabelAssignment la = prelattice_labels(
            fr, detail::numbered_atoms("b", p.cluster_count), detail::numbered_atoms("s", s), w0,
            init);
        PointedModel at = host;
        at.point = init;  // the host world carrying the initial switch pattern
        bad += detail::label_law_violations(fr, la, at, checks);
      }
  }

  r.pass = lattices == 3 && prelattices == 14 && bad == 0;
  std::ostringstream d;
  d << lattices << " lattices and " << prelattices << " pre-lattices, " << checks << " checks, "
    << bad << " failures";
  r.detail = d.str();
  return r;
}

// 4. Simulation transfer: every two-atom model on the small pre-lattices,
// against every enumerated formula of modal depth <= 3, transfers into the
// product-model host world by world.
inline CriterionResult criterion_simulation() {
  CriterionResult r{4, "simulation carries every formula from every small model to its host",
                    false, ""};
  const std::vector<Formula> corpus = enumerate_formulas({"q0", "q1"}, 4);
  bool depths_ok = corpus.size() >= 500;
  for (const Formula& f : corpus) depths_ok = depths_ok && modal_depth(f) <= 3;

  std::size_t models = 0, pairs = 0, bad = 0, spot = 0;
  for (const Frame& fr : detail::small_clustered(FrameClass::Prelattice)) {
    const FrameProfile p = classify(fr);
    const std::size_t k = fr.size(), s = p.max_cluster_size > 1 ? 1 : 0;
    const PointedModel host = preboolean_model(p.cluster_count, s);
    const std::size_t w0 = detail::bottom_cluster_worlds(fr).front();
    const LabelAssignment la = prelattice_labels(
        fr, detail::numbered_atoms("b", p.cluster_count), detail::numbered_atoms("s", s), w0, 0);
    for (std::uint64_t vv = 0; vv < (std::uint64_t(1) << (2 * k)); ++vv) {
      Model mm{fr, {}};
      mm.valuation["q0"] = vv & ((std::uint64_t(1) << k) - 1);
      mm.valuation["q1"] = vv >> k;
      const PointedModel at{std::move(mm), w0};
      const Simulation sim(at, host, la);
      const std::vector<bool> verdicts = sim.check_all(corpus);
      ++models;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        ++pairs;
        if (!verdicts[i]) ++bad;
        if (pairs % 9973 == 0) {  // tie the one-shot entry point to the same law
          ++spot;
          if (!verify_simulation(at, host, la, corpus[i])) ++bad;
        }
      }
    }
  }

  r.pass = depths_ok && models == 8420 && bad == 0;
  std::ostringstream d;
  d << corpus.size() << " formulas x " << models << " models (" << pairs << " pairs, " << spot
    << " re-run one-shot), " << bad << " failures";
  r.detail = d.str();
  return r;
}

// 5. Unravelling: over every directed pre-order with <= 5 worlds and every
// starting world, the result is a baled pre-tree bisimilar to the source
// cone at the root; the running 6-node example unravels to 8 worlds.
inline CriterionResult criterion_unravelling() {
  CriterionResult r{5, "unravelling yields baled pre-trees bisimilar at the root", false, ""};
  std::size_t unravelled = 0, bad = 0;
  for (const Frame& fr : enumerate_frames(5, FrameClass::DirectedPreorder)) {
    Model source{fr, {}};
    std::set<std::string> atoms_used;
    for (std::size_t w = 0; w < fr.size(); ++w) {
      source.make_true("o" + fr.name(w), w);
      atoms_used.insert("o" + fr.name(w));
    }
    for (std::size_t w0 = 0; w0 < fr.size(); ++w0) {
      const UnravelResult ur = unravel(fr, w0);
      ++unravelled;
      if (!classify(ur.frame).baled_pretree) ++bad;
      Model image{ur.frame, {}};
      for (std::size_t u = 0; u < ur.frame.size(); ++u)
        image.make_true("o" + fr.name(ur.origin[u]), u);
      if (!bisimilar(source, w0, image, ur.root, atoms_used)) ++bad;
    }
  }
  const std::size_t six_worlds = unravel(detail::six_node_example(), 0).frame.size();
  r.pass = bad == 0 && six_worlds == 8;
  std::ostringstream d;
  d << unravelled << " unravellings, " << bad << " failures; 6-node example -> " << six_worlds
    << " worlds";
  r.detail = d.str();
  return r;
}

// 6. The independence formula holds at the product model's root for every
// n + m <= 4, and its truth set is exactly the fresh-button worlds.
inline CriterionResult criterion_independence() {
  CriterionResult r{6, "independence holds exactly on the product models", false, ""};
  std::size_t cases = 0, bad = 0;
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t m = 0; n + m <= 4; ++m) {
      ++cases;
      const PointedModel pm = preboolean_model(n, m);
      const Formula f =
          independence_formula(detail::numbered_atoms("b", n), detail::numbered_atoms("s", m));
      if (!eval(pm, f)) ++bad;
      const std::uint64_t got = truth_mask(pm.model, f);
      const std::uint64_t want = n == 0 ? pm.model.frame.full_mask()
                                        : (std::uint64_t(1) << (std::uint64_t(1) << m)) - 1;
      if (got != want) ++bad;
    }
  r.pass = cases == 15 && bad == 0;
  std::ostringstream d;
  d << cases << " models, exact truth sets, " << bad << " failures";
  r.detail = d.str();
  return r;
}

// 7. Trichotomy: over every directed pre-order with <= 5 worlds and every
// world-subset as a fresh statement, each world hosts exactly one of
// button / negated button / switch.
inline CriterionResult criterion_trichotomy() {
  CriterionResult r{7, "every statement is a button, a negated button or a switch", false, ""};
  std::size_t classified = 0, bad = 0;
  const Formula x = atom("x");
  for (const Frame& fr : enumerate_frames(5, FrameClass::DirectedPreorder)) {
    const std::size_t k = fr.size();
    for (std::uint64_t sub = 0; sub < (std::uint64_t(1) << k); ++sub) {
      Model mm{fr, {}};
      mm.valuation["x"] = sub;
      const std::uint64_t btn = truth_mask(mm, box(dia(box(x))));
      const std::uint64_t nbtn = truth_mask(mm, box(dia(box(neg(x)))));
      const std::uint64_t sw = truth_mask(mm, conj(box(dia(x)), box(dia(neg(x)))));
      if ((btn & nbtn) || (btn & sw) || (nbtn & sw)) ++bad;
      if ((btn | nbtn | sw) != fr.full_mask()) ++bad;
      for (std::size_t u = 0; u < k; ++u) {
        ++classified;
        try {
          classify_statement(PointedModel{mm, u}, x);
        } catch (const error&) {
          ++bad;
        }
      }
    }
  }
  r.pass = bad == 0;
  std::ostringstream d;
  d << classified << " classifications, " << bad << " exceptions";
  r.detail = d.str();
  return r;
}

// 8. The three classic failure instances, replayed by exact evaluation on
// their two-button and button-plus-switch habitats.
inline CriterionResult criterion_failure_instances() {
  CriterionResult r{8, "the classic failure instances evaluate exactly", false, ""};
  std::size_t bad = 0;
  {
    // True and possibly-necessary but not necessary at the root.
    const PointedModel pm = preboolean_model(2, 0);
    const Formula phi =
        disj(conj(neg(box(atom("b0"))), neg(box(atom("b1")))), box(conj(atom("b0"), atom("b1"))));
    if (!eval(pm, phi)) ++bad;
    if (!eval(pm, dia(box(phi)))) ++bad;
    if (eval(pm, box(phi))) ++bad;
    if (eval(pm, substitute(axiom_formula(Axiom::W5), {{"p", phi}}))) ++bad;
  }
  {
    // Both buttons can be pushed alone, but no linearity disjunct survives.
    const PointedModel pm = preboolean_model(2, 0);
    const Formula phi = conj(box(atom("b0")), neg(box(atom("b1"))));
    const Formula psi = conj(box(atom("b1")), neg(box(atom("b0"))));
    if (!eval(pm, conj(dia(phi), dia(psi)))) ++bad;
    if (eval(pm, disj_all({dia(conj(phi, dia(psi))), dia(conj(phi, psi)),
                           dia(conj(psi, dia(phi)))})))
      ++bad;
    if (eval(pm, substitute(axiom_formula(Axiom::Dot3), {{"p", phi}, {"q", psi}}))) ++bad;
  }
  {
    // A button-or-switch blend: true antecedent, false conclusion.
    const PointedModel pm = preboolean_model(1, 1);
    const Formula phi = disj(box(atom("b0")), atom("s0"));
    if (!eval(pm, box(imp(box(imp(phi, box(phi))), phi)))) ++bad;
    if (eval(pm, imp(dia(box(phi)), phi))) ++bad;
    if (eval(pm, substitute(axiom_formula(Axiom::Dm), {{"p", phi}}))) ++bad;
  }
  r.pass = bad == 0;
  std::ostringstream d;
  d << "12 exact evaluations, " << bad << " failures";
  r.detail = d.str();
  return r;
}

// 9. Linear labellings satisfy the label laws on volume-control hosts, and
// the directedness axiom separates directed from merely tree-like orders.
inline CriterionResult criterion_linear_and_directedness() {
  CriterionResult r{9, "linear labellings ride the volume control; Dir marks directedness", false,
                    ""};
  std::size_t checks = 0, bad = 0, linears = 0;
  for (const Frame& fr : detail::small_clustered(FrameClass::LinearPreorder)) {
    ++linears;
    const FrameProfile p = classify(fr);
    const std::size_t s = p.max_cluster_size > 1 ? 1 : 0;
    const PointedModel host = volume_model(p.cluster_count - 1, s);
    std::vector<Formula> levels, running;
    for (std::size_t i = 0; i + 1 < p.cluster_count; ++i) {
      running.push_back(atom("b" + std::to_string(i)));
      levels.push_back(conj_all(running));
    }
    if (!levels.empty()) {
      // the host really is a volume control over these levels
      ++checks;
      if (truth_mask(host.model, volume_control_formula(levels).formula) !=
          host.model.frame.full_mask())
        ++bad;
    }
    for (std::size_t w0 : detail::bottom_cluster_worlds(fr))
      for (std::uint64_t init = 0; init < (std::uint64_t(1) << s); ++init) {
        const LabelAssignment la = linear_labels(fr, levels, detail::numbered_atoms("s", s), w0,
                                                 init);
        PointedModel at = host;
        at.point = init;
        bad += detail::label_law_violations(fr, la, at, checks);
      }
  }

  const bool dir_clean = !countermodel_search(axiom_formula(Axiom::Dir), Theory::S4_2, 5).refuted();
  const bool dir_fork = !frame_valid(detail::fork_frame(), axiom_formula(Axiom::Dir)).valid;
  r.pass = linears == 14 && bad == 0 && dir_clean && dir_fork;
  std::ostringstream d;
  d << linears << " linear pre-orders, " << checks << " checks, " << bad << " failures; Dir "
    << (dir_clean ? "clean to 5 worlds" : "REFUTED") << ", fork "
    << (dir_fork ? "falsifies it" : "VALIDATES it");
  r.detail = d.str();
  return r;
}

// Criteria 1-9; each body is guarded so one failure cannot take down the
// rest of the report.
inline std::vector<CriterionResult> run_criteria() {
  using Fn = CriterionResult (*)();
  static const Fn fns[] = {criterion_soundness_at_bound, criterion_observation_suite,
                           criterion_label_laws,         criterion_simulation,
                           criterion_unravelling,        criterion_independence,
                           criterion_trichotomy,         criterion_failure_instances,
                           criterion_linear_and_directedness};
  std::vector<CriterionResult> rows;
  int number = 0;
  for (Fn fn : fns) {
    ++number;
    try {
      rows.push_back(fn());
    } catch (const std::exception& e) {
      rows.push_back({number, "criterion aborted", false, e.what()});
    }
  }
  return rows;
}

inline std::string render_suite_report(const std::vector<CriterionResult>& rows) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const CriterionResult& r : rows) {
    os << "criterion " << r.number << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.title
       << " -- " << r.detail << "\n";
    if (r.pass) ++passed;
  }
  os << passed << "/" << rows.size() << " criteria passed\n";
  return os.str();
}

struct SuiteReport {
  std::vector<CriterionResult> rows;
  std::string text;
  bool all_pass = false;
};

// The full gate: criteria 1-9 run twice, and the tenth criterion is that
// both runs render byte-identical reports.
inline SuiteReport run_acceptance() {
  std::vector<CriterionResult> rows = run_criteria();
  const std::string first = render_suite_report(rows);
  const std::string second = render_suite_report(run_criteria());
  CriterionResult ten;
  ten.number = 10;
  ten.title = "repeated runs are byte-identical";
  ten.pass = first == second;
  ten.detail = ten.pass ? "two full runs rendered the same bytes"
                        : "reports differ between runs";
  rows.push_back(ten);

  SuiteReport rep;
  rep.text = render_suite_report(rows);
  rep.all_pass = true;
  for (const CriterionResult& r : rows) rep.all_pass = rep.all_pass && r.pass;
  rep.rows = std::move(rows);
  return rep;
}

}  // namespace mfw
