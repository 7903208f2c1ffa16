// Frame description formulas, button/switch machinery and the labelling
// constructions that let one Kripke model simulate another inside a single
// world of a host model.  Everything here is pure construction plus reuse of
// the eval machinery; nothing mutates its inputs.

#pragma once

#include <bit>
#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "frameclass.hpp"
#include "kripke.hpp"

namespace mfw {

// ---------------------------------------------------------------------------
// jankov_fine(F): one formula over atoms p_<world> whose satisfaction forces
// the accessibility pattern of F onto the worlds above the evaluation point:
// exactly one p_w holds anywhere, and from a p_w world exactly the p_v with
// w E v are reachable.  Groups with no conjuncts are omitted, so a single
// reflexive world yields just []p_w & [](p_w -> <>p_w).

inline Formula jankov_fine(const Frame& fr) {
  const std::size_t n = fr.size();
  std::vector<Formula> ps;
  ps.reserve(n);
  for (std::size_t w = 0; w < n; ++w) ps.push_back(atom("p_" + fr.name(w)));

  std::vector<Formula> groups;
  if (n > 0) groups.push_back(box(disj_all(ps)));
  std::vector<Formula> excl, edges, nonedges;
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t v = 0; v < n; ++v) {
      if (w != v) excl.push_back(imp(ps[w], neg(ps[v])));
      if (fr.edge(w, v))
        edges.push_back(imp(ps[w], dia(ps[v])));
      else
        nonedges.push_back(imp(ps[w], neg(dia(ps[v]))));
    }
  if (!excl.empty()) groups.push_back(box(conj_all(excl)));
  if (!edges.empty()) groups.push_back(box(conj_all(edges)));
  if (!nonedges.empty()) groups.push_back(box(conj_all(nonedges)));
  return conj_all(groups);
}

// ---------------------------------------------------------------------------
// Button/switch patterns.  A button is "pushed" when its box holds; a switch
// is read bare.  Subsets are bitmasks over list positions, conjuncts run in
// list order, and the empty conjunction is "true".

inline Formula button_pattern(const std::vector<std::string>& buttons, std::uint64_t pushed) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    Formula b = box(atom(buttons[i]));
    parts.push_back(((pushed >> i) & 1) ? b : neg(b));
  }
  return conj_all(parts);
}

inline Formula switch_pattern(const std::vector<std::string>& switches, std::uint64_t on) {
  std::vector<Formula> parts;
  for (std::size_t j = 0; j < switches.size(); ++j) {
    Formula s = atom(switches[j]);
    parts.push_back(((on >> j) & 1) ? s : neg(s));
  }
  return conj_all(parts);
}

inline Formula pattern_formulas(const std::vector<std::string>& buttons,
                                const std::vector<std::string>& switches,
                                std::uint64_t pushed, std::uint64_t on) {
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < buttons.size(); ++i) {
    Formula b = box(atom(buttons[i]));
    parts.push_back(((pushed >> i) & 1) ? b : neg(b));
  }
  for (std::size_t j = 0; j < switches.size(); ++j) {
    Formula s = atom(switches[j]);
    parts.push_back(((on >> j) & 1) ? s : neg(s));
  }
  return conj_all(parts);
}

// ---------------------------------------------------------------------------
// independence_formula: the buttons start unpushed, and from any reachable
// pattern every weakly larger button pattern is jointly realizable with every
// switch pattern.  Conjuncts run lexicographically in (A, B, A', B'), so the
// output is reproducible byte for byte.

inline Formula independence_formula(const std::vector<std::string>& buttons,
                                    const std::vector<std::string>& switches) {
  const std::size_t nb = buttons.size(), ns = switches.size();
  if (nb + ns > 6)
    throw budget_error("independence_formula: " + std::to_string(nb + ns) +
                       " controls need 4^" + std::to_string(nb + ns) +
                       " pattern pairs, over the budget of 4^6");
  const std::uint64_t na = std::uint64_t(1) << nb, nsw = std::uint64_t(1) << ns;

  // Shared pattern table; the same node feeds every box/diamond that uses it.
  std::vector<std::vector<Formula>> pat(na);
  for (std::uint64_t a = 0; a < na; ++a)
    for (std::uint64_t b = 0; b < nsw; ++b)
      pat[a].push_back(pattern_formulas(buttons, switches, a, b));

  std::vector<Formula> parts;
  if (nb > 0) {
    std::vector<Formula> off;
    for (std::size_t i = 0; i < nb; ++i) off.push_back(neg(box(atom(buttons[i]))));
    parts.push_back(conj_all(off));
  }
  for (std::uint64_t a = 0; a < na; ++a)
    for (std::uint64_t b = 0; b < nsw; ++b) {
      std::vector<Formula> reach;
      for (std::uint64_t a2 = 0; a2 < na; ++a2) {
        if (a & ~a2) continue;  // only weakly larger button patterns
        for (std::uint64_t b2 = 0; b2 < nsw; ++b2) reach.push_back(dia(pat[a2][b2]));
      }
      parts.push_back(box(imp(pat[a][b], conj_all(reach))));
    }
  return conj_all(parts);
}

// ---------------------------------------------------------------------------
// preboolean_model(n, m): the canonical habitat for n independent buttons and
// m independent switches, on the product frame preboolean_frame(n, m).  b_i
// holds where i is in the persistent coordinate, s_j where j is in the free
// one; the designated point is the initial world (empty, empty).

inline PointedModel preboolean_model(std::size_t n, std::size_t m) {
  Model mod{preboolean_frame(n, m), {}};
  const std::uint64_t bmask = (std::uint64_t(1) << m) - 1;
  for (std::size_t w = 0; w < mod.frame.size(); ++w) {
    const std::uint64_t a = std::uint64_t(w) >> m, b = std::uint64_t(w) & bmask;
    for (std::size_t i = 0; i < n; ++i)
      if ((a >> i) & 1) mod.make_true("b" + std::to_string(i), w);
    for (std::size_t j = 0; j < m; ++j)
      if ((b >> j) & 1) mod.make_true("s" + std::to_string(j), w);
  }
  return PointedModel{std::move(mod), 0};
}

// ---------------------------------------------------------------------------
// Label assignments: one formula per world of the labelled frame, built from
// box-wrapped button atoms and bare switch atoms.  Distinct labels never
// share a pattern disjunct, which is what makes them pairwise exclusive on
// any host where the patterns themselves are exclusive.

struct LabelAssignment {
  std::vector<Formula> labels;  // indexed by world of the labelled frame
  std::vector<std::string> button_atoms;
  std::vector<std::string> switch_atoms;
  std::size_t root = 0;
};

namespace detail {

// Deal the 2^|switches| switch patterns among the worlds of each cluster:
// the initial pattern goes to w0 in the minimal cluster (to the first member
// elsewhere), the rest follow in ascending order round-robin, so every world
// receives a nonempty slice.  Returns the per-world disjunction s_w.
inline std::vector<Formula> switch_parts(const Frame& fr, const std::vector<std::size_t>& cls,
                                         std::size_t nclusters, std::size_t minimal_cluster,
                                         const std::vector<std::string>& switches,
                                         std::size_t w0, std::uint64_t initial) {
  const std::size_t ns = switches.size();
  if (ns > 16) throw budget_error("switch_parts: 2^" + std::to_string(ns) + " patterns over budget");
  const std::uint64_t npat = std::uint64_t(1) << ns;
  if (initial >= npat)
    throw error("initial switch pattern " + std::to_string(initial) + " is not a subset of " +
                std::to_string(ns) + " switches");

  std::size_t largest = 0;
  std::vector<std::vector<std::size_t>> members(nclusters);
  for (std::size_t w = 0; w < fr.size(); ++w) members[cls[w]].push_back(w);
  for (const auto& mem : members) largest = std::max(largest, mem.size());
  if (npat < largest)
    throw error("a cluster of " + std::to_string(largest) + " worlds needs at least " +
                std::to_string(largest) + " switch patterns; " + std::to_string(ns) +
                " switches give only " + std::to_string(npat));
  if (cls[w0] != minimal_cluster) throw error("w0 must lie in the minimal cluster");

  std::vector<std::vector<Formula>> dealt(fr.size());
  for (std::size_t c = 0; c < nclusters; ++c) {
    std::vector<std::size_t> nodes = members[c];
    if (c == minimal_cluster) {
      nodes.erase(std::find(nodes.begin(), nodes.end(), w0));
      nodes.insert(nodes.begin(), w0);
    }
    std::size_t t = 0;
    auto deal = [&](std::uint64_t p) { dealt[nodes[t % nodes.size()]].push_back(switch_pattern(switches, p)); ++t; };
    deal(initial);
    for (std::uint64_t p = 0; p < npat; ++p)
      if (p != initial) deal(p);
  }
  std::vector<Formula> out;
  out.reserve(fr.size());
  for (std::size_t w = 0; w < fr.size(); ++w) out.push_back(disj_all(dealt[w]));
  return out;
}

// Conjunction of the parts that are not literally "true"; empty -> "true".
inline Formula conj_nontrivial(std::vector<Formula> parts) {
  std::vector<Formula> kept;
  for (auto& p : parts)
    if (p.kind() != Kind::Top) kept.push_back(std::move(p));
  return conj_all(kept);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// lattice_labels: one button per node of a finite lattice, one label per
// node.  Each of the 2^|F| button patterns is claimed by exactly one label:
// the node that is the join of the pushed buttons' nodes (empty join =
// bottom).  Pushing buttons can only move the realized label upward, which is
// what makes the labelled host mimic the lattice order.

inline LabelAssignment lattice_labels(const Frame& fr, const std::vector<std::string>& buttons) {
  const FrameProfile prof = classify(fr);
  if (!prof.lattice)
    throw error("lattice_labels requires a finite lattice (antisymmetric, all joins and meets)");
  if (buttons.size() != fr.size())
    throw error("lattice_labels needs exactly one button per node: " + std::to_string(fr.size()) +
                " nodes, " + std::to_string(buttons.size()) + " buttons");
  const std::size_t n = fr.size();
  if (n > 16)
    throw budget_error("lattice_labels: 2^" + std::to_string(n) + " button patterns over the budget of 2^16");

  std::vector<std::uint64_t> le(n);
  for (std::size_t i = 0; i < n; ++i) le[i] = fr.successors(i);
  const detail::PosetView pv{le, n};
  const std::size_t bottom = *pv.least();

  std::vector<std::vector<Formula>> bucket(n);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a) {
    std::size_t j = bottom;
    for (std::uint64_t rest = a; rest;) {
      const std::size_t i = std::size_t(std::countr_zero(rest));
      rest &= rest - 1;
      j = *pv.join(j, i);
    }
    bucket[j].push_back(button_pattern(buttons, a));
  }
  LabelAssignment out;
  out.labels.reserve(n);
  for (std::size_t w = 0; w < n; ++w) out.labels.push_back(disj_all(bucket[w]));
  out.button_atoms = buttons;
  out.root = bottom;
  return out;
}

// ---------------------------------------------------------------------------
// prelattice_labels: cluster part times switch part.  The cluster part works
// on the quotient lattice and supports two button regimes: one button per
// cluster (each pattern lands on the join of the pushed clusters), or — when
// the quotient is a finite Boolean algebra — one button per generator, i.e.
// per atom of that algebra, so that the 2^|buttons| patterns hit the clusters
// bijectively.  A frame with a single cluster therefore takes zero buttons.
// Within a cluster the switch patterns are dealt per switch_parts above.

inline LabelAssignment prelattice_labels(const Frame& fr, const std::vector<std::string>& buttons,
                                         const std::vector<std::string>& switches, std::size_t w0,
                                         std::uint64_t initial_switch_pattern = 0) {
  const FrameProfile prof = classify(fr);
  if (!prof.prelattice)
    throw error("prelattice_labels requires a finite pre-lattice (pre-order with a lattice quotient)");
  if (w0 >= fr.size()) throw error("world index out of range");

  const QuotientResult q = quotient(fr);
  const std::size_t nc = q.frame.size();
  std::vector<std::uint64_t> le(nc);
  for (std::size_t i = 0; i < nc; ++i) le[i] = q.frame.successors(i);
  const detail::PosetView pv{le, nc};
  const std::size_t bottom = *pv.least();

  // Button-to-cluster association.  Either regime keeps the joins of pushed
  // associates covering every cluster, which is all the construction needs.
  std::vector<std::size_t> assoc;
  if (buttons.size() == nc) {
    for (std::size_t c = 0; c < nc; ++c) assoc.push_back(c);
  } else {
    std::vector<std::size_t> atoms_of_q;
    for (std::size_t x = 0; x < nc; ++x)
      if (x != bottom && pv.down(x) == ((std::uint64_t(1) << x) | (std::uint64_t(1) << bottom)))
        atoms_of_q.push_back(x);
    if (pv.is_boolean_algebra() && buttons.size() == atoms_of_q.size())
      assoc = atoms_of_q;
    else
      throw error("prelattice_labels needs one button per cluster (" + std::to_string(nc) +
                  "), or one per generator when the cluster order is a Boolean algebra");
  }
  if (assoc.size() > 16)
    throw budget_error("prelattice_labels: 2^" + std::to_string(assoc.size()) +
                       " button patterns over the budget of 2^16");

  std::vector<std::vector<Formula>> bucket(nc);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << assoc.size()); ++a) {
    std::size_t j = bottom;
    for (std::uint64_t rest = a; rest;) {
      const std::size_t i = std::size_t(std::countr_zero(rest));
      rest &= rest - 1;
      j = *pv.join(j, assoc[i]);
    }
    bucket[j].push_back(button_pattern(buttons, a));
  }
  for (std::size_t c = 0; c < nc; ++c)
    if (bucket[c].empty())  // cannot happen in either regime; fail loudly over mislabelling
      throw error("internal: cluster " + q.frame.name(c) + " received no button pattern");

  const std::vector<Formula> sw =
      detail::switch_parts(fr, q.cls, nc, bottom, switches, w0, initial_switch_pattern);

  LabelAssignment out;
  out.labels.reserve(fr.size());
  for (std::size_t w = 0; w < fr.size(); ++w)
    out.labels.push_back(detail::conj_nontrivial({disj_all(bucket[q.cls[w]]), sw[w]}));
  out.button_atoms = buttons;
  out.switch_atoms = switches;
  out.root = w0;
  return out;
}

// ---------------------------------------------------------------------------
// Volume controls: a chain of n levels that can only be turned up, never
// down, with every higher setting always reachable.  The box distributes the
// whole discipline to every world at once.  The length-1 control keeps only
// the reachability clause <>[]phi_1 — there is no lower level to chain to —
// and the "volume is zero" assertion ~[]phi_1 rides along separately.

struct VolumeControl {
  Formula formula;
  Formula zero_volume;
};

inline VolumeControl volume_control_formula(const std::vector<Formula>& levels) {
  if (levels.empty()) throw error("volume_control_formula requires at least one level");
  std::vector<Formula> parts;
  parts.push_back(dia(box(levels[0])));
  for (std::size_t i = 1; i < levels.size(); ++i) {
    parts.push_back(imp(box(levels[i]), box(levels[i - 1])));
    parts.push_back(dia(box(levels[i])));
    parts.push_back(imp(neg(box(levels[i])), dia(conj(neg(levels[i]), box(levels[i - 1])))));
  }
  return VolumeControl{box(conj_all(parts)), neg(box(levels[0]))};
}

// ---------------------------------------------------------------------------
// linear_labels: on a linear pre-order with n+1 clusters, the volume level of
// a world identifies its cluster — below level 1, between levels i and i+1,
// or at the top level — and the switch part picks the world inside it.

inline LabelAssignment linear_labels(const Frame& fr, const std::vector<Formula>& levels,
                                     const std::vector<std::string>& switches, std::size_t w0,
                                     std::uint64_t initial_switch_pattern = 0) {
  const FrameProfile prof = classify(fr);
  if (!prof.linear_preorder)
    throw error("linear_labels requires a finite linear pre-order");
  if (w0 >= fr.size()) throw error("world index out of range");

  const QuotientResult q = quotient(fr);
  const std::size_t nc = q.frame.size();
  if (levels.size() + 1 != nc)
    throw error("linear_labels needs one level per cluster boundary: " + std::to_string(nc) +
                " clusters, " + std::to_string(levels.size()) + " levels");

  // Chain position by up-set size: the bottom cluster sees all nc clusters.
  std::vector<std::size_t> rank(nc);
  std::size_t bottom = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    rank[c] = nc - std::size_t(std::popcount(q.frame.successors(c)));
    if (rank[c] == 0) bottom = c;
  }

  std::vector<Formula> v(nc, top());
  if (nc > 1) {
    for (std::size_t i = 0; i < nc; ++i) {
      if (i == 0)
        v[i] = neg(box(levels[0]));
      else if (i + 1 == nc)
        v[i] = box(levels[i - 1]);
      else
        v[i] = conj(box(levels[i - 1]), neg(box(levels[i])));
    }
  }

  const std::vector<Formula> sw =
      detail::switch_parts(fr, q.cls, nc, bottom, switches, w0, initial_switch_pattern);

  LabelAssignment out;
  out.labels.reserve(fr.size());
  for (std::size_t w = 0; w < fr.size(); ++w)
    out.labels.push_back(detail::conj_nontrivial({v[rank[q.cls[w]]], sw[w]}));
  for (const Formula& lvl : levels)
    for (const std::string& a : atoms(lvl))
      if (std::find(out.button_atoms.begin(), out.button_atoms.end(), a) == out.button_atoms.end())
        out.button_atoms.push_back(a);
  out.switch_atoms = switches;
  out.root = w0;
  return out;
}

// ---------------------------------------------------------------------------
// volume_model(n, m): the linear companion of preboolean_model.  n+1 levels,
// each a cluster of 2^m worlds; button b_i holds strictly above level i, so
// the b_i are semi-independent (pushing a later one pushes the earlier), and
// [conj(b_0..b_i)]_i is a volume control of length n.  Point: bottom, all
// switches off.

inline PointedModel volume_model(std::size_t n, std::size_t m) {
  if (n > Frame::max_worlds || m > 6 || (n + 1) * (std::size_t(1) << m) > Frame::max_worlds)
    throw budget_error("volume_model: " + std::to_string(n + 1) + " clusters of 2^" +
                       std::to_string(m) + " worlds exceed the 64-world frame capacity");
  const std::size_t width = std::size_t(1) << m;
  Model mod;
  for (std::size_t lvl = 0; lvl <= n; ++lvl)
    for (std::size_t b = 0; b < width; ++b)
      mod.frame.add_world("L" + std::to_string(lvl) + "B" + std::to_string(b));
  for (std::size_t u = 0; u < mod.frame.size(); ++u)
    for (std::size_t v = 0; v < mod.frame.size(); ++v)
      if (u / width <= v / width) mod.frame.add_edge(u, v);
  for (std::size_t w = 0; w < mod.frame.size(); ++w) {
    const std::size_t lvl = w / width, b = w % width;
    for (std::size_t i = 0; i < n; ++i)
      if (lvl > i) mod.make_true("b" + std::to_string(i), w);
    for (std::size_t j = 0; j < m; ++j)
      if ((b >> j) & 1) mod.make_true("s" + std::to_string(j), w);
  }
  return PointedModel{std::move(mod), 0};
}

// ---------------------------------------------------------------------------
// Translation: substituting labels for atoms turns any formula about the
// small model into a formula about the host.

inline std::map<std::string, Formula> label_substitution(const Frame& fr, const LabelAssignment& la) {
  if (la.labels.size() != fr.size()) throw error("label assignment does not match the frame");
  std::map<std::string, Formula> sub;
  for (std::size_t w = 0; w < fr.size(); ++w) sub.emplace("p_" + fr.name(w), la.labels[w]);
  return sub;
}

inline std::map<std::string, Formula> translate(const Model& m, const LabelAssignment& la) {
  if (la.labels.size() != m.frame.size()) throw error("label assignment does not match the frame");
  std::map<std::string, Formula> sigma;
  for (const auto& [name, mask] : m.valuation) {
    std::vector<Formula> ds;
    for (std::uint64_t rest = mask; rest;) {
      const std::size_t w = std::size_t(std::countr_zero(rest));
      rest &= rest - 1;
      ds.push_back(la.labels[w]);
    }
    sigma.emplace(name, disj_all(ds));
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Simulation checking.  The precondition — host satisfies the frame formula
// of m's frame together with the root label at its point — is checked once at
// construction and reported as an error, distinct from a plain "false" when
// some formula breaks the correspondence.  check(f) tests the per-world law
//   m,w |= f   iff   host,point |= [](label_w -> f.sigma)
// for every w, plus the headline equivalence at the two points.

class Simulation {
 public:
  Simulation(PointedModel m, PointedModel host, LabelAssignment la)
      : m_(std::move(m)), host_(std::move(host)), la_(std::move(la)) {
    const Frame& fr = m_.model.frame;
    if (la_.labels.size() != fr.size()) throw error("label assignment does not match the frame");
    if (m_.point >= fr.size() || host_.point >= host_.model.frame.size())
      throw error("world index out of range");
    const Formula want =
        substitute(conj(jankov_fine(fr), atom("p_" + fr.name(m_.point))), label_substitution(fr, la_));
    if (!eval(host_.model, host_.point, want))
      throw error("host does not satisfy the frame formula with the root label at its point");
    sigma_ = translate(m_.model, la_);
  }

  const std::map<std::string, Formula>& sigma() const { return sigma_; }

  bool check(const Formula& f) const {
    const Formula tf = substitute(f, sigma_);
    for (std::size_t w = 0; w < m_.model.frame.size(); ++w)
      if (eval(m_.model, w, f) != eval(host_.model, host_.point, box(imp(la_.labels[w], tf))))
        return false;
    return eval(m_.model, m_.point, f) == eval(host_.model, host_.point, tf);
  }

  // Batch form of check: same verdicts, but the label truth sets and the
  // translated atom truth sets are computed once on the host and every
  // formula is then evaluated against them directly, instead of rebuilding
  // <formula>[sigma] per call.  Sound because substituting sigma(q) for q and
  // evaluating is the same as evaluating with q read as sigma(q)'s truth set.
  std::vector<bool> check_all(const std::vector<Formula>& fs) const {
    const std::size_t k = m_.model.frame.size();
    std::vector<std::uint64_t> lmask(k);
    for (std::size_t w = 0; w < k; ++w) lmask[w] = truth_mask(host_.model, la_.labels[w]);
    Model hostv = host_.model;  // atoms outside sigma keep their host reading
    for (const auto& [name, f] : sigma_) hostv.valuation[name] = truth_mask(host_.model, f);

    const std::uint64_t reach = host_.model.frame.successors(host_.point);
    std::vector<bool> out;
    out.reserve(fs.size());
    for (const Formula& f : fs) {
      const std::uint64_t mm = truth_mask(m_.model, f);
      const std::uint64_t hm = truth_mask(hostv, f);
      bool ok = ((mm >> m_.point) & 1) == ((hm >> host_.point) & 1);
      for (std::size_t w = 0; ok && w < k; ++w)
        ok = ((mm >> w) & 1) == ((reach & lmask[w] & ~hm) == 0);
      out.push_back(ok);
    }
    return out;
  }

 private:
  PointedModel m_, host_;
  LabelAssignment la_;
  std::map<std::string, Formula> sigma_;
};

inline bool verify_simulation(const PointedModel& m, const PointedModel& host,
                              const LabelAssignment& la, const Formula& f) {
  return Simulation(m, host, la).check(f);
}

// ---------------------------------------------------------------------------
// Statement classification at the designated point of a directed pre-order
// model: a statement is a button (necessarily possibly necessary), the
// negation of one, or a switch (necessarily both realizable and refutable).
// On directed pre-orders exactly one case applies; directedness is required
// because the trichotomy genuinely fails without it.

enum class StatementClass : unsigned char { Button, NegatedButton, Switch };

inline std::string statement_class_name(StatementClass c) {
  switch (c) {
    case StatementClass::Button: return "button";
    case StatementClass::NegatedButton: return "negated-button";
    case StatementClass::Switch: return "switch";
  }
  throw error("unknown statement class");
}

inline StatementClass classify_statement(const PointedModel& m, const Formula& f) {
  const Frame& fr = m.model.frame;
  if (!is_preorder(fr) || !is_directed(fr))
    throw error("classify_statement requires a directed pre-order frame");
  if (m.point >= fr.size()) throw error("world index out of range");
  const bool button = eval(m.model, m.point, box(dia(box(f))));
  const bool negated = eval(m.model, m.point, box(dia(box(neg(f)))));
  const bool sw = eval(m.model, m.point, conj(box(dia(f)), box(dia(neg(f)))));
  if (int(button) + int(negated) + int(sw) != 1)
    throw error("internal: statement trichotomy violated on a directed pre-order");
  if (button) return StatementClass::Button;
  if (negated) return StatementClass::NegatedButton;
  return StatementClass::Switch;
}

}  // namespace mfw
