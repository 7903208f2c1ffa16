#pragma once

// Structural classification of frames and the frame constructions built on
// it: restriction to the accessible cone, partial unravelling of a directed
// pre-order into a baled pre-tree, and powerset-product frames whose
// quotients are Boolean algebras.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mfw/kripke.hpp"

namespace mfw {

struct FrameProfile {
  bool reflexive = false;
  bool transitive = false;
  bool preorder = false;
  bool directed = false;  // any two worlds share an upper bound
  bool partial_order = false;
  bool lattice = false;
  bool prelattice = false;
  bool tree = false;
  bool pretree = false;
  bool baled_tree = false;
  bool baled_pretree = false;
  bool boolean_algebra = false;
  bool preboolean = false;
  bool linear_preorder = false;
  bool complete_reflexive = false;
  std::size_t cluster_count = 0;    // quotient size; 0 unless a pre-order
  std::size_t max_cluster_size = 0;
};

// The quotient-dependent flags (lattice/tree/Boolean families) are false on
// anything that is not a pre-order; on pre-orders they are decided on the
// cluster quotient, with the plain variants additionally requiring
// antisymmetry (so the frame IS its own quotient).
inline FrameProfile classify(const Frame& fr) {
  FrameProfile p;
  if (fr.size() == 0) return p;
  p.reflexive = is_reflexive(fr);
  p.transitive = is_transitive(fr);
  p.preorder = p.reflexive && p.transitive;
  p.directed = is_directed(fr);
  p.partial_order = p.preorder && is_antisymmetric(fr);
  p.complete_reflexive = is_complete_reflexive(fr);
  if (!p.preorder) return p;

  const QuotientResult q = quotient(fr);
  p.cluster_count = q.frame.size();
  std::vector<std::size_t> sizes(q.frame.size(), 0);
  for (std::size_t c : q.cls) ++sizes[c];
  for (std::size_t s : sizes) p.max_cluster_size = std::max(p.max_cluster_size, s);

  std::vector<std::uint64_t> le(q.frame.size());
  for (std::size_t i = 0; i < q.frame.size(); ++i) le[i] = q.frame.successors(i);
  const detail::PosetView pv{le, q.frame.size()};
  p.prelattice = pv.is_lattice();
  p.pretree = pv.is_rooted_tree();
  p.baled_pretree = pv.is_baled_tree();
  p.preboolean = p.prelattice && pv.is_boolean_algebra();
  p.linear_preorder = pv.is_chain();
  p.lattice = p.partial_order && p.prelattice;
  p.tree = p.partial_order && p.pretree;
  p.baled_tree = p.partial_order && p.baled_pretree;
  p.boolean_algebra = p.partial_order && p.preboolean;
  return p;
}

inline bool frame_in_class(const Frame& fr, FrameClass cls) {
  const FrameProfile p = classify(fr);
  switch (cls) {
    case FrameClass::All: return true;
    case FrameClass::Transitive: return p.transitive;
    case FrameClass::Preorder: return p.preorder;
    case FrameClass::DirectedPreorder: return p.preorder && p.directed;
    case FrameClass::Pretree: return p.pretree;
    case FrameClass::Prelattice: return p.prelattice;
    case FrameClass::BaledPretree: return p.baled_pretree;
    case FrameClass::Preboolean: return p.preboolean;
    case FrameClass::LinearPreorder: return p.linear_preorder;
    case FrameClass::CompleteReflexive: return p.complete_reflexive;
  }
  throw error("unknown frame class id");
}

// Flat key=value view in declaration order, for scripted consumers.
inline std::vector<std::pair<std::string, std::string>> profile_items(const FrameProfile& p) {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  return {
      {"reflexive", b(p.reflexive)},
      {"transitive", b(p.transitive)},
      {"preorder", b(p.preorder)},
      {"directed", b(p.directed)},
      {"partial_order", b(p.partial_order)},
      {"lattice", b(p.lattice)},
      {"prelattice", b(p.prelattice)},
      {"tree", b(p.tree)},
      {"pretree", b(p.pretree)},
      {"baled_tree", b(p.baled_tree)},
      {"baled_pretree", b(p.baled_pretree)},
      {"boolean_algebra", b(p.boolean_algebra)},
      {"preboolean", b(p.preboolean)},
      {"linear_preorder", b(p.linear_preorder)},
      {"complete_reflexive", b(p.complete_reflexive)},
      {"cluster_count", std::to_string(p.cluster_count)},
      {"max_cluster_size", std::to_string(p.max_cluster_size)},
  };
}

// Induced subframe on the worlds reachable from w0 (w0 itself included),
// keeping the original declaration order and names.
inline Frame restrict_to_accessible(const Frame& fr, std::size_t w0) {
  if (w0 >= fr.size()) throw error("world index out of range");
  std::uint64_t reach = std::uint64_t(1) << w0;
  for (;;) {
    std::uint64_t next = reach, rest = reach;
    while (rest) {
      const std::size_t w = std::countr_zero(rest);
      rest &= rest - 1;
      next |= fr.successors(w);
    }
    if (next == reach) break;
    reach = next;
  }
  std::vector<std::size_t> keep;
  for (std::size_t w = 0; w < fr.size(); ++w)
    if ((reach >> w) & 1) keep.push_back(w);
  Frame out;
  for (std::size_t w : keep) out.add_world(fr.name(w));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (fr.edge(keep[i], keep[j])) out.add_edge(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Partial unravelling.  The input is restricted to the cone of w0 first; the
// cone must then be a directed pre-order.  Writing Q for its cluster
// quotient, the result consists of one copy of each non-top cluster per
// maximal chain from [w0] to that cluster in Q, ordered by chain
// end-extension (incomparable chains stay unrelated), plus the top cluster
// as a single bale above everything.

struct UnravelResult {
  Frame frame;
  std::vector<std::size_t> origin;  // result world -> world of the input frame
  std::vector<std::size_t> bale;    // result worlds forming the bale
  std::size_t root = 0;             // the copy of w0
};

inline UnravelResult unravel(const Frame& fr, std::size_t w0) {
  const Frame cone = restrict_to_accessible(fr, w0);
  if (!is_preorder(cone) || !is_directed(cone))
    throw error("unravel requires the cone of the starting world to be a directed pre-order");
  const std::size_t start = cone.world(fr.name(w0));
  const QuotientResult q = quotient(cone);
  const std::size_t nc = q.frame.size();

  std::vector<std::vector<std::size_t>> members(nc);
  for (std::size_t w = 0; w < cone.size(); ++w) members[q.cls[w]].push_back(w);

  std::uint64_t seen_by_all = q.frame.full_mask();
  for (std::size_t c = 0; c < nc; ++c) seen_by_all &= q.frame.successors(c);
  const std::size_t top = std::countr_zero(seen_by_all);  // directed => exists
  const std::size_t rootc = q.cls[start];
  for (std::size_t c = 0; c < nc; ++c)
    if (!q.frame.edge(rootc, c))
      throw error("starting world is not in the minimal cluster");  // impossible after restriction

  auto covers = [&](std::size_t a, std::size_t b) {
    if (a == b || !q.frame.edge(a, b)) return false;
    for (std::size_t z = 0; z < nc; ++z)
      if (z != a && z != b && q.frame.edge(a, z) && q.frame.edge(z, b)) return false;
    return true;
  };

  // Saturated chains from the root cluster, grouped by end cluster; depth
  // first with covers taken in ascending order, so each group is in
  // lexicographic chain order.
  std::vector<std::vector<std::vector<std::size_t>>> chains_of(nc);
  std::size_t tree_copies = 0;
  std::vector<std::size_t> cur{rootc};
  auto dfs = [&](auto&& self) -> void {
    const std::size_t end = cur.back();
    if (end == top) return;  // the bale stands in for every chain to the top
    chains_of[end].push_back(cur);
    tree_copies += members[end].size();
    if (tree_copies + members[top].size() > Frame::max_worlds)
      throw budget_error("unravelling exceeds the 64-world frame capacity");
    for (std::size_t d = 0; d < nc; ++d)
      if (covers(end, d)) {
        cur.push_back(d);
        self(self);
        cur.pop_back();
      }
  };
  dfs(dfs);

  UnravelResult out;
  std::vector<std::size_t> from_cone;                      // result world -> cone world
  std::vector<const std::vector<std::size_t>*> chain_of;   // result world -> chain, null for bale
  std::map<std::string, std::size_t> copies_of;            // source name -> copies made so far
  auto add_copy = [&](std::size_t cone_world, const std::vector<std::size_t>* chain) {
    const std::string& base = cone.name(cone_world);
    const std::size_t k = ++copies_of[base];
    std::string name = k == 1 ? base : base + "_" + std::to_string(k);
    while (out.frame.find(name)) name += "_";
    out.frame.add_world(name);
    from_cone.push_back(cone_world);
    chain_of.push_back(chain);
  };
  for (std::size_t e = 0; e < nc; ++e)
    for (const auto& ch : chains_of[e])
      for (std::size_t w : members[e]) add_copy(w, &ch);
  for (std::size_t w : members[top]) {
    out.bale.push_back(out.frame.size());
    add_copy(w, nullptr);
  }

  auto prefix = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  };
  for (std::size_t i = 0; i < out.frame.size(); ++i)
    for (std::size_t j = 0; j < out.frame.size(); ++j) {
      if (chain_of[j] == nullptr) out.frame.add_edge(i, j);  // everything sees the bale
      else if (chain_of[i] && prefix(*chain_of[i], *chain_of[j])) out.frame.add_edge(i, j);
    }

  out.origin.reserve(out.frame.size());
  for (std::size_t w : from_cone) out.origin.push_back(fr.world(cone.name(w)));
  for (std::size_t i = 0; i < out.frame.size(); ++i)
    if (out.origin[i] == w0) out.root = i;  // w0 has exactly one copy
  return out;
}

// ---------------------------------------------------------------------------
// Powerset-product frames: worlds are pairs (A subset of n bits, B subset of
// m bits), (A,B) reaching (A',B') iff A is a subset of A'.  The quotient is
// the powerset order on A, so every such frame is pre-Boolean with 2^n
// clusters of size 2^m.

inline Frame preboolean_frame(std::size_t n, std::size_t m) {
  if (n + m > 6)
    throw budget_error("preboolean_frame: 2^" + std::to_string(n + m) +
                       " worlds exceed the 64-world frame capacity");
  Frame out;
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a)
    for (std::uint64_t b = 0; b < (std::uint64_t(1) << m); ++b)
      out.add_world("A" + std::to_string(a) + "B" + std::to_string(b));
  const std::uint64_t bs = std::uint64_t(1) << m;
  for (std::size_t u = 0; u < out.size(); ++u)
    for (std::size_t v = 0; v < out.size(); ++v)
      if ((u / bs & ~(v / bs)) == 0) out.add_edge(u, v);
  return out;
}

}  // namespace mfw
