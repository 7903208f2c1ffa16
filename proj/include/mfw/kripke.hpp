#pragma once

// Kripke frames and models over at most 64 worlds.  Relations are stored as
// per-world successor bitmasks, so formula evaluation works on whole world
// sets at once and exhaustive valuation search stays cheap at desk scale.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mfw/formula.hpp"

namespace mfw {

class Frame {
public:
  static constexpr std::size_t max_worlds = 64;

  std::size_t add_world(std::string name) {
    if (names_.size() >= max_worlds) throw budget_error("frame exceeds 64 worlds");
    if (index_.count(name)) throw error("duplicate world '" + name + "'");
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    succ_.push_back(0);
    return names_.size() - 1;
  }

  void add_edge(std::size_t u, std::size_t v) {
    check(u);
    check(v);
    succ_[u] |= std::uint64_t(1) << v;
  }

  bool edge(std::size_t u, std::size_t v) const {
    check(u);
    check(v);
    return (succ_[u] >> v) & 1;
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t w) const {
    check(w);
    return names_[w];
  }
  const std::vector<std::string>& world_names() const { return names_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t world(std::string_view name) const {
    auto w = find(name);
    if (!w) throw error("unknown world '" + std::string(name) + "'");
    return *w;
  }

  std::uint64_t successors(std::size_t u) const {
    check(u);
    return succ_[u];
  }

  std::uint64_t full_mask() const {
    return names_.size() == 64 ? ~std::uint64_t(0)
                               : (std::uint64_t(1) << names_.size()) - 1;
  }

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.names_ == b.names_ && a.succ_ == b.succ_;
  }
  friend bool operator!=(const Frame& a, const Frame& b) { return !(a == b); }

private:
  void check(std::size_t w) const {
    if (w >= names_.size()) throw error("world index out of range");
  }

  std::vector<std::string> names_;
  std::vector<std::uint64_t> succ_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct Model {
  Frame frame;
  std::map<std::string, std::uint64_t> valuation;  // atom -> world set; absent atoms are false

  void make_true(const std::string& atom_name, std::size_t world) {
    if (world >= frame.size()) throw error("world index out of range");
    valuation[atom_name] |= std::uint64_t(1) << world;
  }
  bool holds(const std::string& atom_name, std::size_t world) const {
    if (world >= frame.size()) throw error("world index out of range");
    auto it = valuation.find(atom_name);
    return it != valuation.end() && ((it->second >> world) & 1);
  }
};

struct PointedModel {
  Model model;
  std::size_t point = 0;
};

// ---------------------------------------------------------------------------
// Evaluation.  truth_mask computes the set of worlds satisfying f in one
// bottom-up pass; shared subtrees are evaluated once.

namespace detail {

inline std::uint64_t truth_mask_rec(const Model& m, const Formula& f,
                                    std::unordered_map<const void*, std::uint64_t>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  const std::uint64_t full = m.frame.full_mask();
  std::uint64_t r = 0;
  switch (f.kind()) {
    case Kind::Atom: {
      auto v = m.valuation.find(f.atom_name());
      r = v == m.valuation.end() ? 0 : (v->second & full);
      break;
    }
    case Kind::Top: r = full; break;
    case Kind::Bot: r = 0; break;
    case Kind::Not: r = ~truth_mask_rec(m, f.child(), memo) & full; break;
    case Kind::And:
      r = truth_mask_rec(m, f.left(), memo) & truth_mask_rec(m, f.right(), memo);
      break;
    case Kind::Or:
      r = truth_mask_rec(m, f.left(), memo) | truth_mask_rec(m, f.right(), memo);
      break;
    case Kind::Implies:
      r = (~truth_mask_rec(m, f.left(), memo) | truth_mask_rec(m, f.right(), memo)) & full;
      break;
    case Kind::Iff:
      r = ~(truth_mask_rec(m, f.left(), memo) ^ truth_mask_rec(m, f.right(), memo)) & full;
      break;
    case Kind::Box: {
      const std::uint64_t body = truth_mask_rec(m, f.child(), memo);
      for (std::size_t w = 0; w < m.frame.size(); ++w)
        if ((m.frame.successors(w) & ~body & full) == 0) r |= std::uint64_t(1) << w;
      break;
    }
    case Kind::Diamond: {
      const std::uint64_t body = truth_mask_rec(m, f.child(), memo);
      for (std::size_t w = 0; w < m.frame.size(); ++w)
        if (m.frame.successors(w) & body) r |= std::uint64_t(1) << w;
      break;
    }
  }
  memo.emplace(f.id(), r);
  return r;
}

}  // namespace detail

inline std::uint64_t truth_mask(const Model& m, const Formula& f) {
  std::unordered_map<const void*, std::uint64_t> memo;
  return detail::truth_mask_rec(m, f, memo);
}

inline bool eval(const Model& m, std::size_t world, const Formula& f) {
  if (world >= m.frame.size()) throw error("world index out of range");
  return (truth_mask(m, f) >> world) & 1;
}

inline bool eval(const PointedModel& pm, const Formula& f) { return eval(pm.model, pm.point, f); }

inline bool valid_in_model(const Model& m, const Formula& f) {
  return truth_mask(m, f) == m.frame.full_mask();
}

// ---------------------------------------------------------------------------
// Relation predicates.

inline bool is_reflexive(const Frame& fr) {
  for (std::size_t w = 0; w < fr.size(); ++w)
    if (!fr.edge(w, w)) return false;
  return true;
}

inline bool is_transitive(const Frame& fr) {
  for (std::size_t u = 0; u < fr.size(); ++u) {
    std::uint64_t rest = fr.successors(u);
    while (rest) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      if (fr.successors(v) & ~fr.successors(u)) return false;
    }
  }
  return true;
}

inline bool is_preorder(const Frame& fr) { return is_reflexive(fr) && is_transitive(fr); }

inline bool is_antisymmetric(const Frame& fr) {
  for (std::size_t u = 0; u < fr.size(); ++u)
    for (std::size_t v = u + 1; v < fr.size(); ++v)
      if (fr.edge(u, v) && fr.edge(v, u)) return false;
  return true;
}

// Every two worlds can see a common world.
inline bool is_directed(const Frame& fr) {
  for (std::size_t u = 0; u < fr.size(); ++u)
    for (std::size_t v = u; v < fr.size(); ++v)
      if ((fr.successors(u) & fr.successors(v)) == 0) return false;
  return true;
}

inline bool is_complete_reflexive(const Frame& fr) {
  for (std::size_t u = 0; u < fr.size(); ++u)
    if (fr.successors(u) != fr.full_mask()) return false;
  return fr.size() > 0;
}

inline void reflexive_transitive_close(Frame& fr) {
  const std::size_t n = fr.size();
  for (std::size_t w = 0; w < n; ++w) fr.add_edge(w, w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (fr.edge(i, k))
        for (std::size_t j = 0; j < n; ++j)
          if (fr.edge(k, j)) fr.add_edge(i, j);
}

// ---------------------------------------------------------------------------
// Cluster quotient of a pre-order: worlds u, v collapse when u R v and v R u.
// Classes are numbered by their smallest member and named after it.

struct QuotientResult {
  Frame frame;
  std::vector<std::size_t> cls;  // world index -> class index
};

inline QuotientResult quotient(const Frame& fr) {
  if (!is_preorder(fr)) throw error("quotient requires a pre-order (reflexive and transitive)");
  const std::size_t n = fr.size();
  QuotientResult out;
  out.cls.assign(n, std::size_t(-1));
  std::vector<std::size_t> reps;
  for (std::size_t u = 0; u < n; ++u) {
    if (out.cls[u] != std::size_t(-1)) continue;
    const std::size_t c = reps.size();
    reps.push_back(u);
    for (std::size_t v = u; v < n; ++v)
      if (fr.edge(u, v) && fr.edge(v, u)) out.cls[v] = c;
    out.frame.add_world(fr.name(u));
  }
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (fr.edge(reps[a], reps[b])) out.frame.add_edge(a, b);
  return out;
}

// ---------------------------------------------------------------------------
// Bisimilarity via partition refinement on the disjoint union, respecting the
// given atoms.  Computes the coarsest stable partition, so two points are
// related iff some bisimulation relates them.

inline bool bisimilar(const Model& ma, std::size_t pa, const Model& mb, std::size_t pb,
                      const std::set<std::string>& respect) {
  if (pa >= ma.frame.size() || pb >= mb.frame.size()) throw error("world index out of range");
  const std::size_t na = ma.frame.size(), nb = mb.frame.size(), n = na + nb;
  std::vector<std::vector<int>> succ(n);
  for (std::size_t w = 0; w < na; ++w) {
    std::uint64_t rest = ma.frame.successors(w);
    while (rest) {
      succ[w].push_back(std::countr_zero(rest));
      rest &= rest - 1;
    }
  }
  for (std::size_t w = 0; w < nb; ++w) {
    std::uint64_t rest = mb.frame.successors(w);
    while (rest) {
      succ[na + w].push_back(int(na) + std::countr_zero(rest));
      rest &= rest - 1;
    }
  }
  auto atom_sig = [&](std::size_t s) {
    std::vector<bool> sig;
    for (const auto& a : respect)
      sig.push_back(s < na ? ma.holds(a, s) : mb.holds(a, s - na));
    return sig;
  };
  std::vector<int> block(n);
  {
    std::map<std::vector<bool>, int> ids;
    for (std::size_t s = 0; s < n; ++s)
      block[s] = ids.emplace(atom_sig(s), int(ids.size())).first->second;
  }
  for (;;) {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<int> sb;
      for (int t : succ[s]) sb.push_back(block[t]);
      std::sort(sb.begin(), sb.end());
      sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
      next[s] = ids.emplace(std::make_pair(block[s], std::move(sb)), int(ids.size())).first->second;
    }
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) changed |= next[s] != block[s];
    block = std::move(next);
    if (!changed) break;
  }
  return block[pa] == block[na + pb];
}

// ---------------------------------------------------------------------------
// Exhaustive validity check on one frame.  Valuations are enumerated in
// lexicographic order of the bit string indexed by (atom name ascending,
// world index ascending); the reported witness is the first falsifying
// valuation and, within it, the lowest world, independent of thread count.

struct SearchLimits {
  std::uint64_t max_valuations = std::uint64_t(1) << 24;
  int jobs = 1;
};

struct ValidityReport {
  bool valid = true;
  Model witness;  // frame + falsifying valuation when !valid
  std::size_t witness_world = 0;
  std::uint64_t valuations_examined = 0;
};

namespace detail {

// Flattened evaluation program; shared subtrees collapse to one instruction.
struct Prog {
  struct Ins {
    Kind op;
    int a = -1, b = -1;
    int slot = -1;  // Atom: index into the sorted atom list
  };
  std::vector<Ins> code;
  std::vector<std::string> atom_names;
};

inline int compile_rec(const Formula& f, Prog& p,
                       std::unordered_map<const void*, int>& memo,
                       const std::map<std::string, int>& slots) {
  auto it = memo.find(f.id());
  if (it != memo.end()) return it->second;
  Prog::Ins ins;
  ins.op = f.kind();
  switch (f.kind()) {
    case Kind::Atom: ins.slot = slots.at(f.atom_name()); break;
    case Kind::Top:
    case Kind::Bot: break;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond: ins.a = compile_rec(f.child(), p, memo, slots); break;
    default:
      ins.a = compile_rec(f.left(), p, memo, slots);
      ins.b = compile_rec(f.right(), p, memo, slots);
      break;
  }
  p.code.push_back(ins);
  const int idx = int(p.code.size()) - 1;
  memo.emplace(f.id(), idx);
  return idx;
}

inline Prog compile(const Formula& f) {
  Prog p;
  std::map<std::string, int> slots;
  for (const auto& a : atoms(f)) slots.emplace(a, int(slots.size()));
  for (const auto& [name, idx] : slots) {
    (void)idx;
    p.atom_names.push_back(name);
  }
  std::unordered_map<const void*, int> memo;
  compile_rec(f, p, memo, slots);
  return p;
}

inline std::uint64_t run(const Prog& p, const Frame& fr, const std::vector<std::uint64_t>& atoms_v,
                         std::vector<std::uint64_t>& regs) {
  const std::uint64_t full = fr.full_mask();
  const std::size_t n = fr.size();
  for (std::size_t i = 0; i < p.code.size(); ++i) {
    const auto& ins = p.code[i];
    std::uint64_t r = 0;
    switch (ins.op) {
      case Kind::Atom: r = atoms_v[ins.slot]; break;
      case Kind::Top: r = full; break;
      case Kind::Bot: r = 0; break;
      case Kind::Not: r = ~regs[ins.a] & full; break;
      case Kind::And: r = regs[ins.a] & regs[ins.b]; break;
      case Kind::Or: r = regs[ins.a] | regs[ins.b]; break;
      case Kind::Implies: r = (~regs[ins.a] | regs[ins.b]) & full; break;
      case Kind::Iff: r = ~(regs[ins.a] ^ regs[ins.b]) & full; break;
      case Kind::Box: {
        const std::uint64_t body = regs[ins.a];
        for (std::size_t w = 0; w < n; ++w)
          if ((fr.successors(w) & ~body & full) == 0) r |= std::uint64_t(1) << w;
        break;
      }
      case Kind::Diamond: {
        const std::uint64_t body = regs[ins.a];
        for (std::size_t w = 0; w < n; ++w)
          if (fr.successors(w) & body) r |= std::uint64_t(1) << w;
        break;
      }
    }
    regs[i] = r;
  }
  return regs[p.code.size() - 1];
}

}  // namespace detail

inline ValidityReport frame_valid(const Frame& fr, const Formula& f, const SearchLimits& lim = {}) {
  if (fr.size() == 0) throw error("frame_valid requires at least one world");
  const detail::Prog prog = detail::compile(f);
  const std::size_t a = prog.atom_names.size(), k = fr.size();
  const std::size_t bits = a * k;
  if (bits >= 64 || (std::uint64_t(1) << bits) > lim.max_valuations)
    throw budget_error("frame_valid: 2^(" + std::to_string(a) + "*" + std::to_string(k) +
                       ") valuations exceed the budget of " + std::to_string(lim.max_valuations));
  const std::uint64_t total = std::uint64_t(1) << bits;
  const std::uint64_t full = fr.full_mask();

  // Within one atom's k-bit slice, world 0 is the most significant bit.
  std::vector<std::uint64_t> rev;
  const bool use_table = k > 0 && k <= 16;
  if (use_table) {
    rev.assign(std::size_t(1) << k, 0);
    for (std::uint64_t s = 0; s < rev.size(); ++s) {
      std::uint64_t m = 0;
      for (std::size_t w = 0; w < k; ++w)
        if ((s >> (k - 1 - w)) & 1) m |= std::uint64_t(1) << w;
      rev[s] = m;
    }
  }
  auto masks_of = [&](std::uint64_t v, std::vector<std::uint64_t>& out) {
    for (std::size_t i = 0; i < a; ++i) {
      const std::uint64_t slice = (v >> (bits - (i + 1) * k)) & ((std::uint64_t(1) << k) - 1);
      out[i] = use_table ? rev[slice] : [&] {
        std::uint64_t m = 0;
        for (std::size_t w = 0; w < k; ++w)
          if ((slice >> (k - 1 - w)) & 1) m |= std::uint64_t(1) << w;
        return m;
      }();
    }
  };

  using Hit = std::optional<std::uint64_t>;  // first falsifying valuation in a range
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) -> Hit {
    std::vector<std::uint64_t> atom_masks(a), regs(prog.code.size());
    for (std::uint64_t v = lo; v < hi; ++v) {
      masks_of(v, atom_masks);
      if (detail::run(prog, fr, atom_masks, regs) != full) return v;
    }
    return std::nullopt;
  };

  Hit hit;
  const int jobs = lim.jobs > 1 ? int(std::min<std::uint64_t>(lim.jobs, total)) : 1;
  if (jobs <= 1 || k == 0) {
    hit = scan(0, total);
  } else {
    std::vector<Hit> hits(jobs);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        const std::uint64_t lo = chunk * t, hi = std::min(total, lo + chunk);
        if (lo < hi) hits[t] = scan(lo, hi);
      });
    for (auto& th : pool) th.join();
    for (const Hit& h : hits)
      if (h && (!hit || *h < *hit)) hit = h;
  }

  ValidityReport rep;
  if (!hit) {
    rep.valid = true;
    rep.valuations_examined = total;
    return rep;
  }
  rep.valid = false;
  rep.valuations_examined = *hit + 1;  // count as if scanned sequentially
  rep.witness.frame = fr;
  std::vector<std::uint64_t> atom_masks(a);
  masks_of(*hit, atom_masks);
  for (std::size_t i = 0; i < a; ++i)
    if (atom_masks[i]) rep.witness.valuation[prog.atom_names[i]] = atom_masks[i];
  std::vector<std::uint64_t> regs(prog.code.size());
  const std::uint64_t t = detail::run(prog, fr, atom_masks, regs);
  rep.witness_world = std::countr_zero(~t & full);
  return rep;
}

// ---------------------------------------------------------------------------
// Finite poset helpers on successor-mask vectors (le[i] = up-set of i).
// Used for the cluster quotients of pre-orders.

namespace detail {

struct PosetView {
  const std::vector<std::uint64_t>& le;
  std::size_t n;

  std::uint64_t full() const {
    return n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1;
  }
  bool leq(std::size_t a, std::size_t b) const { return (le[a] >> b) & 1; }
  std::uint64_t up(std::size_t a) const { return le[a]; }
  std::uint64_t down(std::size_t a) const {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (leq(i, a)) d |= std::uint64_t(1) << i;
    return d;
  }
  std::optional<std::size_t> greatest() const {
    std::uint64_t acc = full();
    for (std::size_t i = 0; i < n; ++i) acc &= le[i];
    if (!acc) return std::nullopt;
    return std::size_t(std::countr_zero(acc));
  }
  std::optional<std::size_t> least() const {
    for (std::size_t i = 0; i < n; ++i)
      if (le[i] == full()) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> join(std::size_t a, std::size_t b) const {
    const std::uint64_t ub = up(a) & up(b);
    std::uint64_t rest = ub;
    while (rest) {
      const std::size_t z = std::countr_zero(rest);
      rest &= rest - 1;
      if ((ub & ~le[z]) == 0) return z;  // z below every upper bound
    }
    return std::nullopt;
  }
  std::optional<std::size_t> meet(std::size_t a, std::size_t b) const {
    const std::uint64_t lb = down(a) & down(b);
    std::uint64_t rest = lb;
    while (rest) {
      const std::size_t z = std::countr_zero(rest);
      rest &= rest - 1;
      if ((lb & ~down(z)) == 0) return z;  // z above every lower bound
    }
    return std::nullopt;
  }
  bool is_chain() const {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (!leq(a, b) && !leq(b, a)) return false;
    return true;
  }
  bool is_lattice() const {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        if (!join(a, b) || !meet(a, b)) return false;
    return n > 0;
  }
  // Tree: least element exists and the predecessors of any node form a chain.
  bool is_rooted_tree() const {
    if (n == 0) return true;
    if (!least()) return false;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t d = down(j);
      std::uint64_t r1 = d;
      while (r1) {
        const std::size_t x = std::countr_zero(r1);
        r1 &= r1 - 1;
        std::uint64_t r2 = r1;
        while (r2) {
          const std::size_t y = std::countr_zero(r2);
          r2 &= r2 - 1;
          if (!leq(x, y) && !leq(y, x)) return false;
        }
      }
    }
    return true;
  }
  // Baled tree: a greatest node whose removal leaves a (possibly empty) tree.
  bool is_baled_tree() const {
    const auto g = greatest();
    if (!g) return false;
    if (n == 1) return true;
    std::vector<std::uint64_t> sub;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
      if (i != *g) keep.push_back(i);
    for (std::size_t i : keep) {
      std::uint64_t row = 0;
      for (std::size_t jj = 0; jj < keep.size(); ++jj)
        if (leq(i, keep[jj])) row |= std::uint64_t(1) << jj;
      sub.push_back(row);
    }
    return PosetView{sub, keep.size()}.is_rooted_tree();
  }
  // Boolean algebra: a lattice isomorphic to the powerset of its atoms, with
  // distributivity and complementation checked directly as well.
  bool is_boolean_algebra() const {
    if (!is_lattice()) return false;
    const std::size_t bottom = *least(), topn = *greatest();
    std::vector<std::size_t> at;
    for (std::size_t x = 0; x < n; ++x)
      if (x != bottom && down(x) == ((std::uint64_t(1) << x) | (std::uint64_t(1) << bottom)))
        at.push_back(x);
    if (at.size() >= 32 || n != (std::size_t(1) << at.size())) return false;
    std::vector<std::size_t> image;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << at.size()); ++s) {
      std::size_t j = bottom;
      for (std::size_t i = 0; i < at.size(); ++i)
        if ((s >> i) & 1) {
          auto nj = join(j, at[i]);
          if (!nj) return false;
          j = *nj;
        }
      image.push_back(j);
    }
    for (std::uint64_t s = 0; s < image.size(); ++s)
      for (std::uint64_t t = 0; t < image.size(); ++t)
        if (((s & ~t) == 0) != leq(image[s], image[t])) return false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          if (meet(x, *join(y, z)) != join(*meet(x, y), *meet(x, z))) return false;
    for (std::size_t x = 0; x < n; ++x) {
      bool has = false;
      for (std::size_t y = 0; y < n && !has; ++y)
        has = meet(x, y) == bottom && join(x, y) == topn;
      if (!has) return false;
    }
    return true;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Frame enumeration up to isomorphism.  The canonical form of a frame is the
// minimum, over all world permutations, of its row-major adjacency bits;
// frames are yielded relabelled to canonical form, ordered by world count and
// then by canonical code, with worlds named w0, w1, ...

enum class FrameClass : unsigned char {
  All, Transitive, Preorder, DirectedPreorder, Pretree, Prelattice, BaledPretree,
  Preboolean, LinearPreorder, CompleteReflexive
};

inline const std::vector<FrameClass>& all_frame_classes() {
  static const std::vector<FrameClass> v{
      FrameClass::All,         FrameClass::Transitive, FrameClass::Preorder,
      FrameClass::DirectedPreorder, FrameClass::Pretree, FrameClass::Prelattice,
      FrameClass::BaledPretree, FrameClass::Preboolean, FrameClass::LinearPreorder,
      FrameClass::CompleteReflexive};
  return v;
}

inline std::string frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::All: return "all";
    case FrameClass::Transitive: return "transitive";
    case FrameClass::Preorder: return "preorder";
    case FrameClass::DirectedPreorder: return "directed-preorder";
    case FrameClass::Pretree: return "pretree";
    case FrameClass::Prelattice: return "prelattice";
    case FrameClass::BaledPretree: return "baled-pretree";
    case FrameClass::Preboolean: return "preboolean";
    case FrameClass::LinearPreorder: return "linear-preorder";
    case FrameClass::CompleteReflexive: return "complete-reflexive";
  }
  throw error("unknown frame class id");
}

inline std::optional<FrameClass> frame_class_by_name(std::string_view name) {
  for (FrameClass c : all_frame_classes())
    if (frame_class_name(c) == name) return c;
  return std::nullopt;
}

struct EnumLimits {
  std::size_t max_worlds_dense = 4;      // classes "all" and "transitive"
  std::size_t max_worlds_clustered = 6;  // the pre-order family
};

namespace detail {

inline std::uint64_t frame_code(const std::vector<std::uint64_t>& succ, std::size_t k,
                                const std::vector<int>& perm) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if ((succ[perm[i]] >> perm[j]) & 1) code |= std::uint64_t(1) << (i * k + j);
  return code;
}

inline std::uint64_t canonical_code(const std::vector<std::uint64_t>& succ, std::size_t k) {
  std::vector<int> perm(k);
  for (std::size_t i = 0; i < k; ++i) perm[i] = int(i);
  std::uint64_t best = frame_code(succ, k, perm);
  while (std::next_permutation(perm.begin(), perm.end()))
    best = std::min(best, frame_code(succ, k, perm));
  return best;
}

inline Frame frame_from_code(std::size_t k, std::uint64_t code) {
  Frame fr;
  for (std::size_t i = 0; i < k; ++i) fr.add_world("w" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if ((code >> (i * k + j)) & 1) fr.add_edge(i, j);
  return fr;
}

// Naturally labelled posets on c nodes: reflexive transitive antisymmetric
// relations compatible with the index order.  Every isomorphism class has at
// least one such labelling, so expanding these and deduplicating canonical
// codes covers all pre-orders.
inline const std::vector<std::vector<std::uint64_t>>& natural_posets(std::size_t c) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<std::vector<std::uint64_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(c);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) pairs.emplace_back(int(i), int(j));
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << pairs.size()); ++bits) {
    std::vector<std::uint64_t> le(c);
    for (std::size_t i = 0; i < c; ++i) le[i] = std::uint64_t(1) << i;
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if ((bits >> p) & 1) le[pairs[p].first] |= std::uint64_t(1) << pairs[p].second;
    bool ok = true;
    for (std::size_t i = 0; i < c && ok; ++i)
      for (std::size_t j = i + 1; j < c && ok; ++j)
        if ((le[i] >> j) & 1) ok = (le[j] & ~le[i]) == 0;
    if (ok) out.push_back(std::move(le));
  }
  return cache.emplace(c, std::move(out)).first->second;
}

inline bool poset_class_ok(const std::vector<std::uint64_t>& le, std::size_t c, FrameClass cls) {
  const PosetView pv{le, c};
  switch (cls) {
    case FrameClass::Preorder: return true;
    case FrameClass::DirectedPreorder: return pv.greatest().has_value();
    case FrameClass::Pretree: return pv.is_rooted_tree();
    case FrameClass::Prelattice: return pv.is_lattice();
    case FrameClass::BaledPretree: return pv.is_baled_tree();
    case FrameClass::Preboolean: return pv.is_boolean_algebra();
    case FrameClass::LinearPreorder: return pv.is_chain();
    case FrameClass::CompleteReflexive: return c == 1;
    default: throw error("dense class in clustered enumeration");
  }
}

inline void compositions(std::size_t k, std::size_t parts,
                         std::vector<std::size_t>& cur,
                         const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (parts == 1) {
    cur.push_back(k);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t first = 1; first + (parts - 1) <= k; ++first) {
    cur.push_back(first);
    compositions(k - first, parts - 1, cur, fn);
    cur.pop_back();
  }
}

}  // namespace detail

inline std::vector<Frame> enumerate_frames(std::size_t n, FrameClass cls,
                                           const EnumLimits& lim = {}) {
  const bool dense = cls == FrameClass::All || cls == FrameClass::Transitive;
  const std::size_t cap = dense ? lim.max_worlds_dense : lim.max_worlds_clustered;
  if (n > cap)
    throw budget_error("enumerate_frames: " + std::to_string(n) + " worlds exceeds the " +
                       std::string(dense ? "dense" : "clustered") + " budget of " +
                       std::to_string(cap));

  static std::mutex mu;
  static std::map<std::pair<std::size_t, FrameClass>, std::vector<Frame>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, cls});
    if (it != cache.end()) return it->second;
  }

  std::vector<Frame> result;
  for (std::size_t k = 1; k <= n; ++k) {
    std::set<std::uint64_t> codes;
    if (dense) {
      std::vector<std::uint64_t> succ(k);
      for (std::uint64_t rel = 0; rel < (std::uint64_t(1) << (k * k)); ++rel) {
        for (std::size_t i = 0; i < k; ++i)
          succ[i] = (rel >> (i * k)) & ((std::uint64_t(1) << k) - 1);
        if (cls == FrameClass::Transitive) {
          bool ok = true;
          for (std::size_t u = 0; u < k && ok; ++u) {
            std::uint64_t rest = succ[u];
            while (rest && ok) {
              const std::size_t v = std::countr_zero(rest);
              rest &= rest - 1;
              ok = (succ[v] & ~succ[u]) == 0;
            }
          }
          if (!ok) continue;
        }
        codes.insert(detail::canonical_code(succ, k));
      }
    } else {
      for (std::size_t c = 1; c <= k; ++c) {
        for (const auto& le : detail::natural_posets(c)) {
          if (!detail::poset_class_ok(le, c, cls)) continue;
          std::vector<std::size_t> cur;
          detail::compositions(k, c, cur, [&](const std::vector<std::size_t>& sizes) {
            std::vector<std::size_t> cluster_of;
            for (std::size_t ci = 0; ci < c; ++ci)
              for (std::size_t s = 0; s < sizes[ci]; ++s) cluster_of.push_back(ci);
            std::vector<std::uint64_t> succ(k, 0);
            for (std::size_t u = 0; u < k; ++u)
              for (std::size_t v = 0; v < k; ++v)
                if ((le[cluster_of[u]] >> cluster_of[v]) & 1) succ[u] |= std::uint64_t(1) << v;
            codes.insert(detail::canonical_code(succ, k));
          });
        }
      }
    }
    for (std::uint64_t code : codes) result.push_back(detail::frame_from_code(k, code));
  }

  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::make_pair(n, cls), std::move(result)).first->second;
}

// ---------------------------------------------------------------------------
// Frame/model files.  Directives: "world ID", "edge ID ID", "val ATOM ID...",
// "point ID"; '#' starts a comment.  The relation is written out in full --
// nothing is closed implicitly.

struct ModelFile {
  Model model;
  std::optional<std::size_t> point;
};

namespace detail {
inline bool valid_atom_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return s != "true" && s != "false";
}
}  // namespace detail

inline ModelFile read_model_file(std::istream& in, const std::string& path) {
  ModelFile out;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> error {
    return error(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string> tok;
    std::string cur;
    for (char ch : line) {
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        if (!cur.empty()) tok.push_back(std::exchange(cur, {}));
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) tok.push_back(cur);
    if (tok.empty()) continue;
    const std::string& d = tok[0];
    auto world_of = [&](const std::string& id) {
      auto w = out.model.frame.find(id);
      if (!w) throw fail("unknown world '" + id + "'");
      return *w;
    };
    if (d == "world") {
      if (tok.size() != 2) throw fail("world takes one identifier");
      if (out.model.frame.find(tok[1])) throw fail("duplicate world '" + tok[1] + "'");
      out.model.frame.add_world(tok[1]);
    } else if (d == "edge") {
      if (tok.size() != 3) throw fail("edge takes two world identifiers");
      out.model.frame.add_edge(world_of(tok[1]), world_of(tok[2]));
    } else if (d == "val") {
      if (tok.size() < 2) throw fail("val takes an atom and a world list");
      if (!detail::valid_atom_name(tok[1])) throw fail("invalid atom name '" + tok[1] + "'");
      for (std::size_t i = 2; i < tok.size(); ++i)
        out.model.make_true(tok[1], world_of(tok[i]));
    } else if (d == "point") {
      if (tok.size() != 2) throw fail("point takes one world identifier");
      if (out.point) throw fail("point declared twice");
      out.point = world_of(tok[1]);
    } else {
      throw fail("unknown directive '" + d + "'");
    }
  }
  return out;
}

inline void write_model_file(std::ostream& out, const Model& m,
                             std::optional<std::size_t> point = std::nullopt) {
  const Frame& fr = m.frame;
  for (std::size_t w = 0; w < fr.size(); ++w) out << "world " << fr.name(w) << "\n";
  for (std::size_t u = 0; u < fr.size(); ++u)
    for (std::size_t v = 0; v < fr.size(); ++v)
      if (fr.edge(u, v)) out << "edge " << fr.name(u) << " " << fr.name(v) << "\n";
  for (const auto& [atom_name, mask] : m.valuation) {
    if (!mask) continue;
    out << "val " << atom_name;
    for (std::size_t w = 0; w < fr.size(); ++w)
      if ((mask >> w) & 1) out << " " << fr.name(w);
    out << "\n";
  }
  if (point) out << "point " << fr.name(*point) << "\n";
}

}  // namespace mfw
