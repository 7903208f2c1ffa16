// Bounded refutation.  For the theories whose complete finite frame classes
// are wired in below, a non-theorem falls to some finite frame of its class;
// searching those frames in a fixed order therefore refutes every
// non-theorem eventually.  The bound stays the caller's problem: a clean
// sweep up to n worlds is reported as exactly that, never as theoremhood.
#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "frameclass.hpp"
#include "kripke.hpp"

namespace mfw {

// Classes from which countermodels are drawn, per theory.  The first entry
// is the search default; only S4.2 offers genuine alternatives.  Theories
// without an entry are audit targets only: their axioms can be tested
// against any searchable theory's class, but they bind no class themselves.
inline const std::vector<FrameClass>& complete_classes(Theory t) {
  static const std::vector<FrameClass> k{FrameClass::All};
  static const std::vector<FrameClass> k4{FrameClass::Transitive};
  static const std::vector<FrameClass> s4{FrameClass::Preorder, FrameClass::Pretree};
  static const std::vector<FrameClass> s42{FrameClass::DirectedPreorder, FrameClass::Prelattice,
                                           FrameClass::BaledPretree, FrameClass::Preboolean};
  static const std::vector<FrameClass> s43{FrameClass::LinearPreorder};
  static const std::vector<FrameClass> s5{FrameClass::CompleteReflexive};
  switch (t) {
    case Theory::K: return k;
    case Theory::K4: return k4;
    case Theory::S4: return s4;
    case Theory::S4_2: return s42;
    case Theory::S4_3: return s43;
    case Theory::S5: return s5;
    default:
      throw error("theory " + theory_name(t) +
                  " binds no complete finite frame class; it is an audit target only");
  }
}

inline bool theory_searchable(Theory t) {
  switch (t) {
    case Theory::K:
    case Theory::K4:
    case Theory::S4:
    case Theory::S4_2:
    case Theory::S4_3:
    case Theory::S5: return true;
    default: return false;
  }
}

inline FrameClass search_class(Theory t, std::optional<FrameClass> choice = std::nullopt) {
  const auto& classes = complete_classes(t);
  if (!choice) return classes.front();
  for (FrameClass c : classes)
    if (c == *choice) return c;
  throw error("frame class " + frame_class_name(*choice) + " is not a complete class for " +
              theory_name(t));
}

// Search outcome.  An engaged `counter` is a countermodel: its point is the
// falsified world and its valuation the falsifying one.  Otherwise the
// verdict is only "no countermodel up to `bound` worlds" -- bounded
// evidence, not a theorem claim.  Counts cover the frames up to and
// including the winner (or all of them on a clean sweep), so reports do not
// depend on the worker count.
struct SearchReport {
  Theory theory{};
  FrameClass searched_class{};
  std::size_t bound = 0;
  std::optional<PointedModel> counter;
  std::size_t frames_examined = 0;
  std::uint64_t valuations_examined = 0;

  bool refuted() const { return counter.has_value(); }
};

inline SearchReport countermodel_search(const Formula& f, Theory theory, std::size_t max_worlds,
                                        std::optional<FrameClass> class_choice = std::nullopt,
                                        const SearchLimits& lim = {}) {
  if (max_worlds < 1) throw error("countermodel_search requires max_worlds >= 1");
  const FrameClass cls = search_class(theory, class_choice);
  const std::vector<Frame> frames = enumerate_frames(max_worlds, cls);

  SearchReport rep;
  rep.theory = theory;
  rep.searched_class = cls;
  rep.bound = max_worlds;

  // Frames are tried in enumeration order (world count, then canonical
  // code).  With several workers the frame indices are claimed in that
  // order and a worker skips indices above the best refutation seen so
  // far, so every index up to the final winner gets examined exactly once
  // and the winner is the least refuting index regardless of scheduling.
  std::vector<ValidityReport> results(frames.size());
  const SearchLimits frame_lim{lim.max_valuations, 1};
  std::size_t winner = frames.size();
  const int jobs = int(std::min<std::size_t>(std::size_t(std::max(1, lim.jobs)), frames.size()));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      results[i] = frame_valid(frames[i], f, frame_lim);
      if (!results[i].valid) {
        winner = i;
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{frames.size()};
    std::mutex err_mu;
    std::exception_ptr first_err;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= frames.size() || i > best.load()) return;
        try {
          results[i] = frame_valid(frames[i], f, frame_lim);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_err) first_err = std::current_exception();
          return;
        }
        if (!results[i].valid) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_err) std::rethrow_exception(first_err);
    winner = best.load();
  }

  if (winner == frames.size()) {
    rep.frames_examined = frames.size();
    for (const ValidityReport& r : results) rep.valuations_examined += r.valuations_examined;
    return rep;
  }
  rep.frames_examined = winner + 1;
  for (std::size_t i = 0; i <= winner; ++i)
    rep.valuations_examined += results[i].valuations_examined;
  rep.counter = PointedModel{std::move(results[winner].witness), results[winner].witness_world};
  return rep;
}

// The eight classics that hold under set-theoretic necessity readings weaker
// than they look: each is refuted over the directed pre-orders within five
// worlds, and the row keeps the minimal countermodel in search order.
struct ObservationRow {
  Axiom axiom{};
  SearchReport report;
};

inline std::vector<ObservationRow> observation_suite() {
  static const std::vector<Axiom> targets{Axiom::Five, Axiom::M,   Axiom::W5,   Axiom::Dot3,
                                          Axiom::Dm,   Axiom::Grz, Axiom::Loeb, Axiom::H};
  std::vector<ObservationRow> out;
  out.reserve(targets.size());
  for (Axiom a : targets) {
    SearchReport r = countermodel_search(axiom_formula(a), Theory::S4_2, 5);
    if (!r.refuted())
      throw error("internal: axiom " + axiom_name(a) + " survived the five-world search");
    out.push_back({a, std::move(r)});
  }
  return out;
}

// Every catalogued axiom against one theory's complete class, up to the
// bound: valid on all enumerated frames, or the first falsifying pointed
// model in search order.
struct AuditRow {
  Axiom axiom{};
  bool valid = true;
  std::optional<PointedModel> falsifier;
  std::size_t frames_examined = 0;
  std::uint64_t valuations_examined = 0;
};

inline std::vector<AuditRow> frame_class_audit(Theory theory, std::size_t max_worlds,
                                               std::optional<FrameClass> class_choice = std::nullopt,
                                               const SearchLimits& lim = {}) {
  std::vector<AuditRow> out;
  out.reserve(all_axioms().size());
  for (Axiom a : all_axioms()) {
    SearchReport r = countermodel_search(axiom_formula(a), theory, max_worlds, class_choice, lim);
    AuditRow row;
    row.axiom = a;
    row.valid = !r.refuted();
    row.falsifier = std::move(r.counter);
    row.frames_examined = r.frames_examined;
    row.valuations_examined = r.valuations_examined;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace mfw
