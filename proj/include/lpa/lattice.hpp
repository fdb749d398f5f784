#pragma once

// Hereditary-saturated machinery: staged closures, lattice enumeration by
// join saturation, breaking vertices, and admissible pairs.

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lpa/conditions.hpp"
#include "lpa/graph.hpp"

namespace lpa {

inline constexpr std::size_t kDefaultMaxLattice = std::size_t{1} << 20;

struct ClosureResult {
  VertexSet set;
  /// Stage at which each vertex entered: 0 for generators and vertices
  /// reachable from them, n >= 1 for the n-th saturation sweep, -1 if absent.
  std::vector<int> stage;
};

/// Smallest hereditary and saturated superset of X: first close forward
/// under reachability, then sweep in finite emitters whose targets all lie
/// inside, until nothing changes.
inline ClosureResult closure(const Graph& g, const VertexSet& X) {
  ClosureResult r{reachable_from(g, X),
                  std::vector<int>(g.vertex_count(), -1)};
  for (std::size_t v = r.set.find_first(); v != VertexSet::npos;
       v = r.set.find_next(v))
    r.stage[v] = 0;
  for (int sweep = 1;; ++sweep) {
    bool changed = false;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      if (r.set.test(v) || g.is_sink(v) || g.is_infinite_emitter(v)) continue;
      bool all_in = true;
      for (std::size_t b : g.out_bundles(v))
        if (!r.set.test(g.dst_index(b))) {
          all_in = false;
          break;
        }
      if (all_in) {
        r.set.set(v);
        r.stage[v] = sweep;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return r;
}

inline VertexSet closure_set(const Graph& g, const VertexSet& X) {
  return closure(g, X).set;
}

struct HSViolation {
  enum class Kind { NotHereditary, NotSaturated };
  Kind kind;
  std::string witness;  // offending bundle id / finite-emitter vertex
};

struct HSCheck {
  bool ok = true;
  std::optional<HSViolation> violation;
};

inline HSCheck is_hereditary_saturated(const Graph& g, const VertexSet& X) {
  for (std::size_t b = 0; b < g.bundles().size(); ++b)
    if (X.test(g.src_index(b)) && !X.test(g.dst_index(b)))
      return HSCheck{false, HSViolation{HSViolation::Kind::NotHereditary,
                                        g.bundle(b).id}};
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (X.test(v) || g.is_sink(v) || g.is_infinite_emitter(v)) continue;
    bool all_in = true;
    for (std::size_t b : g.out_bundles(v))
      if (!X.test(g.dst_index(b))) {
        all_in = false;
        break;
      }
    if (all_in)
      return HSCheck{false, HSViolation{HSViolation::Kind::NotSaturated,
                                        g.vertex_name(v)}};
  }
  return HSCheck{};
}

inline void require_hereditary_saturated(const Graph& g, const VertexSet& X,
                                         const char* who) {
  HSCheck c = is_hereditary_saturated(g, X);
  if (!c.ok)
    throw ValidationError(std::string(who) +
                          ": set is not hereditary and saturated (" +
                          (c.violation->kind == HSViolation::Kind::NotHereditary
                               ? "bundle " + c.violation->witness +
                                     " leaves the set"
                               : "vertex " + c.violation->witness +
                                     " violates saturation") +
                          ")");
}

/// All hereditary saturated subsets, generated as the join closure of the
/// singleton closures plus the empty set.  Join is closure-of-union, so the
/// sparse lattice is reached without scanning all 2^|V| subsets; the brute
/// force scan survives as a test oracle.  Output sorted by size, then
/// lexicographically.  Throws SizeGuardError past max_size members.
inline std::vector<VertexSet> enumerate_HE(
    const Graph& g, std::size_t max_size = kDefaultMaxLattice) {
  std::set<VertexSet> known;
  std::deque<VertexSet> work;
  auto add = [&](const VertexSet& s) {
    if (known.insert(s).second) {
      if (known.size() > max_size)
        throw SizeGuardError(
            "hereditary-saturated lattice exceeds size bound " +
            std::to_string(max_size));
      work.push_back(s);
    }
  };
  add(g.empty_set());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSet s = g.empty_set();
    s.set(v);
    add(closure_set(g, s));
  }
  while (!work.empty()) {
    VertexSet a = work.front();
    work.pop_front();
    std::vector<VertexSet> snapshot(known.begin(), known.end());
    for (const VertexSet& b : snapshot) add(closure_set(g, a | b));
  }
  std::vector<VertexSet> out(known.begin(), known.end());
  std::sort(out.begin(), out.end(), set_less);
  return out;
}

struct TrivialLattice {
  bool trivial = false;
  bool degenerate = false;  // empty graph: trivially true
};

/// Equivalent to the lattice being {empty, all}: every singleton closure
/// must already be the full vertex set.
inline TrivialLattice is_trivial_lattice(const Graph& g) {
  if (g.vertex_count() == 0) return TrivialLattice{true, true};
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSet s = g.empty_set();
    s.set(v);
    if (closure_set(g, s) != g.full_set()) return TrivialLattice{false, false};
  }
  return TrivialLattice{true, false};
}

/// Breaking vertices of H: infinite emitters outside H whose edges avoiding
/// H number at least one but only finitely many.  A vertex whose bundles all
/// land in H, or with an omega bundle avoiding H, does not qualify.
inline VertexSet breaking_vertices(const Graph& g, const VertexSet& H) {
  require_hereditary_saturated(g, H, "breaking_vertices");
  VertexSet out = g.empty_set();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (H.test(v) || !g.is_infinite_emitter(v)) continue;
    Multiplicity escaping(0);
    for (std::size_t b : g.out_bundles(v))
      if (!H.test(g.dst_index(b))) escaping += g.bundle(b).mult;
    if (!escaping.is_omega() && escaping.count() > 0) out.set(v);
  }
  return out;
}

struct AdmissiblePair {
  VertexSet H;
  VertexSet B;  // subset of breaking_vertices(g, H)
};

/// Every (H, B) with H in the lattice and B a subset of B_H, ordered by H
/// (size then lex) and, within one H, by B likewise.
inline std::vector<AdmissiblePair> admissible_pairs(
    const Graph& g, std::size_t max_count = kDefaultMaxLattice) {
  std::vector<AdmissiblePair> out;
  for (const VertexSet& H : enumerate_HE(g, max_count)) {
    VertexSet bh = breaking_vertices(g, H);
    std::vector<std::size_t> members;
    for (std::size_t v = bh.find_first(); v != VertexSet::npos;
         v = bh.find_next(v))
      members.push_back(v);
    std::vector<VertexSet> subsets;
    const std::size_t k = members.size();
    if (k >= 20)
      throw SizeGuardError("breaking-vertex subset space too large");
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      VertexSet B = g.empty_set();
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) B.set(members[i]);
      subsets.push_back(std::move(B));
    }
    std::sort(subsets.begin(), subsets.end(), set_less);
    for (VertexSet& B : subsets) {
      out.push_back(AdmissiblePair{H, std::move(B)});
      if (out.size() > max_count)
        throw SizeGuardError("admissible-pair count exceeds size bound " +
                             std::to_string(max_count));
    }
  }
  return out;
}

}  // namespace lpa
