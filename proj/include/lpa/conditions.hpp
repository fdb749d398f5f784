#pragma once

// Path-based decision procedures: reachability, simple closed path
// enumeration, Conditions (L) and (K), and the isolated-cycle property.
// Conditions (L)/(K) are decided structurally -- (L) through the
// out-degree-one subgraph, (K) through return-path classification -- rather
// than by enumerating closed paths, so they stay polynomial.

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "lpa/graph.hpp"

namespace lpa {

/// Forward closure of `start` under bundle adjacency (contains `start`).
inline VertexSet reachable_from(const Graph& g, const VertexSet& start) {
  VertexSet seen = start;
  std::deque<std::size_t> work;
  for (std::size_t v = start.find_first(); v != VertexSet::npos;
       v = start.find_next(v))
    work.push_back(v);
  while (!work.empty()) {
    std::size_t v = work.front();
    work.pop_front();
    for (std::size_t b : g.out_bundles(v)) {
      std::size_t t = g.dst_index(b);
      if (!seen.test(t)) {
        seen.set(t);
        work.push_back(t);
      }
    }
  }
  return seen;
}

/// Vertices from which `target` is reachable (contains `target`).
inline VertexSet coreachable_to(const Graph& g, const VertexSet& target) {
  VertexSet seen = target;
  std::deque<std::size_t> work;
  for (std::size_t v = target.find_first(); v != VertexSet::npos;
       v = target.find_next(v))
    work.push_back(v);
  while (!work.empty()) {
    std::size_t v = work.front();
    work.pop_front();
    for (std::size_t b : g.in_bundles(v)) {
      std::size_t s = g.src_index(b);
      if (!seen.test(s)) {
        seen.set(s);
        work.push_back(s);
      }
    }
  }
  return seen;
}

/// True iff some path (possibly of length zero) leads from v into X.
inline bool reaches(const Graph& g, const std::string& v, const VertexSet& X) {
  std::size_t vi = g.vertex_index(v);
  if (X.test(vi)) return true;
  VertexSet start = g.empty_set();
  start.set(vi);
  return reachable_from(g, start).intersects(X);
}

inline bool reaches(const Graph& g, std::size_t v, const VertexSet& X) {
  return reaches(g, g.vertex_name(v), X);
}

/// True iff the graph has no closed path (loops included).
inline bool is_acyclic(const Graph& g) {
  enum { White, Grey, Black };
  std::vector<int> color(g.vertex_count(), White);
  // iterative DFS; a grey target is a back edge
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (vertex, next)
  for (std::size_t root = 0; root < g.vertex_count(); ++root) {
    if (color[root] != White) continue;
    color[root] = Grey;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& outs = g.out_bundles(v);
      if (next == outs.size()) {
        color[v] = Black;
        stack.pop_back();
        continue;
      }
      std::size_t t = g.dst_index(outs[next++]);
      if (color[t] == Grey) return false;
      if (color[t] == White) {
        color[t] = Grey;
        stack.push_back({t, 0});
      }
    }
  }
  return true;
}

/// All simple closed paths up to cyclic rotation, each using index 0 of the
/// bundles it traverses and rotated so the lexicographically least source
/// vertex comes first.  Output sorted by length, then by rendered form.
inline std::vector<Cycle> find_cycles(const Graph& g) {
  std::vector<Cycle> cycles;
  std::vector<bool> onpath(g.vertex_count(), false);
  std::vector<std::size_t> edge_path;

  // Cycles are anchored at their least vertex: the DFS from `start` visits
  // only vertices > start and records paths closing back at start.
  for (std::size_t start = 0; start < g.vertex_count(); ++start) {
    struct Frame {
      std::size_t vertex;
      std::size_t next = 0;
    };
    std::vector<Frame> stack{{start}};
    onpath[start] = true;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& outs = g.out_bundles(f.vertex);
      if (f.next == outs.size()) {
        onpath[f.vertex] = false;
        stack.pop_back();
        if (!edge_path.empty()) edge_path.pop_back();
        continue;
      }
      std::size_t b = outs[f.next++];
      std::size_t t = g.dst_index(b);
      if (t == start) {
        Path p{g.vertex_name(start), {}};
        for (std::size_t eb : edge_path)
          p.edges.push_back(ConcreteEdge{g.bundle(eb).id, 0});
        p.edges.push_back(ConcreteEdge{g.bundle(b).id, 0});
        cycles.push_back(Cycle{std::move(p)});
      } else if (t > start && !onpath[t]) {
        onpath[t] = true;
        edge_path.push_back(b);
        stack.push_back({t});
      }
    }
    onpath[start] = false;
  }

  std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.path.edges.size() != b.path.edges.size())
      return a.path.edges.size() < b.path.edges.size();
    return path_str(a.path) < path_str(b.path);
  });
  return cycles;
}

struct ConditionL {
  bool holds = true;
  std::optional<Cycle> witness;  // an exitless cycle when holds == false
};

/// Condition (L) fails exactly when some cycle runs entirely through
/// vertices of total out-degree one; any such cycle has no exit anywhere.
inline ConditionL condition_L(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> deg1(n, false);
  std::vector<std::size_t> succ_bundle(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    Multiplicity d = g.out_degree(v);
    if (!d.is_omega() && d.count() == 1) {
      deg1[v] = true;
      succ_bundle[v] = g.out_bundles(v)[0];
    }
  }
  // walk the functional subgraph looking for a cycle
  enum { Unseen, Active, Done };
  std::vector<int> state(n, Unseen);
  for (std::size_t v0 = 0; v0 < n; ++v0) {
    if (!deg1[v0] || state[v0] != Unseen) continue;
    std::vector<std::size_t> trail;
    std::size_t v = v0;
    while (deg1[v] && state[v] == Unseen) {
      state[v] = Active;
      trail.push_back(v);
      v = g.dst_index(succ_bundle[v]);
    }
    if (deg1[v] && state[v] == Active) {
      // cycle found: the trail suffix starting at v
      auto it = std::find(trail.begin(), trail.end(), v);
      std::vector<std::size_t> cyc(it, trail.end());
      // rotate so the least vertex leads
      auto least = std::min_element(cyc.begin(), cyc.end());
      std::rotate(cyc.begin(), least, cyc.end());
      Path p{g.vertex_name(cyc[0]), {}};
      for (std::size_t u : cyc)
        p.edges.push_back(ConcreteEdge{g.bundle(succ_bundle[u]).id, 0});
      return ConditionL{false, make_cycle(g, std::move(p))};
    }
    for (std::size_t u : trail) state[u] = Done;
  }
  return ConditionL{};
}

enum class ReturnPathClass { Zero, ExactlyOne, AtLeastTwo };

inline std::string to_string(ReturnPathClass c) {
  switch (c) {
    case ReturnPathClass::Zero: return "zero";
    case ReturnPathClass::ExactlyOne: return "exactly-one";
    default: return "at-least-two";
  }
}

/// Classifies the closed paths based at v that meet v only at their
/// endpoints.  Splitting v into an out-copy and an in-copy, the usable edges
/// are those on some out->in walk; there is exactly one return path iff that
/// edge set is a single multiplicity-one walk with no branching.
inline ReturnPathClass return_path_class(const Graph& g, std::size_t v) {
  const std::size_t n = g.vertex_count();
  // forward reach from v's out-edges, never expanding through v
  VertexSet fwd(n);
  {
    std::deque<std::size_t> work;
    for (std::size_t b : g.out_bundles(v)) {
      std::size_t t = g.dst_index(b);
      if (t != v && !fwd.test(t)) {
        fwd.set(t);
        work.push_back(t);
      }
    }
    while (!work.empty()) {
      std::size_t u = work.front();
      work.pop_front();
      for (std::size_t b : g.out_bundles(u)) {
        std::size_t t = g.dst_index(b);
        if (t != v && !fwd.test(t)) {
          fwd.set(t);
          work.push_back(t);
        }
      }
    }
  }
  // backward reach into v's in-edges, never expanding through v
  VertexSet bwd(n);
  {
    std::deque<std::size_t> work;
    for (std::size_t b : g.in_bundles(v)) {
      std::size_t s = g.src_index(b);
      if (s != v && !bwd.test(s)) {
        bwd.set(s);
        work.push_back(s);
      }
    }
    while (!work.empty()) {
      std::size_t u = work.front();
      work.pop_front();
      for (std::size_t b : g.in_bundles(u)) {
        std::size_t s = g.src_index(b);
        if (s != v && !bwd.test(s)) {
          bwd.set(s);
          work.push_back(s);
        }
      }
    }
  }

  std::vector<std::size_t> usable;
  for (std::size_t b = 0; b < g.bundles().size(); ++b) {
    std::size_t s = g.src_index(b), t = g.dst_index(b);
    bool from_ok = (s == v) || fwd.test(s);
    bool to_ok = (t == v) || bwd.test(t);
    if (from_ok && to_ok) usable.push_back(b);
  }
  if (usable.empty()) return ReturnPathClass::Zero;

  std::vector<std::size_t> out_in_S(n, 0);
  for (std::size_t b : usable) {
    const Multiplicity m = g.bundle(b).mult;
    if (m.is_omega() || m.count() >= 2) return ReturnPathClass::AtLeastTwo;
    out_in_S[g.src_index(b)] += 1;
  }
  for (std::size_t b : usable)
    if (out_in_S[g.src_index(b)] > 1) return ReturnPathClass::AtLeastTwo;
  return ReturnPathClass::ExactlyOne;
}

inline ReturnPathClass return_path_class(const Graph& g,
                                         const std::string& v) {
  return return_path_class(g, g.vertex_index(v));
}

struct ConditionK {
  bool holds = true;
  std::optional<std::string> witness;  // a vertex with exactly one return path
};

inline ConditionK condition_K(const Graph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (return_path_class(g, v) == ReturnPathClass::ExactlyOne)
      return ConditionK{false, g.vertex_name(v)};
  return ConditionK{};
}

/// True iff no vertex is the base of two or more return paths.
inline bool has_isolated_cycles(const Graph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (return_path_class(g, v) == ReturnPathClass::AtLeastTwo) return false;
  return true;
}

}  // namespace lpa
