#pragma once

// Graph constructions: restriction, admissible-pair quotients, finite
// approximating graphs, the ideal graph of a hereditary saturated set, the
// doubled-return-edge set H0, and depth-truncated desingularization.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lpa/conditions.hpp"
#include "lpa/graph.hpp"
#include "lpa/lattice.hpp"

namespace lpa {

/// Restriction to the complement of H: vertices outside H, bundles whose
/// target lies outside H.  Heredity of H guarantees no kept bundle starts
/// inside H.
inline Graph restrict_graph(const Graph& g, const VertexSet& H) {
  require_hereditary_saturated(g, H, "restrict");
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!H.test(v)) vertices.push_back(g.vertex_name(v));
  std::vector<Bundle> bundles;
  for (std::size_t b = 0; b < g.bundles().size(); ++b)
    if (!H.test(g.dst_index(b))) bundles.push_back(g.bundle(b));
  return Graph::make(std::move(vertices), std::move(bundles));
}

struct QuotientGraph {
  Graph graph;
  /// Copies introduced for breaking vertices not in B: sink v' -> v.
  std::map<std::string, std::string> vertex_origin;
  /// Parallel bundle copies: e' -> e.
  std::map<std::string, std::string> bundle_origin;
};

/// Quotient by the admissible pair (H, B): the restriction, plus one new
/// sink v' for each breaking vertex v outside B and a parallel copy e' into
/// v' of every kept bundle targeting v.  With B = B_H this is exactly the
/// restriction.
inline QuotientGraph quotient(const Graph& g, const VertexSet& H,
                              const VertexSet& B) {
  VertexSet bh = breaking_vertices(g, H);
  if ((B & ~bh).any())
    throw ValidationError("quotient: B is not a subset of B_H");
  VertexSet copies = bh & ~B;

  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (!H.test(v)) vertices.push_back(g.vertex_name(v));
  std::vector<Bundle> bundles;
  for (std::size_t b = 0; b < g.bundles().size(); ++b)
    if (!H.test(g.dst_index(b))) bundles.push_back(g.bundle(b));

  QuotientGraph q;
  for (std::size_t v = copies.find_first(); v != VertexSet::npos;
       v = copies.find_next(v)) {
    std::string copy = g.vertex_name(v) + "'";
    q.vertex_origin[copy] = g.vertex_name(v);
    vertices.push_back(copy);
    for (std::size_t b = 0; b < g.bundles().size(); ++b) {
      if (g.dst_index(b) != v || H.test(g.dst_index(b))) continue;
      const Bundle& e = g.bundle(b);
      std::string copy_id = e.id + "'";
      q.bundle_origin[copy_id] = e.id;
      bundles.push_back(Bundle{copy_id, e.src, copy, e.mult});
    }
  }
  q.graph = Graph::make(std::move(vertices), std::move(bundles));
  return q;
}

/// Finite approximating graph for a finite selection G0 of vertices and G1
/// of concrete edges with r(G1) inside G0.  Vertices are the chosen edges
/// plus the chosen vertices that are sinks or still emit an unselected
/// concrete edge (an omega bundle always has one); edges connect e to x
/// whenever e's range equals x's source, a chosen vertex being its own
/// source.  All multiplicities are one.
inline Graph approx_graph(const Graph& g, const VertexSet& G0,
                          const std::vector<ConcreteEdge>& G1) {
  // validate the selection
  std::vector<std::pair<std::size_t, ConcreteEdge>> sel;  // (bundle, edge)
  for (const ConcreteEdge& e : G1) {
    std::size_t b = g.resolve_edge(e);
    if (!G0.test(g.dst_index(b)))
      throw ValidationError("approx_graph: range of " + edge_token(e) +
                            " is not a chosen vertex");
    sel.push_back({b, e});
  }
  std::sort(sel.begin(), sel.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());

  // which chosen vertices stay as (sink) vertices of E_G
  std::vector<std::uint64_t> picked(g.bundles().size(), 0);
  for (const auto& [b, e] : sel) picked[b] += 1;
  VertexSet kept = g.empty_set();
  for (std::size_t v = G0.find_first(); v != VertexSet::npos;
       v = G0.find_next(v)) {
    if (g.is_sink(v)) {
      kept.set(v);
      continue;
    }
    Multiplicity total = g.out_degree(v);
    std::uint64_t chosen = 0;
    for (std::size_t b : g.out_bundles(v)) chosen += picked[b];
    if (total.is_omega() || chosen < total.count()) kept.set(v);
  }

  std::vector<std::string> vertices;
  std::vector<Bundle> bundles;
  for (const auto& [b, e] : sel) vertices.push_back(edge_token(e));
  for (std::size_t v = kept.find_first(); v != VertexSet::npos;
       v = kept.find_next(v))
    vertices.push_back(g.vertex_name(v));

  for (const auto& [b, e] : sel) {
    std::size_t r = g.dst_index(b);
    std::string from = edge_token(e);
    for (const auto& [b2, f] : sel)
      if (g.src_index(b2) == r)
        bundles.push_back(Bundle{"(" + from + "," + edge_token(f) + ")", from,
                                 edge_token(f), Multiplicity(1)});
    if (kept.test(r))
      bundles.push_back(Bundle{"(" + from + "," + g.vertex_name(r) + ")",
                               from, g.vertex_name(r), Multiplicity(1)});
  }
  return Graph::make(std::move(vertices), std::move(bundles));
}

struct TowerStage {
  VertexSet g0;
  std::vector<ConcreteEdge> g1;
  Graph approx;
};

/// Increasing selection chain exhausting the graph: stage i holds every
/// vertex, every concrete edge of the finite bundles, and the first i edges
/// of each omega bundle, together with the approximating graph it induces.
inline std::vector<TowerStage> approx_tower(const Graph& g,
                                            std::size_t steps) {
  if (steps == 0) throw ValidationError("approx_tower: steps must be >= 1");
  std::vector<TowerStage> out;
  for (std::size_t i = 1; i <= steps; ++i) {
    TowerStage stage;
    stage.g0 = g.full_set();
    for (const Bundle& b : g.bundles()) {
      std::uint64_t take = b.mult.is_omega() ? i : b.mult.count();
      for (std::uint64_t k = 0; k < take; ++k)
        stage.g1.push_back(ConcreteEdge{b.id, k});
    }
    stage.approx = approx_graph(g, stage.g0, stage.g1);
    out.push_back(std::move(stage));
  }
  return out;
}

/// Finite ideal graph of a nonempty hereditary saturated H: vertices are H
/// plus the paths entering H (each path vertex emitting one edge onto its
/// range), edges are the bundles sourced in H plus those path edges.
struct IdealGraph {
  Graph graph;
  std::vector<Path> entering_paths;  // the path vertices, in id order
};

/// Why the path set F_E(H) is infinite.
struct IdealGraphInfinite {
  std::optional<Cycle> cycle_witness;        // cycle outside H reaching H
  std::optional<std::string> omega_bundle;   // omega bundle feeding into H
};

using FinitenessCertificate = std::variant<IdealGraph, IdealGraphInfinite>;

/// Decides finiteness of the set of paths entering H and, when finite,
/// builds the ideal graph.  The path set is infinite iff a cycle outside H
/// reaches H (pumping) or an omega bundle outside H has its target in H or
/// able to reach H (one path per index).
inline FinitenessCertificate ideal_graph(
    const Graph& g, const VertexSet& H,
    std::size_t max_paths = kDefaultMaxLattice) {
  require_hereditary_saturated(g, H, "ideal_graph");
  if (H.none()) throw ValidationError("ideal_graph: H must be nonempty");

  const VertexSet coreach = coreachable_to(g, H);
  const VertexSet R = coreach & ~H;  // outside H, reaching H

  // cycle outside H that reaches H: any cycle in the subgraph induced on R
  {
    std::vector<std::string> vs = set_names(g, R);
    std::vector<Bundle> bs;
    for (std::size_t b = 0; b < g.bundles().size(); ++b)
      if (R.test(g.src_index(b)) && R.test(g.dst_index(b)))
        bs.push_back(g.bundle(b));
    Graph induced = Graph::make(std::move(vs), std::move(bs));
    auto cycles = find_cycles(induced);
    if (!cycles.empty()) {
      // re-anchor the witness in g (tokens are shared, so it checks there)
      Cycle w = make_cycle(g, cycles.front().path);
      return IdealGraphInfinite{w, std::nullopt};
    }
  }
  for (std::size_t b = 0; b < g.bundles().size(); ++b) {
    const Bundle& e = g.bundle(b);
    if (!e.mult.is_omega() || H.test(g.src_index(b))) continue;
    if (H.test(g.dst_index(b)) || R.test(g.dst_index(b)))
      return IdealGraphInfinite{std::nullopt, e.id};
  }

  // enumerate the entering paths; the induced subgraph on R is acyclic and
  // every usable bundle is finite, so this terminates
  std::vector<Path> paths;
  std::vector<std::pair<std::size_t, ConcreteEdge>> stack;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (!R.test(u)) continue;
    // DFS over concrete edges from u
    std::vector<ConcreteEdge> prefix;
    struct Frame {
      std::size_t vertex;
      std::size_t bpos = 0;
      std::uint64_t idx = 0;
    };
    std::vector<Frame> frames{{u}};
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& outs = g.out_bundles(f.vertex);
      if (f.bpos == outs.size()) {
        frames.pop_back();
        if (!prefix.empty()) prefix.pop_back();
        continue;
      }
      std::size_t b = outs[f.bpos];
      std::size_t t = g.dst_index(b);
      if (!H.test(t) && !R.test(t)) {
        ++f.bpos;
        continue;
      }
      const Multiplicity m = g.bundle(b).mult;
      if (f.idx >= m.count()) {  // non-omega guaranteed above
        ++f.bpos;
        f.idx = 0;
        continue;
      }
      ConcreteEdge e{g.bundle(b).id, f.idx};
      ++f.idx;
      if (H.test(t)) {
        Path p{g.vertex_name(u), prefix};
        p.edges.push_back(e);
        paths.push_back(std::move(p));
        if (paths.size() > max_paths)
          throw SizeGuardError("entering-path count exceeds size bound " +
                               std::to_string(max_paths));
      } else {
        prefix.push_back(e);
        frames.push_back(Frame{t});
      }
    }
  }

  IdealGraph out;
  std::vector<std::string> vertices = set_names(g, H);
  std::vector<Bundle> bundles;
  for (std::size_t b = 0; b < g.bundles().size(); ++b)
    if (H.test(g.src_index(b))) bundles.push_back(g.bundle(b));
  for (const Path& p : paths) {
    std::string pid = path_str(p);
    vertices.push_back(pid);
    bundles.push_back(
        Bundle{"~" + pid, pid, path_range(g, p), Multiplicity(1)});
  }
  std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
    return path_str(a) < path_str(b);
  });
  out.entering_paths = std::move(paths);
  out.graph = Graph::make(std::move(vertices), std::move(bundles));
  return out;
}

struct H0Result {
  VertexSet h0;       // vertices with two distinct returning edges
  VertexSet closure;  // its hereditary saturated closure
};

/// H0 holds the vertices emitting two distinct concrete edges (different
/// bundles, or two indices of one bundle of multiplicity >= 2) whose targets
/// both reach back to the vertex.
inline H0Result compute_H0(const Graph& g) {
  H0Result r{g.empty_set(), g.empty_set()};
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexSet self = g.empty_set();
    self.set(v);
    VertexSet coreach = coreachable_to(g, self);
    Multiplicity returning(0);
    for (std::size_t b : g.out_bundles(v))
      if (coreach.test(g.dst_index(b))) returning += g.bundle(b).mult;
    if (returning.is_omega() || returning.count() >= 2) r.h0.set(v);
  }
  r.closure = closure_set(g, r.h0);
  return r;
}

struct Desingularization {
  Graph graph;
  std::size_t depth = 0;
  /// Tail ends that are sinks only because the tail was cut at `depth`.
  std::vector<std::string> truncation_sinks;
  /// New tail vertex -> original vertex.
  std::map<std::string, std::string> tail_origin;
  /// Concrete edges of infinite emitters that fell past the tail end.
  std::size_t dropped_edges = 0;
};

/// Depth-d truncation of the row-finite sink-free desingularization: every
/// sink and infinite emitter grows a tail of d vertices, and an infinite
/// emitter's concrete edges (finite bundles first by id, then omega indices
/// 0..d per bundle) are re-sourced one per tail position.
inline Desingularization desingularize(const Graph& g, std::size_t depth) {
  Desingularization out;
  out.depth = depth;
  std::vector<std::string> vertices(g.vertex_names());
  std::vector<Bundle> bundles;

  auto add_tail = [&](std::size_t v) {
    std::vector<std::string> tail{g.vertex_name(v)};
    for (std::size_t j = 1; j <= depth; ++j) {
      std::string tv = g.vertex_name(v) + "~" + std::to_string(j);
      out.tail_origin[tv] = g.vertex_name(v);
      vertices.push_back(tv);
      bundles.push_back(Bundle{g.vertex_name(v) + "~e" + std::to_string(j),
                               tail.back(), tv, Multiplicity(1)});
      tail.push_back(tv);
    }
    return tail;
  };

  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.is_sink(v)) {
      auto tail = add_tail(v);
      out.truncation_sinks.push_back(tail.back());
      continue;
    }
    if (!g.is_infinite_emitter(v)) {
      for (std::size_t b : g.out_bundles(v)) bundles.push_back(g.bundle(b));
      continue;
    }
    auto tail = add_tail(v);
    // deterministic edge listing: finite bundles (id order, index order),
    // then omega bundles (id order, indices 0..depth)
    std::vector<ConcreteEdge> listing;
    for (std::size_t b : g.out_bundles(v)) {
      const Bundle& e = g.bundle(b);
      if (e.mult.is_omega()) continue;
      for (std::uint64_t k = 0; k < e.mult.count(); ++k)
        listing.push_back(ConcreteEdge{e.id, k});
    }
    for (std::size_t b : g.out_bundles(v)) {
      const Bundle& e = g.bundle(b);
      if (!e.mult.is_omega()) continue;
      for (std::uint64_t k = 0; k <= depth; ++k)
        listing.push_back(ConcreteEdge{e.id, k});
    }
    for (std::size_t j = 0; j < listing.size(); ++j) {
      if (j >= tail.size()) {
        out.dropped_edges += listing.size() - j;
        break;
      }
      const ConcreteEdge& e = listing[j];
      bundles.push_back(Bundle{edge_token(e), tail[j],
                               g.bundle(g.bundle_index(e.bundle)).dst,
                               Multiplicity(1)});
    }
  }
  out.graph = Graph::make(std::move(vertices), std::move(bundles));
  return out;
}

}  // namespace lpa
