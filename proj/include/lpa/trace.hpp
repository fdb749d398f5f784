#pragma once

// Graph traces: nonnegative vertex weightings with flow equality at finite
// emitters and subadditivity at infinite emitters.  Existence of a nonzero
// trace is decided by exact rational feasibility.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lpa/graph.hpp"
#include "lpa/rational_lp.hpp"

namespace lpa {

struct GraphTrace {
  std::vector<Rational> values;  // indexed like Graph::vertex_names()

  Rational norm() const {
    Rational s = 0;
    for (const Rational& v : values) s += v;
    return s;
  }
};

/// Exact verification against the trace axioms: values nonnegative; equality
/// at finite emitters (multiplicity-weighted); at infinite emitters every
/// omega-bundle target carries zero and the value dominates the finite part.
inline bool check_trace(const Graph& g, const GraphTrace& t) {
  if (t.values.size() != g.vertex_count()) return false;
  for (const Rational& v : t.values)
    if (v < 0) return false;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.is_sink(v)) continue;
    Rational finite_part = 0;
    bool infinite = false;
    for (std::size_t b : g.out_bundles(v)) {
      const Bundle& e = g.bundle(b);
      if (e.mult.is_omega()) {
        infinite = true;
        if (t.values[g.dst_index(b)] != 0) return false;
      } else {
        finite_part += Rational(e.mult.count()) * t.values[g.dst_index(b)];
      }
    }
    if (infinite) {
      if (t.values[v] < finite_part) return false;
    } else {
      if (t.values[v] != finite_part) return false;
    }
  }
  return true;
}

/// Searches for a nonzero trace, normalized to total weight one.  The
/// infinitely many finite-subset inequalities at an infinite emitter
/// collapse, under the bundle encoding, to "omega targets carry zero" plus
/// one slack inequality against the finite part.
inline std::optional<GraphTrace> graph_trace_exists(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return std::nullopt;

  std::vector<std::size_t> slack_of(n, 0);
  std::size_t slacks = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (g.is_infinite_emitter(v)) slack_of[v] = n + slacks++;

  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  auto new_row = [&]() -> std::vector<Rational>& {
    A.emplace_back(n + slacks, 0);
    b.emplace_back(0);
    return A.back();
  };

  VertexSet forced_zero = g.empty_set();
  for (std::size_t v = 0; v < n; ++v) {
    if (g.is_sink(v)) continue;
    if (g.is_infinite_emitter(v)) {
      auto& row = new_row();
      row[v] += 1;
      for (std::size_t bx : g.out_bundles(v)) {
        const Bundle& e = g.bundle(bx);
        if (e.mult.is_omega())
          forced_zero.set(g.dst_index(bx));
        else
          row[g.dst_index(bx)] -= Rational(e.mult.count());
      }
      row[slack_of[v]] = -1;
    } else {
      auto& row = new_row();
      row[v] += 1;
      for (std::size_t bx : g.out_bundles(v))
        row[g.dst_index(bx)] -= Rational(g.bundle(bx).mult.count());
    }
  }
  for (std::size_t v = forced_zero.find_first(); v != VertexSet::npos;
       v = forced_zero.find_next(v)) {
    auto& row = new_row();
    row[v] = 1;
  }
  {
    auto& row = new_row();
    for (std::size_t v = 0; v < n; ++v) row[v] = 1;
    b.back() = 1;
  }

  auto sol = solve_feasibility(std::move(A), std::move(b));
  if (!sol) return std::nullopt;
  GraphTrace t{std::vector<Rational>(sol->begin(), sol->begin() + n)};
  if (!check_trace(g, t) || t.norm() != 1)
    throw Error("internal: trace solution failed exact re-verification");
  return t;
}

}  // namespace lpa
