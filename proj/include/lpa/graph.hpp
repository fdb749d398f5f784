#pragma once

// Core graph representation: finitely presented directed graphs whose
// parallel edges are grouped into bundles with multiplicity in {1,2,...} or
// omega.  An omega bundle stands for countably many parallel edges, which is
// how infinite emitters are encoded while keeping the presentation finite.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace lpa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input graph or argument violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised when an enumeration would exceed its configured size bound.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Edge-bundle multiplicity: a positive integer or omega.
class Multiplicity {
 public:
  constexpr Multiplicity() : value_(1) {}
  explicit constexpr Multiplicity(std::uint64_t n) : value_(n) {}

  static constexpr Multiplicity omega() { return Multiplicity(kOmega); }

  constexpr bool is_omega() const { return value_ == kOmega; }
  /// Finite count; only meaningful when !is_omega().
  constexpr std::uint64_t count() const { return value_; }

  friend constexpr bool operator==(Multiplicity a, Multiplicity b) {
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(Multiplicity a, Multiplicity b) {
    return a.value_ < b.value_;  // omega sorts above every finite value
  }

  Multiplicity operator+(Multiplicity other) const {
    if (is_omega() || other.is_omega()) return omega();
    if (value_ > kOmega - 1 - other.value_)
      throw Error("multiplicity overflow");
    return Multiplicity(value_ + other.value_);
  }
  Multiplicity& operator+=(Multiplicity other) { return *this = *this + other; }

  std::string str() const {
    return is_omega() ? "omega" : std::to_string(value_);
  }

 private:
  static constexpr std::uint64_t kOmega = ~std::uint64_t{0};
  std::uint64_t value_;
};

/// A bundle of parallel edges from src to dst.
struct Bundle {
  std::string id;
  std::string src;
  std::string dst;
  Multiplicity mult;

  friend bool operator==(const Bundle&, const Bundle&) = default;
};

/// A single edge inside a bundle, addressed by its index.  Indices are finite
/// even for omega bundles: any finite index names a concrete edge.
struct ConcreteEdge {
  std::string bundle;
  std::uint64_t index = 0;

  friend bool operator==(const ConcreteEdge&, const ConcreteEdge&) = default;
  friend auto operator<=>(const ConcreteEdge&, const ConcreteEdge&) = default;
};

inline std::string edge_token(const ConcreteEdge& e) {
  return e.bundle + "[" + std::to_string(e.index) + "]";
}

/// Parses "id[k]" back into a ConcreteEdge.
inline ConcreteEdge parse_edge_token(const std::string& tok) {
  auto open = tok.rfind('[');
  if (open == std::string::npos || tok.empty() || tok.back() != ']')
    throw ValidationError("malformed edge token: " + tok);
  std::string digits = tok.substr(open + 1, tok.size() - open - 2);
  if (digits.empty() ||
      digits.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("malformed edge token: " + tok);
  return ConcreteEdge{tok.substr(0, open), std::stoull(digits)};
}

/// Subset of a graph's vertices, positions matching Graph::vertex_names().
using VertexSet = boost::dynamic_bitset<>;

/// Validated, immutable graph.  Construction canonicalizes vertex and bundle
/// order (lexicographic by identifier) and rejects structural defects, so
/// every live Graph satisfies the representation invariants.
class Graph {
 public:
  Graph() = default;

  static Graph make(std::vector<std::string> vertices,
                    std::vector<Bundle> bundles) {
    Graph g;
    g.vertices_ = std::move(vertices);
    g.bundles_ = std::move(bundles);
    g.validate_and_index();
    return g;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const std::string& vertex_name(std::size_t v) const { return vertices_[v]; }
  const std::vector<Bundle>& bundles() const { return bundles_; }
  const Bundle& bundle(std::size_t b) const { return bundles_[b]; }

  std::optional<std::size_t> find_vertex(const std::string& name) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), name);
    if (it == vertices_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - vertices_.begin());
  }

  std::size_t vertex_index(const std::string& name) const {
    auto ix = find_vertex(name);
    if (!ix) throw ValidationError("unknown vertex: " + name);
    return *ix;
  }

  std::optional<std::size_t> find_bundle(const std::string& id) const {
    auto it = std::lower_bound(
        bundles_.begin(), bundles_.end(), id,
        [](const Bundle& b, const std::string& s) { return b.id < s; });
    if (it == bundles_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - bundles_.begin());
  }

  std::size_t bundle_index(const std::string& id) const {
    auto ix = find_bundle(id);
    if (!ix) throw ValidationError("unknown bundle: " + id);
    return *ix;
  }

  std::size_t src_index(std::size_t b) const { return bsrc_[b]; }
  std::size_t dst_index(std::size_t b) const { return bdst_[b]; }

  /// Indices of bundles emitted by / received at vertex v, ascending.
  const std::vector<std::size_t>& out_bundles(std::size_t v) const {
    return out_[v];
  }
  const std::vector<std::size_t>& in_bundles(std::size_t v) const {
    return in_[v];
  }

  /// Total outgoing multiplicity of v (omega if any omega bundle leaves v).
  Multiplicity out_degree(std::size_t v) const {
    Multiplicity d(0);
    for (std::size_t b : out_[v]) d += bundles_[b].mult;
    return d;
  }

  bool is_infinite_emitter(std::size_t v) const {
    for (std::size_t b : out_[v])
      if (bundles_[b].mult.is_omega()) return true;
    return false;
  }

  bool is_sink(std::size_t v) const { return out_[v].empty(); }

  bool is_row_finite() const {
    for (const Bundle& b : bundles_)
      if (b.mult.is_omega()) return false;
    return true;
  }

  /// Resolves a ConcreteEdge, checking the bundle exists and the index is
  /// below its multiplicity.
  std::size_t resolve_edge(const ConcreteEdge& e) const {
    std::size_t b = bundle_index(e.bundle);
    const Multiplicity m = bundles_[b].mult;
    if (!m.is_omega() && e.index >= m.count())
      throw ValidationError("edge index out of range: " + edge_token(e));
    return b;
  }

  VertexSet empty_set() const { return VertexSet(vertices_.size()); }
  VertexSet full_set() const { return VertexSet(vertices_.size()).set(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertices_ == b.vertices_ && a.bundles_ == b.bundles_;
  }

 private:
  void validate_and_index() {
    std::sort(vertices_.begin(), vertices_.end());
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
      if (vertices_[i] == vertices_[i + 1])
        throw ValidationError("duplicate vertex identifier: " + vertices_[i]);
    for (const std::string& v : vertices_)
      if (v.empty()) throw ValidationError("empty vertex identifier");

    std::sort(bundles_.begin(), bundles_.end(),
              [](const Bundle& a, const Bundle& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < bundles_.size(); ++i)
      if (bundles_[i].id == bundles_[i + 1].id)
        throw ValidationError("duplicate bundle identifier: " +
                              bundles_[i].id);

    out_.assign(vertices_.size(), {});
    in_.assign(vertices_.size(), {});
    bsrc_.resize(bundles_.size());
    bdst_.resize(bundles_.size());
    for (std::size_t b = 0; b < bundles_.size(); ++b) {
      const Bundle& e = bundles_[b];
      if (e.id.empty()) throw ValidationError("empty bundle identifier");
      if (!e.mult.is_omega() && e.mult.count() == 0)
        throw ValidationError("multiplicity 0 on bundle: " + e.id);
      auto s = find_vertex(e.src);
      if (!s)
        throw ValidationError("dangling endpoint: bundle " + e.id +
                              " has undeclared source " + e.src);
      auto d = find_vertex(e.dst);
      if (!d)
        throw ValidationError("dangling endpoint: bundle " + e.id +
                              " has undeclared target " + e.dst);
      bsrc_[b] = *s;
      bdst_[b] = *d;
      out_[*s].push_back(b);
      in_[*d].push_back(b);
    }
  }

  std::vector<std::string> vertices_;
  std::vector<Bundle> bundles_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::vector<std::size_t> bsrc_, bdst_;
};

// ---- vertex-set helpers ----

inline VertexSet vertex_set(const Graph& g,
                            const std::vector<std::string>& names) {
  VertexSet s = g.empty_set();
  for (const std::string& n : names) s.set(g.vertex_index(n));
  return s;
}

inline std::vector<std::string> set_names(const Graph& g, const VertexSet& s) {
  std::vector<std::string> out;
  for (std::size_t i = s.find_first(); i != VertexSet::npos;
       i = s.find_next(i))
    out.push_back(g.vertex_name(i));
  return out;
}

/// Orders sets by cardinality, then lexicographically by ascending member
/// position (the set containing the earlier vertex comes first).
inline bool set_less(const VertexSet& a, const VertexSet& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i];
  return false;
}

inline std::string set_str(const Graph& g, const VertexSet& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = s.find_first(); i != VertexSet::npos;
       i = s.find_next(i)) {
    if (!first) out += ",";
    out += g.vertex_name(i);
    first = false;
  }
  return out + "}";
}

// ---- paths ----

/// A finite path: a vertex (length zero) or a nonempty sequence of concrete
/// edges with matching endpoints.  `base` is the source vertex; for nonempty
/// paths it must agree with the first edge's source.
struct Path {
  std::string base;
  std::vector<ConcreteEdge> edges;

  std::size_t length() const { return edges.size(); }

  friend bool operator==(const Path&, const Path&) = default;
};

inline std::string path_str(const Path& p) {
  if (p.edges.empty()) return p.base;
  std::string out;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += ".";
    out += edge_token(p.edges[i]);
  }
  return out;
}

/// Checks well-formedness of p in g and returns it; throws otherwise.
inline const Path& check_path(const Graph& g, const Path& p) {
  std::size_t cur = g.vertex_index(p.base);
  for (const ConcreteEdge& e : p.edges) {
    std::size_t b = g.resolve_edge(e);
    if (g.src_index(b) != cur)
      throw ValidationError("broken path at edge " + edge_token(e));
    cur = g.dst_index(b);
  }
  return p;
}

inline std::string path_source(const Graph& g, const Path& p) {
  (void)g;
  return p.base;
}

inline std::string path_range(const Graph& g, const Path& p) {
  if (p.edges.empty()) return p.base;
  return g.bundle(g.resolve_edge(p.edges.back())).dst;
}

/// A simple closed path: nonempty, source = range, and the sources of its
/// edges pairwise distinct.
struct Cycle {
  Path path;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

inline Cycle make_cycle(const Graph& g, Path p) {
  if (p.edges.empty()) throw ValidationError("cycle must be nonempty");
  check_path(g, p);
  if (path_range(g, p) != p.base)
    throw ValidationError("cycle is not closed");
  std::vector<std::size_t> srcs;
  for (const ConcreteEdge& e : p.edges)
    srcs.push_back(g.src_index(g.resolve_edge(e)));
  std::sort(srcs.begin(), srcs.end());
  if (std::adjacent_find(srcs.begin(), srcs.end()) != srcs.end())
    throw ValidationError("cycle revisits a vertex");
  return Cycle{std::move(p)};
}

// ---- vertex classification ----

enum class VertexKind { Sink, FiniteEmitter, InfiniteEmitter };

struct VertexClass {
  VertexKind kind;
  Multiplicity out_degree;

  bool is_sink() const { return kind == VertexKind::Sink; }
  bool is_finite_emitter() const { return kind == VertexKind::FiniteEmitter; }
  bool is_infinite_emitter() const {
    return kind == VertexKind::InfiniteEmitter;
  }
};

inline std::vector<VertexClass> classify_vertices(const Graph& g) {
  std::vector<VertexClass> out;
  out.reserve(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    Multiplicity d = g.out_degree(v);
    VertexKind k = g.is_sink(v)      ? VertexKind::Sink
                   : d.is_omega()    ? VertexKind::InfiniteEmitter
                                     : VertexKind::FiniteEmitter;
    out.push_back(VertexClass{k, d});
  }
  return out;
}

}  // namespace lpa
