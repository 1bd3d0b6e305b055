#pragma once

// Random coordinatized covers ("lifts") of a base graph B.
//
// A degree-n lift is determined by a permutation assignment sigma on the
// directed edges of B with sigma(inv e) = sigma(e)^{-1}:
//   V = V_B x [n],  E = E_B x [n],
//   tail(e,i) = (tail e, i),  head(e,i) = (head e, sigma(e) i),
//   inv(e,i)  = (inv e, sigma(e) i).
// Vertex (v,i) has id v*n + i and directed edge (e,i) has id e*n + i.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifts/graph.hpp"
#include "lifts/graph_io.hpp"
#include "lifts/permutation.hpp"

namespace lifts {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rule for edges that are not half-loops.  Under `cyclic` every whole-loop
/// gets a uniform n-cycle; all other edges get a uniform permutation.
enum class EdgeModel { permutation, cyclic };

/// Rule for half-loops: uniform perfect matchings (n even) or uniform
/// involutions with exactly one fixed point (n odd).
enum class HalfLoopRule { none, matching, near_matching };

enum class Parity { any, even, odd };

struct ModelSpec {
  EdgeModel kind = EdgeModel::permutation;
  HalfLoopRule half_loop = HalfLoopRule::none;
  Parity parity = Parity::any;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Reason (B, spec, n) is not a legal combination, or nullopt if it is.
inline std::optional<std::string> model_violation(const Graph& base, const ModelSpec& spec,
                                                  std::size_t n) {
  if (n == 0) return "degree n must be positive";
  if (spec.parity == Parity::even && n % 2 != 0) return "model restricted to even n";
  if (spec.parity == Parity::odd && n % 2 == 0) return "model restricted to odd n";
  if (spec.half_loop == HalfLoopRule::matching && n % 2 != 0) {
    return "perfect-matching half-loop rule needs even n";
  }
  if (spec.half_loop == HalfLoopRule::near_matching && n % 2 == 0) {
    return "near-perfect-matching half-loop rule needs odd n";
  }
  if (base.half_loop_count() > 0 && spec.half_loop == HalfLoopRule::none) {
    return "base graph has half-loops but the model has no half-loop rule";
  }
  return std::nullopt;
}

inline bool validate_model(const Graph& base, const ModelSpec& spec, std::size_t n) {
  return !model_violation(base, spec, n).has_value();
}

struct PermutationAssignment {
  std::shared_ptr<const Graph> base;
  std::size_t degree = 0;
  std::vector<Permutation> sigma;  // indexed by directed base edge
};

/// Throws ModelError unless every sigma(e) is a permutation of [n] and
/// sigma(inv e) = sigma(e)^{-1}.
inline void check_assignment(const PermutationAssignment& a) {
  if (!a.base) throw ModelError("assignment without base graph");
  if (a.degree == 0) throw ModelError("degree n must be positive");
  const auto& b = *a.base;
  if (a.sigma.size() != b.directed_edge_count()) {
    throw ModelError("assignment must give one permutation per directed base edge");
  }
  for (EdgeId e = 0; e < b.directed_edge_count(); ++e) {
    const auto& s = a.sigma[e];
    if (s.size() != a.degree || !is_permutation_of_n(s)) {
      throw ModelError("sigma(" + std::to_string(e) + ") is not a permutation of [n]");
    }
    const auto& t = a.sigma[b.inv(e)];
    for (std::uint32_t i = 0; i < a.degree; ++i) {
      if (t[s[i]] != i) {
        throw ModelError("sigma(inv e) != sigma(e)^-1 at edge " + std::to_string(e));
      }
    }
  }
}

/// Edge-independent draw: one stream per orbit representative (lowest id),
/// seeded from (seed, edge id); partners get the inverse.
inline PermutationAssignment sample_assignment(std::shared_ptr<const Graph> base, std::size_t n,
                                               const ModelSpec& spec, std::uint64_t seed) {
  if (auto why = model_violation(*base, spec, n)) throw ModelError(*why);
  const auto& b = *base;
  PermutationAssignment a;
  a.degree = n;
  a.sigma.resize(b.directed_edge_count());
  for (auto e : b.orientation()) {
    auto rng = make_rng(seed, {e});
    if (b.is_half_loop(e)) {
      a.sigma[e] = spec.half_loop == HalfLoopRule::matching ? uniform_perfect_matching(n, rng)
                                                            : uniform_near_perfect_matching(n, rng);
      continue;
    }
    a.sigma[e] = (spec.kind == EdgeModel::cyclic && b.is_whole_loop(e)) ? uniform_full_cycle(n, rng)
                                                                         : uniform_permutation(n, rng);
    a.sigma[b.inv(e)] = inverse(a.sigma[e]);
  }
  a.base = std::move(base);
  return a;
}

inline PermutationAssignment sample_assignment(const Graph& base, std::size_t n,
                                               const ModelSpec& spec, std::uint64_t seed) {
  return sample_assignment(std::make_shared<const Graph>(base), n, spec, seed);
}

/// The assignment with every sigma(e) the identity.
inline PermutationAssignment trivial_assignment(std::shared_ptr<const Graph> base, std::size_t n) {
  PermutationAssignment a;
  a.degree = n;
  a.sigma.assign(base->directed_edge_count(), identity_permutation(n));
  a.base = std::move(base);
  return a;
}

struct Lift {
  std::shared_ptr<const Graph> base;
  std::shared_ptr<const Graph> cover;
  GraphMorphism projection;
  PermutationAssignment assignment;

  std::size_t degree() const noexcept { return assignment.degree; }
  VertexId cover_vertex(VertexId v, std::uint32_t i) const {
    return static_cast<VertexId>(v * degree() + i);
  }
  EdgeId cover_edge(EdgeId e, std::uint32_t i) const {
    return static_cast<EdgeId>(e * degree() + i);
  }
};

inline Lift build_lift(const PermutationAssignment& a) {
  check_assignment(a);
  const auto& b = *a.base;
  const auto n = a.degree;
  std::vector<DirectedEdge> edges(b.directed_edge_count() * n);
  GraphMorphism proj;
  proj.vertex_map.resize(b.vertex_count() * n);
  proj.edge_map.resize(edges.size());
  for (VertexId v = 0; v < b.vertex_count(); ++v) {
    for (std::uint32_t i = 0; i < n; ++i) proj.vertex_map[v * n + i] = v;
  }
  for (EdgeId e = 0; e < b.directed_edge_count(); ++e) {
    const auto& de = b.edge(e);
    const auto& s = a.sigma[e];
    for (std::uint32_t i = 0; i < n; ++i) {
      edges[e * n + i] = {static_cast<VertexId>(de.tail * n + i),
                          static_cast<VertexId>(de.head * n + s[i]),
                          static_cast<EdgeId>(de.inv * n + s[i])};
      proj.edge_map[e * n + i] = e;
    }
  }
  Lift lift;
  lift.base = a.base;
  lift.cover = std::make_shared<const Graph>(b.vertex_count() * n, std::move(edges));
  proj.source = lift.cover;
  proj.target = lift.base;
  lift.projection = std::move(proj);
  lift.assignment = a;
  return lift;
}

/// Same as build_lift(a) but checks that a was drawn over `base`.
inline Lift build_lift(const Graph& base, const PermutationAssignment& a) {
  if (!a.base || !(*a.base == base)) throw ModelError("assignment is over a different base graph");
  return build_lift(a);
}

/// Number of orbits of [n] under the group generated by all sigma(e).
inline std::size_t sigma_orbit_count(const PermutationAssignment& a) {
  std::vector<std::uint32_t> parent(a.degree);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t orbits = a.degree;
  for (const auto& s : a.sigma) {
    for (std::uint32_t i = 0; i < a.degree; ++i) {
      auto x = find(i), y = find(s[i]);
      if (x != y) {
        parent[x] = y;
        --orbits;
      }
    }
  }
  return orbits;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json model_spec_to_json(const ModelSpec& spec) {
  nlohmann::json j;
  j["model"] = spec.kind == EdgeModel::cyclic ? "cyclic" : "permutation";
  switch (spec.half_loop) {
    case HalfLoopRule::none: j["half_loop"] = nullptr; break;
    case HalfLoopRule::matching: j["half_loop"] = "matching"; break;
    case HalfLoopRule::near_matching: j["half_loop"] = "near_matching"; break;
  }
  j["parity"] = spec.parity == Parity::even ? "even" : spec.parity == Parity::odd ? "odd" : "any";
  return j;
}

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("model spec must be an object");
  ModelSpec spec;
  const auto model = j.value("model", std::string("permutation"));
  if (model == "permutation") {
    spec.kind = EdgeModel::permutation;
  } else if (model == "cyclic" || model == "full_cycle" || model == "full-cycle") {
    spec.kind = EdgeModel::cyclic;
  } else {
    throw ModelError("unknown model \"" + model + "\"");
  }
  if (j.contains("half_loop") && !j["half_loop"].is_null()) {
    const auto rule = j["half_loop"].get<std::string>();
    if (rule == "matching") {
      spec.half_loop = HalfLoopRule::matching;
    } else if (rule == "near_matching") {
      spec.half_loop = HalfLoopRule::near_matching;
    } else {
      throw ModelError("unknown half_loop rule \"" + rule + "\"");
    }
  }
  const auto parity = j.value("parity", std::string("any"));
  if (parity == "any") {
    spec.parity = Parity::any;
  } else if (parity == "even") {
    spec.parity = Parity::even;
  } else if (parity == "odd") {
    spec.parity = Parity::odd;
  } else {
    throw ModelError("unknown parity \"" + parity + "\"");
  }
  return spec;
}

inline nlohmann::json lift_to_json(const Lift& lift) {
  return {{"n", lift.degree()},
          {"sigma", lift.assignment.sigma},
          {"base", graph_to_json(*lift.base)},
          {"cover", graph_to_json(*lift.cover)}};
}

/// Rebuilds a lift from {"base", "n", "sigma"}; a stored "cover", if any,
/// must agree with the rebuilt one.
inline Lift lift_from_json(const nlohmann::json& j) {
  PermutationAssignment a;
  a.base = std::make_shared<const Graph>(graph_from_json(j.at("base")));
  a.degree = j.at("n").get<std::size_t>();
  a.sigma = j.at("sigma").get<std::vector<Permutation>>();
  auto lift = build_lift(a);
  if (j.contains("cover") && !(graph_from_json(j["cover"]) == *lift.cover)) {
    throw ModelError("stored cover disagrees with the permutation assignment");
  }
  return lift;
}

}  // namespace lifts
