#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acp/rng.hpp"
#include "acp/samplers.hpp"

namespace acp {

using Vertex = std::uint32_t;

/// Undirected simple graph carrying an SIS infection, with the three event
/// aggregates kept exact under every mutation:
///   - the infected set (recoveries),
///   - infected-healthy edges, weighted per healthy endpoint (transmissions),
///   - vertices with at least one infected neighbour (adaptive updates).
class ContactGraph {
 public:
  explicit ContactGraph(std::size_t vertices = 0);

  std::size_t size() const { return adjacency_.size(); }
  Vertex add_vertex();

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  bool has_edge(Vertex u, Vertex v) const;
  std::uint64_t edge_count() const { return edge_count_; }

  /// Precondition: u != v and the edge is absent.
  void add_edge(Vertex u, Vertex v);
  void remove_edge(Vertex u, Vertex v);
  /// Deletes every edge at v.
  void isolate(Vertex v);

  bool infected(Vertex v) const { return infected_flag_[v] != 0; }
  void infect(Vertex v);
  void cure(Vertex v);

  std::uint32_t infected_neighbors(Vertex v) const { return infected_neighbors_[v]; }
  std::size_t infected_count() const { return infected_.size(); }
  const std::vector<Vertex>& infected_vertices() const { return infected_.items(); }
  /// Number of edges with exactly one infected endpoint.
  std::int64_t si_edges() const { return si_weights_.total(); }
  /// Vertices with at least one infected neighbour.
  std::size_t exposed_count() const { return exposed_.size(); }
  bool exposed(Vertex v) const { return exposed_.contains(v); }

  Vertex sample_infected(Rng& rng) const { return infected_.sample(rng); }
  /// Healthy endpoint of a uniformly chosen infected-healthy edge.
  Vertex sample_transmission_target(Rng& rng) const {
    return static_cast<Vertex>(si_weights_.sample(rng));
  }
  Vertex sample_exposed(Rng& rng) const { return exposed_.sample(rng); }

  /// Full recomputation check of symmetry, loop-freeness and every aggregate.
  bool consistent() const;

 private:
  void bump_infected_neighbors(Vertex v, int delta);
  void refresh_weight(Vertex v);

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::uint8_t> infected_flag_;
  std::vector<std::uint32_t> infected_neighbors_;
  IndexedSet infected_;
  IndexedSet exposed_;
  FenwickSampler si_weights_;
  std::uint64_t edge_count_ = 0;
};

}  // namespace acp
