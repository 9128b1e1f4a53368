#include "acp/contact_graph.hpp"

#include <algorithm>
#include <cassert>

namespace acp {

ContactGraph::ContactGraph(std::size_t vertices)
    : adjacency_(vertices),
      infected_flag_(vertices, 0),
      infected_neighbors_(vertices, 0),
      si_weights_(vertices) {
  infected_.reserve_ids(vertices);
  exposed_.reserve_ids(vertices);
}

Vertex ContactGraph::add_vertex() {
  const auto v = static_cast<Vertex>(adjacency_.size());
  adjacency_.emplace_back();
  infected_flag_.push_back(0);
  infected_neighbors_.push_back(0);
  si_weights_.grow(adjacency_.size());
  return v;
}

bool ContactGraph::has_edge(Vertex u, Vertex v) const {
  const auto& small = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  const Vertex other = &small == &adjacency_[u] ? v : u;
  return std::find(small.begin(), small.end(), other) != small.end();
}

void ContactGraph::refresh_weight(Vertex v) {
  si_weights_.set(v, infected_flag_[v] ? 0 : static_cast<std::int64_t>(infected_neighbors_[v]));
}

void ContactGraph::bump_infected_neighbors(Vertex v, int delta) {
  auto& count = infected_neighbors_[v];
  const std::uint32_t before = count;
  count = static_cast<std::uint32_t>(static_cast<int>(count) + delta);
  if (!infected_flag_[v]) si_weights_.add(v, delta);
  if (before == 0 && count > 0) {
    exposed_.insert(v);
  } else if (before > 0 && count == 0) {
    exposed_.erase(v);
  }
}

void ContactGraph::add_edge(Vertex u, Vertex v) {
  assert(u != v);
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  ++edge_count_;
  if (infected_flag_[u]) bump_infected_neighbors(v, +1);
  if (infected_flag_[v]) bump_infected_neighbors(u, +1);
}

namespace {
void erase_one(std::vector<Vertex>& list, Vertex x) {
  auto it = std::find(list.begin(), list.end(), x);
  assert(it != list.end());
  *it = list.back();
  list.pop_back();
}
}  // namespace

void ContactGraph::remove_edge(Vertex u, Vertex v) {
  erase_one(adjacency_[u], v);
  erase_one(adjacency_[v], u);
  --edge_count_;
  if (infected_flag_[u]) bump_infected_neighbors(v, -1);
  if (infected_flag_[v]) bump_infected_neighbors(u, -1);
}

void ContactGraph::isolate(Vertex v) {
  auto& list = adjacency_[v];
  const bool v_infected = infected_flag_[v] != 0;
  for (Vertex w : list) {
    erase_one(adjacency_[w], v);
    if (v_infected) bump_infected_neighbors(w, -1);
    if (infected_flag_[w]) bump_infected_neighbors(v, -1);
  }
  edge_count_ -= list.size();
  list.clear();
}

void ContactGraph::infect(Vertex v) {
  if (infected_flag_[v]) return;
  infected_flag_[v] = 1;
  infected_.insert(v);
  refresh_weight(v);
  for (Vertex w : adjacency_[v]) bump_infected_neighbors(w, +1);
}

void ContactGraph::cure(Vertex v) {
  if (!infected_flag_[v]) return;
  infected_flag_[v] = 0;
  infected_.erase(v);
  refresh_weight(v);
  for (Vertex w : adjacency_[v]) bump_infected_neighbors(w, -1);
}

bool ContactGraph::consistent() const {
  std::uint64_t half_edges = 0;
  std::int64_t si = 0;
  std::size_t exposed = 0;
  std::size_t infected = 0;
  for (Vertex v = 0; v < adjacency_.size(); ++v) {
    const auto& list = adjacency_[v];
    half_edges += list.size();
    std::uint32_t count = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Vertex w = list[i];
      if (w == v || w >= adjacency_.size()) return false;
      if (std::find(list.begin() + static_cast<std::ptrdiff_t>(i) + 1, list.end(), w) != list.end())
        return false;
      const auto& back = adjacency_[w];
      if (std::find(back.begin(), back.end(), v) == back.end()) return false;
      if (infected_flag_[w]) ++count;
    }
    if (count != infected_neighbors_[v]) return false;
    if ((count > 0) != exposed_.contains(v)) return false;
    if (count > 0) ++exposed;
    const std::int64_t expected_weight = infected_flag_[v] ? 0 : count;
    if (si_weights_.weight(v) != expected_weight) return false;
    si += expected_weight;
    if ((infected_flag_[v] != 0) != infected_.contains(v)) return false;
    if (infected_flag_[v]) ++infected;
  }
  return half_edges == 2 * edge_count_ && si == si_weights_.total() &&
         exposed == exposed_.size() && infected == infected_.size();
}

}  // namespace acp
