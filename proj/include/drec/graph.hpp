#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace drec {

// Per-edge keep flags over a parent graph's edge ids.
struct EdgeMask {
  std::vector<std::uint8_t> keep;

  std::size_t size() const { return keep.size(); }
  std::size_t kept_count() const;
  static EdgeMask all(std::size_t n, bool value = true) {
    return EdgeMask{std::vector<std::uint8_t>(n, value ? 1 : 0)};
  }
};

// Bipartite user-item graph in CSR form, both directions. Edge ids follow
// the order of the edge list handed to the builder, so arrays parallel to
// that list (e.g. fabricated-noise flags) stay aligned.
struct InteractionGraph {
  int user_count = 0;
  int item_count = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::size_t> user_offsets;   // size user_count + 1
  std::vector<int> user_items;             // sorted per user
  std::vector<std::size_t> user_edge_ids;  // parallel to user_items

  std::vector<std::size_t> item_offsets;
  std::vector<int> item_users;
  std::vector<std::size_t> item_edge_ids;

  std::size_t edge_count() const { return edges.size(); }
  int user_degree(int u) const {
    return static_cast<int>(user_offsets[u + 1] - user_offsets[u]);
  }
  int item_degree(int i) const {
    return static_cast<int>(item_offsets[i + 1] - item_offsets[i]);
  }
  std::span<const int> items_of(int u) const {
    return {user_items.data() + user_offsets[u],
            user_offsets[u + 1] - user_offsets[u]};
  }
  std::span<const int> users_of(int i) const {
    return {item_users.data() + item_offsets[i],
            item_offsets[i + 1] - item_offsets[i]};
  }
  bool has_edge(int u, int i) const;  // binary search over items_of(u)
};

// Undirected user-user graph; edges canonical (u < v), adjacency symmetric.
struct SocialNetwork {
  int user_count = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::size_t> offsets;   // size user_count + 1
  std::vector<int> neighbors;         // sorted per user
  std::vector<std::size_t> edge_ids;  // parallel to neighbors

  std::size_t edge_count() const { return edges.size(); }
  int degree(int u) const {
    return static_cast<int>(offsets[u + 1] - offsets[u]);
  }
  std::span<const int> neighbors_of(int u) const {
    return {neighbors.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
};

// Throws DataError on out-of-range ids or duplicate edges (dedup is the
// loader's job, not the builder's).
InteractionGraph build_interaction_graph(std::vector<std::pair<int, int>> edges,
                                         int user_count, int item_count);

// Accepts edges in either orientation, canonicalizes to u < v. Throws
// DataError on self-loops, duplicates, or out-of-range ids.
SocialNetwork build_social_network(std::vector<std::pair<int, int>> edges,
                                   int user_count);

// Materializes the subgraph of kept edges; the parent is untouched.
InteractionGraph apply_mask(const InteractionGraph& graph,
                            const EdgeMask& mask);
SocialNetwork apply_mask(const SocialNetwork& net, const EdgeMask& mask);

// 1/sqrt(deg(u) * deg(x)). Both endpoints must have degree >= 1; calling
// this for a pair that is not an incident edge is a contract violation.
double norm_coefficient(const InteractionGraph& graph, int u, int i);
double norm_coefficient(const SocialNetwork& net, int u, int v);

// Debug dump back to the edge-list file format of the loader.
void dump_edges(const InteractionGraph& graph, const std::string& path);
void dump_edges(const SocialNetwork& net, const std::string& path);

}  // namespace drec
