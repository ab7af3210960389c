#include "drec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "drec/errors.hpp"

namespace drec {

std::size_t EdgeMask::kept_count() const {
  std::size_t n = 0;
  for (auto k : keep) n += k;
  return n;
}

bool InteractionGraph::has_edge(int u, int i) const {
  auto items = items_of(u);
  return std::binary_search(items.begin(), items.end(), i);
}

namespace {

// Builds one CSR direction and sorts each adjacency row by neighbor id,
// keeping the parallel edge-id array aligned.
void build_csr(const std::vector<std::pair<int, int>>& edges, int node_count,
               bool key_is_first, std::vector<std::size_t>& offsets,
               std::vector<int>& neighbors, std::vector<std::size_t>& edge_ids) {
  offsets.assign(node_count + 1, 0);
  for (const auto& [a, b] : edges) ++offsets[(key_is_first ? a : b) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  neighbors.assign(edges.size(), 0);
  edge_ids.assign(edges.size(), 0);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int key = key_is_first ? edges[e].first : edges[e].second;
    int nbr = key_is_first ? edges[e].second : edges[e].first;
    std::size_t pos = cursor[key]++;
    neighbors[pos] = nbr;
    edge_ids[pos] = e;
  }
  // per-node sort by (neighbor, edge id)
  for (int n = 0; n < node_count; ++n) {
    std::size_t lo = offsets[n], hi = offsets[n + 1];
    std::vector<std::pair<int, std::size_t>> row;
    row.reserve(hi - lo);
    for (std::size_t p = lo; p < hi; ++p)
      row.emplace_back(neighbors[p], edge_ids[p]);
    std::sort(row.begin(), row.end());
    for (std::size_t p = lo; p < hi; ++p) {
      neighbors[p] = row[p - lo].first;
      edge_ids[p] = row[p - lo].second;
      if (p > lo && neighbors[p] == neighbors[p - 1])
        throw DataError("duplicate edge in graph construction");
    }
  }
}

}  // namespace

InteractionGraph build_interaction_graph(std::vector<std::pair<int, int>> edges,
                                         int user_count, int item_count) {
  for (const auto& [u, i] : edges) {
    if (u < 0 || u >= user_count || i < 0 || i >= item_count)
      throw DataError("interaction edge id out of range");
  }
  InteractionGraph g;
  g.user_count = user_count;
  g.item_count = item_count;
  g.edges = std::move(edges);
  build_csr(g.edges, user_count, true, g.user_offsets, g.user_items,
            g.user_edge_ids);
  build_csr(g.edges, item_count, false, g.item_offsets, g.item_users,
            g.item_edge_ids);
  return g;
}

SocialNetwork build_social_network(std::vector<std::pair<int, int>> edges,
                                   int user_count) {
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= user_count || v < 0 || v >= user_count)
      throw DataError("social edge id out of range");
    if (u == v) throw DataError("self-loop social edge");
    if (u > v) std::swap(u, v);
  }
  SocialNetwork net;
  net.user_count = user_count;
  net.edges = std::move(edges);

  net.offsets.assign(user_count + 1, 0);
  for (const auto& [u, v] : net.edges) {
    ++net.offsets[u + 1];
    ++net.offsets[v + 1];
  }
  std::partial_sum(net.offsets.begin(), net.offsets.end(), net.offsets.begin());
  net.neighbors.assign(2 * net.edges.size(), 0);
  net.edge_ids.assign(2 * net.edges.size(), 0);
  std::vector<std::size_t> cursor(net.offsets.begin(), net.offsets.end() - 1);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& [u, v] = net.edges[e];
    std::size_t pu = cursor[u]++;
    net.neighbors[pu] = v;
    net.edge_ids[pu] = e;
    std::size_t pv = cursor[v]++;
    net.neighbors[pv] = u;
    net.edge_ids[pv] = e;
  }
  for (int n = 0; n < user_count; ++n) {
    std::size_t lo = net.offsets[n], hi = net.offsets[n + 1];
    std::vector<std::pair<int, std::size_t>> row;
    row.reserve(hi - lo);
    for (std::size_t p = lo; p < hi; ++p)
      row.emplace_back(net.neighbors[p], net.edge_ids[p]);
    std::sort(row.begin(), row.end());
    for (std::size_t p = lo; p < hi; ++p) {
      net.neighbors[p] = row[p - lo].first;
      net.edge_ids[p] = row[p - lo].second;
      if (p > lo && net.neighbors[p] == net.neighbors[p - 1])
        throw DataError("duplicate social edge");
    }
  }
  return net;
}

InteractionGraph apply_mask(const InteractionGraph& graph,
                            const EdgeMask& mask) {
  if (mask.size() != graph.edge_count())
    throw UsageError("mask length does not match edge count");
  std::vector<std::pair<int, int>> kept;
  kept.reserve(mask.kept_count());
  for (std::size_t e = 0; e < graph.edges.size(); ++e)
    if (mask.keep[e]) kept.push_back(graph.edges[e]);
  return build_interaction_graph(std::move(kept), graph.user_count,
                                 graph.item_count);
}

SocialNetwork apply_mask(const SocialNetwork& net, const EdgeMask& mask) {
  if (mask.size() != net.edge_count())
    throw UsageError("mask length does not match edge count");
  std::vector<std::pair<int, int>> kept;
  kept.reserve(mask.kept_count());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (mask.keep[e]) kept.push_back(net.edges[e]);
  return build_social_network(std::move(kept), net.user_count);
}

double norm_coefficient(const InteractionGraph& graph, int u, int i) {
  int du = graph.user_degree(u);
  int di = graph.item_degree(i);
  if (du < 1 || di < 1)
    throw UsageError("norm coefficient requested for a zero-degree endpoint");
  return 1.0 / std::sqrt(static_cast<double>(du) * static_cast<double>(di));
}

double norm_coefficient(const SocialNetwork& net, int u, int v) {
  int du = net.degree(u);
  int dv = net.degree(v);
  if (du < 1 || dv < 1)
    throw UsageError("norm coefficient requested for a zero-degree endpoint");
  return 1.0 / std::sqrt(static_cast<double>(du) * static_cast<double>(dv));
}

namespace {
template <typename EdgeList>
void dump_edge_list(const EdgeList& edges, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& [a, b] : edges) out << a << ' ' << b << '\n';
}
}  // namespace

void dump_edges(const InteractionGraph& graph, const std::string& path) {
  dump_edge_list(graph.edges, path);
}

void dump_edges(const SocialNetwork& net, const std::string& path) {
  dump_edge_list(net.edges, path);
}

}  // namespace drec
