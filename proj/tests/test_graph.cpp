#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "drec/data_io.hpp"
#include "drec/errors.hpp"
#include "drec/graph.hpp"
#include "test_support.hpp"

using namespace drec;

TEST_CASE("interaction graph degrees") {
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {1, 1}}, 2, 2);
  CHECK(g.user_degree(0) == 2);
  CHECK(g.user_degree(1) == 1);
  CHECK(g.item_degree(0) == 1);
  CHECK(g.item_degree(1) == 2);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(!g.has_edge(1, 0));
}

TEST_CASE("empty edge list gives all-zero degrees") {
  auto g = build_interaction_graph({}, 3, 4);
  for (int u = 0; u < 3; ++u) CHECK(g.user_degree(u) == 0);
  for (int i = 0; i < 4; ++i) CHECK(g.item_degree(i) == 0);
}

TEST_CASE("duplicate input edge is a construction error") {
  CHECK_THROWS_AS(build_interaction_graph({{0, 1}, {0, 1}}, 2, 2), DataError);
}

TEST_CASE("out-of-range ids are construction errors") {
  CHECK_THROWS_AS(build_interaction_graph({{0, 5}}, 2, 2), DataError);
  CHECK_THROWS_AS(build_interaction_graph({{-1, 0}}, 2, 2), DataError);
  CHECK_THROWS_AS(build_social_network({{0, 9}}, 3), DataError);
  CHECK_THROWS_AS(build_social_network({{1, 1}}, 3), DataError);
}

TEST_CASE("social network is symmetric and canonical") {
  auto net = build_social_network({{2, 0}, {1, 2}}, 3);
  CHECK(net.edges[0] == std::pair<int, int>{0, 2});
  CHECK(net.degree(2) == 2);
  for (int u = 0; u < net.user_count; ++u)
    for (int v : net.neighbors_of(u)) {
      auto back = net.neighbors_of(v);
      CHECK(std::binary_search(back.begin(), back.end(), u));
    }
}

TEST_CASE("all-true mask reproduces the parent graph") {
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {1, 1}}, 2, 2);
  auto same = apply_mask(g, EdgeMask::all(3));
  CHECK(same.edges == g.edges);
  CHECK(same.user_offsets == g.user_offsets);
}

TEST_CASE("all-false mask empties the graph") {
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {1, 1}}, 2, 2);
  auto empty = apply_mask(g, EdgeMask::all(3, false));
  CHECK(empty.edge_count() == 0);
  CHECK(empty.user_degree(0) == 0);
  CHECK(empty.item_degree(1) == 0);
}

TEST_CASE("partial mask keeps exactly the flagged edges") {
  auto g = build_interaction_graph({{0, 0}, {0, 1}, {1, 1}}, 2, 2);
  EdgeMask mask{{1, 0, 1}};
  auto sub = apply_mask(g, mask);
  CHECK(sub.edge_count() == 2);
  CHECK(sub.has_edge(0, 0));
  CHECK(!sub.has_edge(0, 1));
  CHECK(sub.has_edge(1, 1));
}

TEST_CASE("mask length mismatch is an error") {
  auto g = build_interaction_graph({{0, 0}}, 1, 1);
  CHECK_THROWS_AS(apply_mask(g, EdgeMask::all(2)), UsageError);
}

TEST_CASE("social mask preserves symmetry") {
  auto net = build_social_network({{0, 1}, {1, 2}, {0, 2}}, 3);
  EdgeMask mask{{1, 0, 1}};
  auto sub = apply_mask(net, mask);
  CHECK(sub.edge_count() == 2);
  for (int u = 0; u < sub.user_count; ++u)
    for (int v : sub.neighbors_of(u)) {
      auto back = sub.neighbors_of(v);
      CHECK(std::binary_search(back.begin(), back.end(), u));
    }
}

TEST_CASE("masking composes as conjunction") {
  std::mt19937_64 rng(99);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 8; ++u)
    for (int i = 0; i < 8; ++i)
      if ((rng() & 3) == 0) edges.emplace_back(u, i);
  auto g = build_interaction_graph(edges, 8, 8);

  EdgeMask m1{std::vector<std::uint8_t>(g.edge_count())};
  for (auto& k : m1.keep) k = rng() & 1;
  auto g1 = apply_mask(g, m1);

  EdgeMask m2{std::vector<std::uint8_t>(g1.edge_count())};
  for (auto& k : m2.keep) k = rng() & 1;
  auto g12 = apply_mask(g1, m2);

  // conjunction over the original edge ids
  EdgeMask both{std::vector<std::uint8_t>(g.edge_count(), 0)};
  std::size_t kept_pos = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!m1.keep[e]) continue;
    both.keep[e] = m2.keep[kept_pos];
    ++kept_pos;
  }
  auto direct = apply_mask(g, both);
  CHECK(direct.edges == g12.edges);
}

TEST_CASE("norm coefficient values") {
  auto g = build_interaction_graph(
      {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}}, 2, 4);
  CHECK(norm_coefficient(g, 1, 1) == doctest::Approx(1.0));  // deg 1, deg 1
  CHECK(norm_coefficient(g, 0, 1) == doctest::Approx(0.5));  // 1/sqrt(4*1)
}

TEST_CASE("norm coefficient direct evaluation 1/sqrt(16)") {
  // user with degree 2, item with degree 8
  std::vector<std::pair<int, int>> edges;
  edges.emplace_back(0, 0);
  edges.emplace_back(0, 1);
  for (int u = 1; u < 8; ++u) edges.emplace_back(u, 0);
  auto g = build_interaction_graph(edges, 8, 2);
  CHECK(g.user_degree(0) == 2);
  CHECK(g.item_degree(0) == 8);
  CHECK(norm_coefficient(g, 0, 0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("zero-degree endpoint is a contract violation") {
  auto g = build_interaction_graph({{0, 0}}, 2, 2);
  CHECK_THROWS_AS(norm_coefficient(g, 1, 0), UsageError);
  CHECK_THROWS_AS(norm_coefficient(g, 0, 1), UsageError);
}

TEST_CASE("graph dump matches loader format") {
  testsup::TempDir dir("graph");
  auto g = build_interaction_graph({{0, 0}, {1, 1}}, 2, 2);
  dump_edges(g, dir.str() + "/dump.txt");
  auto net = build_social_network({{0, 1}}, 2);
  dump_edges(net, dir.str() + "/social.txt");
  auto raw = load_edge_lists(dir.str() + "/dump.txt", dir.str() + "/social.txt");
  CHECK(raw.interactions.size() == 2);
  CHECK(raw.social_edges.size() == 1);
}
