#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgd/game.hpp"

namespace cgd {

using NodeId = std::uint32_t;

enum class Color : std::uint8_t { Blue, Red };
std::string_view to_string(Color c);

// Bicolored DAG with a designated source. Node ids are stable: deleting a
// node leaves a hole and new nodes always take a fresh id, so an edit
// script can name nodes across intermediate states.
class GameDag {
 public:
  GameDag();  // a lone source, i.e. D(0)

  NodeId source() const { return source_; }
  std::size_t id_bound() const { return alive_.size(); }
  bool alive(NodeId v) const { return v < alive_.size() && alive_[v]; }
  std::size_t node_count() const { return live_nodes_; }
  std::size_t edge_count() const { return edges_; }
  std::vector<NodeId> nodes() const;

  std::span<const NodeId> children(NodeId v, Color c) const {
    return c == Color::Blue ? blue_[v] : red_[v];
  }
  std::size_t out_degree(NodeId v) const { return blue_[v].size() + red_[v].size(); }
  std::size_t in_degree(NodeId v) const { return in_[v]; }
  bool has_edge(NodeId tail, NodeId head, Color c) const;

  const std::optional<Game>& label(NodeId v) const { return labels_[v]; }
  void set_label(NodeId v, std::optional<Game> g) { labels_[v] = g; }

  NodeId add_node();
  // Both return false (and change nothing) when the edge is present/absent.
  bool add_edge(NodeId tail, NodeId head, Color c);
  bool remove_edge(NodeId tail, NodeId head, Color c);
  // Deletes v when it has no incident edges and is not the source.
  bool remove_if_isolated(NodeId v);

  bool reaches(NodeId from, NodeId to) const;
  // Shortest directed path length from the source, colors ignored; -1 when
  // unreachable. Indexed by node id.
  std::vector<int> source_distances() const;
  // Longest directed path starting at the source.
  std::size_t depth() const;

 private:
  std::vector<std::vector<NodeId>> blue_, red_;
  std::vector<std::uint32_t> in_;
  std::vector<bool> alive_;
  std::vector<std::optional<Game>> labels_;
  NodeId source_ = 0;
  std::size_t live_nodes_ = 0;
  std::size_t edges_ = 0;
};

// Identifies a GameDag up to source-preserving colored isomorphism.
struct CanonicalCode {
  std::string bytes;
  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend auto operator<=>(const CanonicalCode&, const CanonicalCode&) = default;
};

// D(g): one node per follower, blue edges to Left options, red to Right.
GameDag build_dag(Game g);

// Throws std::invalid_argument when v is dead or unreachable.
std::size_t source_distance(const GameDag& d, NodeId v);

CanonicalCode canonical_code(const GameDag& d);
bool isomorphic(const GameDag& a, const GameDag& b);
// Source-preserving colored isomorphism from a to b: result[v] is the image
// of node v of a (entries for dead ids are unspecified).
std::optional<std::vector<NodeId>> find_isomorphism(const GameDag& a, const GameDag& b);

// Every game reachable from g, including g and 0, sorted by id.
std::vector<Game> follower_set(Game g);

using NodeLabeler = std::function<std::string(const GameDag&, NodeId)>;
std::string to_dot(const GameDag& d, const NodeLabeler& label = {});
std::string to_tikz(const GameDag& d, const NodeLabeler& label = {});

}  // namespace cgd
