#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgd/dag.hpp"
#include "cgd/dyadic.hpp"
#include "cgd/game.hpp"

namespace cgd {

enum class EditAction : std::uint8_t { Add, Remove };

struct Edit {
  EditAction action;
  Color color;
  NodeId tail;
  std::optional<NodeId> head;  // empty: a fresh node (Add only)

  friend bool operator==(const Edit&, const Edit&) = default;
};

using EditScript = std::vector<Edit>;

enum class IllegalReason { DeadTail, UnreachableTail, DeadHead, DuplicateEdge, MissingEdge, CycleCreated, RemoveNewNode };
std::string_view to_string(IllegalReason r);

class IllegalEditError : public std::runtime_error {
 public:
  IllegalEditError(std::size_t index, IllegalReason reason);
  std::size_t index() const { return index_; }
  IllegalReason reason() const { return reason_; }

 private:
  std::size_t index_;
  IllegalReason reason_;
};

// Applies one edit in place and returns its cost 2^-d, d the source
// distance of the tail before the edit. Isolated non-source nodes left
// behind are deleted. On error d is unchanged.
Dyadic apply_edit(GameDag& d, const Edit& e, std::size_t index = 0);

struct Simulation {
  GameDag dag;
  Dyadic cost;
};
Simulation simulate(const EditScript& script, const GameDag& start);

// `script` takes `start` to a DAG isomorphic to `target`. Returns the
// reversed script with additions and removals swapped, expressed in the
// node ids of `target`; it takes `target` back to a copy of `start` at the
// same cost.
EditScript reverse_script(const EditScript& script, const GameDag& start, const GameDag& target);

struct DistanceResult {
  Dyadic lower;
  Dyadic upper;
  EditScript witness;  // from build_dag(g)
  bool certified = false;
  std::size_t states = 0;  // search states created, 0 for bounds only
};

std::string to_json(const DistanceResult& r);
std::string edit_to_string(const Edit& e);

struct SearchOptions {
  std::optional<std::size_t> depth_budget;  // default max depth + 2
  std::optional<Dyadic> cost_cap;           // default the wd_bounds upper
  std::size_t max_states = 400000;
};

DistanceResult wd_exact(Game g, Game h, const SearchOptions& opts = {});
DistanceResult wd_bounds(Game g, Game h);

// 2^-(d-1), d the larger birthday; 0 when g == h.
Dyadic separation_bound(Game g, Game h);
// Edits at the source cost 1 each, so the source degree gap is a bound.
std::size_t source_degree_gap(Game g, Game h);

Dyadic metric_discrete(Game g, Game h);
std::size_t metric_bd(Game g, Game h);
Dyadic metric_bs(Game g, Game h);
// Unit-cost version of the search; `lower`/`upper` count edits.
DistanceResult ed_exact(Game g, Game h, const SearchOptions& opts = {});
// Throws ResourceLimitError when the search cannot certify.
std::size_t metric_ed(Game g, Game h);

}  // namespace cgd
