#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "troptrack/linalg.hpp"

namespace troptrack {

// Abstract switched graph underlying a train track. Branches are edges;
// nodes are either switches (one branch on the lone side, two on the pair
// side) or joints (two branches meeting smoothly, carrying equal measure).
//
// Switch ports are stored in counterclockwise order (lone, p1, p2) around
// the node, so p1/p2 encode the surface orientation. Every branch occupies
// exactly two ports in the whole graph.
struct TrackNode {
  bool is_switch = false;
  // is_switch: {lone, p1, p2}; joint: {b0, b1, -1}.
  std::array<int, 3> ports{-1, -1, -1};
};

struct TrackGraph {
  std::vector<std::string> names;  // branch id -> display name
  std::vector<TrackNode> nodes;

  int branch_count() const { return static_cast<int>(names.size()); }
  // The two (node, slot) attachments of a branch, in node order.
  std::vector<std::pair<int, int>> ends(int branch) const;
  void validate() const;
};

enum class MoveKind { LeftSplit, RightSplit, CentralSplit, Fold, Shift };

std::string move_kind_name(MoveKind k);

// One elementary move together with its transition matrix. The matrix M has
// rows indexed by the carrier track's branches and columns by the carried
// track's branches, with nu_carrier = M nu_carried. Splits and shifts carry
// the post-move track on the pre-move one (rows = pre-move branches); folds
// carry the pre-move track on the post-move one (rows = post-move branches).
// M is the identity on unchanged branches; only the moved branch's row is
// nontrivial.
struct ElementaryMove {
  MoveKind kind;
  int branch;                            // branch of the pre-move track
  std::vector<std::string> carrier;      // row labels
  std::vector<std::string> carried;      // column labels
  Mat matrix;
};

struct MoveResult {
  TrackGraph graph;
  ElementaryMove move;
};

// A branch is large when both ends sit in lone slots of switches, mixed when
// one end is a lone slot and the other a pair slot, and foldable when both
// ends sit in pair slots of the same handedness (both p1 or both p2) at
// distinct switches. Applicability of the corresponding moves is exactly
// these conditions; joints block all of them.
bool split_applicable(const TrackGraph& g, int branch);
bool shift_applicable(const TrackGraph& g, int branch);
bool fold_applicable(const TrackGraph& g, int branch);

std::vector<int> applicable_branches(const TrackGraph& g, MoveKind kind);

// Applies the move at the given branch. Throws MoveNotApplicable when the
// local configuration is absent. The moved branch's replacement keeps the
// base name with a prime appended.
MoveResult apply_move(const TrackGraph& g, MoveKind kind, int branch);

}  // namespace troptrack
