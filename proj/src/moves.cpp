#include "troptrack/moves.hpp"

#include <algorithm>

#include "troptrack/error.hpp"

namespace troptrack {

std::vector<std::pair<int, int>> TrackGraph::ends(int branch) const {
  std::vector<std::pair<int, int>> out;
  for (int n = 0; n < static_cast<int>(nodes.size()); ++n) {
    const TrackNode& node = nodes[n];
    int slots = node.is_switch ? 3 : 2;
    for (int s = 0; s < slots; ++s)
      if (node.ports[s] == branch) out.emplace_back(n, s);
  }
  return out;
}

void TrackGraph::validate() const {
  std::vector<int> degree(names.size(), 0);
  for (const TrackNode& node : nodes) {
    int slots = node.is_switch ? 3 : 2;
    for (int s = 0; s < slots; ++s) {
      int b = node.ports[s];
      TT_CHECK(b >= 0 && b < branch_count(), "track graph port out of range");
      ++degree[b];
    }
    if (!node.is_switch) TT_CHECK(node.ports[2] == -1, "joint with three ports");
  }
  for (int b = 0; b < branch_count(); ++b)
    TT_CHECK(degree[b] == 2, "branch must occupy exactly two ports");
}

std::string move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::LeftSplit: return "left-split";
    case MoveKind::RightSplit: return "right-split";
    case MoveKind::CentralSplit: return "central-split";
    case MoveKind::Fold: return "fold";
    case MoveKind::Shift: return "shift";
  }
  return "?";
}

namespace {

// Classification of one branch end: which slot of which node kind.
struct EndInfo {
  int node;
  int slot;  // 0 = lone, 1 = p1, 2 = p2 for switches
  bool at_switch;
};

std::array<EndInfo, 2> end_info(const TrackGraph& g, int branch) {
  auto es = g.ends(branch);
  if (es.size() != 2) fail("MoveNotApplicable", "branch has degenerate attachments");
  std::array<EndInfo, 2> out;
  for (int i = 0; i < 2; ++i)
    out[i] = {es[i].first, es[i].second, g.nodes[es[i].first].is_switch};
  return out;
}

Mat identity_rows(std::size_t n) { return mat_identity(n); }

}  // namespace

bool split_applicable(const TrackGraph& g, int branch) {
  auto es = g.ends(branch);
  if (es.size() != 2) return false;
  if (es[0].first == es[1].first) return false;
  return g.nodes[es[0].first].is_switch && es[0].second == 0 &&
         g.nodes[es[1].first].is_switch && es[1].second == 0;
}

bool shift_applicable(const TrackGraph& g, int branch) {
  auto es = g.ends(branch);
  if (es.size() != 2) return false;
  if (es[0].first == es[1].first) return false;
  if (!g.nodes[es[0].first].is_switch || !g.nodes[es[1].first].is_switch) return false;
  bool lone0 = es[0].second == 0, lone1 = es[1].second == 0;
  return lone0 != lone1;
}

bool fold_applicable(const TrackGraph& g, int branch) {
  auto es = g.ends(branch);
  if (es.size() != 2) return false;
  if (es[0].first == es[1].first) return false;
  if (!g.nodes[es[0].first].is_switch || !g.nodes[es[1].first].is_switch) return false;
  return es[0].second != 0 && es[0].second == es[1].second;
}

std::vector<int> applicable_branches(const TrackGraph& g, MoveKind kind) {
  std::vector<int> out;
  for (int b = 0; b < g.branch_count(); ++b) {
    bool ok = false;
    switch (kind) {
      case MoveKind::LeftSplit:
      case MoveKind::RightSplit:
      case MoveKind::CentralSplit: ok = split_applicable(g, b); break;
      case MoveKind::Shift: ok = shift_applicable(g, b); break;
      case MoveKind::Fold: ok = fold_applicable(g, b); break;
    }
    if (ok) out.push_back(b);
  }
  return out;
}

MoveResult apply_move(const TrackGraph& g, MoveKind kind, int branch) {
  if (branch < 0 || branch >= g.branch_count())
    fail("MoveNotApplicable", "unknown branch");
  const std::size_t n = g.names.size();

  if (kind == MoveKind::LeftSplit || kind == MoveKind::RightSplit ||
      kind == MoveKind::CentralSplit) {
    if (!split_applicable(g, branch))
      fail("MoveNotApplicable",
           move_kind_name(kind) + " needs a large branch, " + g.names[branch] +
               " is not one");
    auto info = end_info(g, branch);
    // Deterministic end order.
    if (info[1].node < info[0].node) std::swap(info[0], info[1]);
    const TrackNode& s1 = g.nodes[info[0].node];
    const TrackNode& s2 = g.nodes[info[1].node];
    int x1 = s1.ports[1], x2 = s1.ports[2];
    int y1 = s2.ports[1], y2 = s2.ports[2];

    TrackGraph out = g;
    ElementaryMove mv;
    mv.kind = kind;
    mv.branch = branch;
    mv.carrier = g.names;

    if (kind == MoveKind::CentralSplit) {
      out.nodes[info[0].node] = TrackNode{false, {x1, y2, -1}};
      out.nodes[info[1].node] = TrackNode{false, {x2, y1, -1}};
      out.names.erase(out.names.begin() + branch);
      for (TrackNode& node : out.nodes)
        for (int s = 0; s < 3; ++s)
          if (node.ports[s] > branch) --node.ports[s];
      std::vector<std::size_t> col(n, 0);
      for (std::size_t j = 0, c = 0; j < n; ++j)
        if (static_cast<int>(j) != branch) col[j] = c++;
      mv.carried = out.names;
      mv.matrix = mat_zero(n, n - 1);
      for (std::size_t j = 0; j < n; ++j)
        if (static_cast<int>(j) != branch) mv.matrix[j][col[j]] = 1;
      mv.matrix[branch][col[x1]] += 1;
      mv.matrix[branch][col[x2]] += 1;
      out.validate();
      return {out, mv};
    }

    out.names[branch] = g.names[branch] + "'";
    if (kind == MoveKind::LeftSplit) {
      out.nodes[info[0].node] = TrackNode{true, {x2, y1, branch}};
      out.nodes[info[1].node] = TrackNode{true, {y2, x1, branch}};
    } else {
      out.nodes[info[0].node] = TrackNode{true, {x1, branch, y2}};
      out.nodes[info[1].node] = TrackNode{true, {y1, branch, x2}};
    }
    mv.carried = out.names;
    mv.matrix = identity_rows(n);
    for (Rat& v : mv.matrix[branch]) v = 0;
    if (kind == MoveKind::LeftSplit) {
      mv.matrix[branch][x1] += 1;
      mv.matrix[branch][branch] += 1;
      mv.matrix[branch][y1] += 1;
    } else {
      mv.matrix[branch][x2] += 1;
      mv.matrix[branch][branch] += 1;
      mv.matrix[branch][y2] += 1;
    }
    out.validate();
    return {out, mv};
  }

  if (kind == MoveKind::Shift) {
    if (!shift_applicable(g, branch))
      fail("MoveNotApplicable",
           "shift needs a mixed branch, " + g.names[branch] + " is not one");
    auto info = end_info(g, branch);
    if (info[0].slot != 0) std::swap(info[0], info[1]);
    const TrackNode& s1 = g.nodes[info[0].node];
    const TrackNode& s2 = g.nodes[info[1].node];
    int x1 = s1.ports[1], x2 = s1.ports[2];
    int l = s2.ports[0];
    TrackGraph out = g;
    out.names[branch] = g.names[branch] + "'";
    if (info[1].slot == 1) {
      int z = s2.ports[2];
      out.nodes[info[0].node] = TrackNode{true, {branch, z, x2}};
      out.nodes[info[1].node] = TrackNode{true, {l, branch, x1}};
    } else {
      int z = s2.ports[1];
      out.nodes[info[0].node] = TrackNode{true, {branch, x1, z}};
      out.nodes[info[1].node] = TrackNode{true, {l, x2, branch}};
    }
    ElementaryMove mv;
    mv.kind = kind;
    mv.branch = branch;
    mv.carrier = g.names;
    mv.carried = out.names;
    mv.matrix = identity_rows(n);
    for (Rat& v : mv.matrix[branch]) v = 0;
    mv.matrix[branch][x1] += 1;
    mv.matrix[branch][x2] += 1;
    out.validate();
    return {out, mv};
  }

  // Fold.
  if (!fold_applicable(g, branch))
    fail("MoveNotApplicable",
         "fold needs a branch pair-attached with equal handedness, " +
             g.names[branch] + " is not one");
  auto info = end_info(g, branch);
  if (info[1].node < info[0].node) std::swap(info[0], info[1]);
  const TrackNode& w1 = g.nodes[info[0].node];
  const TrackNode& w2 = g.nodes[info[1].node];
  int l1 = w1.ports[0], l2 = w2.ports[0];
  TrackGraph out = g;
  out.names[branch] = g.names[branch] + "'";
  int q1, q2;
  if (info[0].slot == 2) {
    q1 = w1.ports[1];
    q2 = w2.ports[1];
    out.nodes[info[0].node] = TrackNode{true, {branch, q2, l1}};
    out.nodes[info[1].node] = TrackNode{true, {branch, q1, l2}};
  } else {
    q1 = w1.ports[2];
    q2 = w2.ports[2];
    out.nodes[info[0].node] = TrackNode{true, {branch, l1, q2}};
    out.nodes[info[1].node] = TrackNode{true, {branch, q1, l2}};
  }
  ElementaryMove mv;
  mv.kind = MoveKind::Fold;
  mv.branch = branch;
  mv.carrier = out.names;
  mv.carried = g.names;
  mv.matrix = identity_rows(n);
  for (Rat& v : mv.matrix[branch]) v = 0;
  mv.matrix[branch][branch] += 1;
  mv.matrix[branch][q1] += 1;
  mv.matrix[branch][q2] += 1;
  out.validate();
  return {out, mv};
}

}  // namespace troptrack
