#pragma once

// Grid search helpers shared by the rules engine. Internal header.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fourhammer/board.hpp"

namespace fourhammer::detail {

inline constexpr std::array<std::pair<int, int>, 8> kNeighbours{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

inline int owner_of_unit(int unit_id) { return unit_id < kMaxUnitsPerSide ? 0 : 1; }

/// Occupancy plus, per square, a bit for each player with an alive model
/// within engagement range of it.
struct Field {
  Occupancy occ;
  std::array<std::uint8_t, kSquares> near{};

  explicit Field(const GameState& s) : occ(s) {
    for (const auto& u : s.units) {
      if (!u.on_table()) continue;
      const auto bit = static_cast<std::uint8_t>(1U << u.owner);
      for (const auto& m : u.models) {
        if (!m.alive()) continue;
        for (int dy = -kEngagementRange; dy <= kEngagementRange; ++dy) {
          for (int dx = -kEngagementRange; dx <= kEngagementRange; ++dx) {
            GridPos p{m.position.x + dx, m.position.y + dy};
            if (on_board(p)) near[square_index(p)] |= bit;
          }
        }
      }
    }
  }
};

/// Generation-stamped visited set; clearing is O(1).
class Visited {
 public:
  void reset() {
    if (++generation_ == 0) {
      stamps_.fill(0);
      generation_ = 1;
    }
  }
  bool test_and_set(int index) {
    if (stamps_[index] == generation_) return true;
    stamps_[index] = generation_;
    return false;
  }

 private:
  std::array<std::uint32_t, kSquares> stamps_{};
  std::uint32_t generation_ = 0;
};

inline Visited& scratch_visited(int slot) {
  thread_local std::array<Visited, 2> v;
  return v[slot];
}

/// Breadth-first reach over 8-connected squares. Returns (square, depth)
/// pairs in visit order, the start included at depth 0.
template <class Passable>
void reach(GridPos start, int max_depth, Passable passable,
           std::vector<std::pair<int, int>>& out) {
  out.clear();
  Visited& seen = scratch_visited(0);
  seen.reset();
  const int s0 = square_index(start);
  seen.test_and_set(s0);
  out.emplace_back(s0, 0);
  for (std::size_t head = 0; head < out.size(); ++head) {
    const auto [sq, depth] = out[head];
    if (depth == max_depth) continue;
    const GridPos p = square_at(sq);
    for (const auto& [dx, dy] : kNeighbours) {
      GridPos q{p.x + dx, p.y + dy};
      if (!on_board(q)) continue;
      const int qi = square_index(q);
      if (seen.test_and_set(qi)) continue;
      if (!passable(qi)) continue;
      out.emplace_back(qi, depth + 1);
    }
  }
}

/// Place `count` models breadth-first from `anchor` over squares accepted
/// by `landing`. Every placed square is adjacent to an earlier one, so the
/// result is coherent. Returns false if fewer than `count` squares exist.
template <class Landing>
bool pack(GridPos anchor, int count, Landing landing, std::vector<int>& out) {
  out.clear();
  if (!on_board(anchor) || !landing(square_index(anchor))) return false;
  Visited& seen = scratch_visited(1);
  seen.reset();
  const int a = square_index(anchor);
  seen.test_and_set(a);
  out.push_back(a);
  for (std::size_t head = 0; head < out.size() && static_cast<int>(out.size()) < count; ++head) {
    const GridPos p = square_at(out[head]);
    for (const auto& [dx, dy] : kNeighbours) {
      GridPos q{p.x + dx, p.y + dy};
      if (!on_board(q)) continue;
      const int qi = square_index(q);
      if (seen.test_and_set(qi)) continue;
      if (!landing(qi)) continue;
      out.push_back(qi);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return static_cast<int>(out.size()) >= count;
}

}  // namespace fourhammer::detail
