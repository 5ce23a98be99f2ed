#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fourhammer/board.hpp"

namespace fourhammer {

/// Malformed, truncated, wrong-version or out-of-bounds encoded state.
class DecodeError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kTensorGlobal = 24;
inline constexpr int kTensorPerUnit = 14;
inline constexpr int kTensorPerObjective = 5;
inline constexpr int kTensorLength = kTensorGlobal + kMaxUnits * kTensorPerUnit + 4 * kTensorPerObjective;
static_assert(kTensorLength == 268);

/// One byte per action id, 1 where the action is a legal option.
/// Throws GameAlreadyOver on terminal states.
std::vector<std::uint8_t> legal_mask(const GameState& s);

std::vector<float> encode_tensor(const GameState& s);

/// Human-readable sectioned rendering. One-way.
std::string encode_text(const GameState& s);

inline constexpr int kJsonVersion = 1;
std::string encode_json(const GameState& s);
GameState decode_json(std::string_view text);

inline constexpr char kBinaryMagic[4] = {'4', 'H', 'M', 'R'};
inline constexpr std::uint16_t kBinaryVersion = 1;
std::vector<std::uint8_t> encode_binary(const GameState& s);
GameState decode_binary(std::span<const std::uint8_t> bytes);

/// Bounds, structure and sequence-stack checks applied by both decoders.
void check_decoded(const GameState& s);

}  // namespace fourhammer
