#pragma once

// JSON shapes shared by the server, the CLI transcript and the encoders.

#include <json.hpp>

#include "fourhammer/actions.hpp"
#include "fourhammer/board.hpp"
#include "fourhammer/events.hpp"

namespace fourhammer {

nlohmann::json event_to_json(const EventRecord& e);
/// Throws DecodeError.
EventRecord event_from_json(const nlohmann::json& j);

/// {"type":"Pass"} / {"type":"TargetSquare","x":..,"y":..} / ...
nlohmann::json action_to_json(const Action& a);
/// Throws DecodeError on unknown types or missing fields.
Action action_from_json(const nlohmann::json& j);

/// {"kind","actor","options":[{"id","text"}]} or, on terminal states,
/// {"terminal":true,"winner","vp","budget_exhausted"}.
nlohmann::json decision_to_json(const GameState& s);
nlohmann::json result_to_json(const GameResult& r);

nlohmann::json state_to_json(const GameState& s);
/// Throws DecodeError; runs check_decoded.
GameState state_from_json(const nlohmann::json& j);

}  // namespace fourhammer
