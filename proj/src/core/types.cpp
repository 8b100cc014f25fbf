#include "agrimule/core/types.hpp"

#include "agrimule/error.hpp"

namespace agrimule {

const char* to_string(DecisionCommand c) noexcept {
    switch (c) {
    case DecisionCommand::On: return "on";
    case DecisionCommand::Off: return "off";
    case DecisionCommand::NoChange: break;
    }
    return "none";
}

DecisionCommand decision_command_from_string(const std::string& s) {
    if (s == "on") return DecisionCommand::On;
    if (s == "off") return DecisionCommand::Off;
    if (s == "none") return DecisionCommand::NoChange;
    throw Error("bad-command", s);
}

} // namespace agrimule
