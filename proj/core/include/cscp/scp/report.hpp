#pragma once

#include <nlohmann/json.hpp>

#include "cscp/scp/scp.hpp"

namespace cscp::scp {

// Per-iteration array plus a final summary; the trajectory itself is written separately.
nlohmann::json report_to_json(const ScpReport& report, double mass);

}  // namespace cscp::scp
