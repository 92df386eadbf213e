#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cscp/mip/settings.hpp"
#include "cscp/model/types.hpp"
#include "cscp/scp/settings.hpp"

namespace cscp::io {

// Input error located by a JSON pointer into the offending document.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

enum class Mode { Momentum, Time, Contacts, TimeContacts };
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);  // throws std::invalid_argument
void apply_mode(scp::ScpSettings& settings, Mode m);

struct Scenario {
  std::string name;
  std::string description;
  Mode mode = Mode::Momentum;
  // Phases without a surface are left at -1 for the contact planner.
  model::ProblemSpec spec;
  scp::ScpSettings scp;
  mip::MipSettings mip;

  bool has_planned_contacts() const;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& s);

// Terrain file: array of {corners, friction}. `pointer` prefixes error locations.
std::vector<model::TerrainSurface> parse_terrain(const nlohmann::json& doc, const std::string& pointer = "");
nlohmann::json terrain_to_json(const std::vector<model::TerrainSurface>& surfaces);

// Sorted keys, two-space indent, shortest round-trip doubles, trailing newline.
std::string canonical_dump(const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Same motion on a horizon of `horizon` steps: dt scaled by N / horizon, a step is in a phase
// when its midpoint lies in the phase's time span, per-step data sampled at the midpoint.
model::ProblemSpec resample_horizon(const model::ProblemSpec& spec, int horizon);

}  // namespace cscp::io
