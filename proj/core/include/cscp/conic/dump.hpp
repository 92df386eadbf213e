#pragma once

#include <filesystem>
#include <string>

#include "cscp/conic/program.hpp"

namespace cscp::conic {

// JSON {objective, eq:{triplets,rhs}, ineq:{triplets,rhs}, cone:{nonneg, soc_dims}};
// triplets are [row, col, "value"] with 0-based indices and every real written as a
// shortest round-trip decimal string.
std::string dump_program(const ConicProgram& prog);
ConicProgram load_program(const std::string& json_text);

void write_program(const ConicProgram& prog, const std::filesystem::path& file);
ConicProgram read_program(const std::filesystem::path& file);

}  // namespace cscp::conic
