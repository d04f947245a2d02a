#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "topo/model/model.hpp"

namespace topo::model {

using AnyModel = std::variant<BlockJacobiModel, WireModel, ScatteringSystem>;

/// Reads a JSON model file (format in models/README.md). Syntax problems raise
/// ParseError with line and column, structural problems ParseError naming the
/// field path, failed invariants InvalidModel.
AnyModel load_model(const std::filesystem::path& path);

/// Same as load_model for an in-memory document; `origin` labels diagnostics.
AnyModel parse_model(std::string_view text, const std::string& origin = "<string>");

/// "builtin:<spec>" selects a built-in insulator or wire, anything else is a path.
AnyModel resolve_model(const std::string& source);

BlockJacobiModel require_insulator(const AnyModel& model);
WireModel require_wire(const AnyModel& model);

/// Serializes an insulator in the file format (used for round-trip tests).
std::string dump_model(const BlockJacobiModel& model);

}  // namespace topo::model
