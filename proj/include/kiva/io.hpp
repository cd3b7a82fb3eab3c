#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kiva/model.hpp"

namespace kiva {

nlohmann::json instance_to_json(const Instance& instance);
/// Throws invalid_input on malformed documents, invalid_instance on bad SKU ids.
Instance instance_from_json(const nlohmann::json& doc);

nlohmann::json solution_to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace kiva
