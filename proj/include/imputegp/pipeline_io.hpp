#ifndef IMPUTEGP_PIPELINE_IO_HPP
#define IMPUTEGP_PIPELINE_IO_HPP

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "imputegp/grammar.hpp"

namespace imputegp {

// Both parsers reject unknown primitive names with ParseError. Hyperparameter
// values outside their domain are kept so that validate() can report them.

PipelineTree parse_canonical(std::string_view text, const Registry& registry);

/// Structured form: an array of {"name": ..., "params": {...}} in application order.
nlohmann::ordered_json to_json(const PipelineTree& p);
PipelineTree pipeline_from_json(const nlohmann::ordered_json& j, const Registry& registry);

/// Accepts either a structured file or a file holding one canonical string.
PipelineTree load_pipeline(const std::filesystem::path& path, const Registry& registry);
void save_pipeline(const PipelineTree& p, const std::filesystem::path& path);

} // namespace imputegp

#endif // IMPUTEGP_PIPELINE_IO_HPP
