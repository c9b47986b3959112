#pragma once

#include <filesystem>
#include <string>

#include "norden/model.hpp"

namespace norden {

/// Parses a model document. Errors are ModelFormatError with a "line L, column C"
/// location for syntax errors and a JSON pointer for field errors.
/// `fallback_name` is used when the document carries no "name".
Model parse_model(const std::string& text, const std::string& fallback_name = "model");
Model load_model(const std::filesystem::path& path);

/// Deterministic text form: identical models give identical bytes.
std::string emit_model(const Model& model);
void save_model(const Model& model, const std::filesystem::path& path);

}  // namespace norden
