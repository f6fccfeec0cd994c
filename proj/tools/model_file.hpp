#pragma once

// JSON model files: loading with validation and line-anchored errors, and
// saving in a form that loads back to the identical model.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crdu/models.hpp"

namespace crdu {

inline constexpr int kSchemaVersion = 1;

/// Raised for malformed files; the message starts with "source:line:".
class ModelFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelFile {
    ModelSpec model;
    std::vector<std::pair<std::string, Act>> acts;
    /// Optional second partition, recorded by the counterexample command.
    std::optional<RiskPartition> h_partition;

    const Act& act(const std::string& name) const;
};

ModelFile parse_model(const std::string& text, const std::string& source = "<model>");
ModelFile load_model(const std::string& path);

std::string save_model(const ModelFile& file);
void write_model(const ModelFile& file, const std::string& path);

} // namespace crdu
