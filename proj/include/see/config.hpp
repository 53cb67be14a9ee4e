#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "see/evaluation.hpp"

namespace see {

/// Config problem, anchored to a line of the source file (0 when not line-specific).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct RunConfig {
    ExperimentConfig experiment;
    std::optional<std::string> output_dir;
    std::size_t jobs = 1;
};

/// Parses `key = value` lines ('#' comments; values are numbers, "strings",
/// true/false, or [x, y, z]). Unknown or repeated keys are errors. Relative
/// mesh paths resolve against `base_dir`.
RunConfig parse_config(std::istream& in, const std::string& source_name, const std::filesystem::path& base_dir);

RunConfig load_config(const std::filesystem::path& path);

} // namespace see
