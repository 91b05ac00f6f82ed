#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace gct {

// Flat `key = value` file; '#' starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& file);
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace gct
