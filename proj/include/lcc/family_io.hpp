#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lcc/instances.hpp"

namespace lcc {

// Instance file error; `where` is a byte offset for syntax errors or a JSON
// pointer for schema errors.
class InstanceParseError : public std::runtime_error {
public:
    InstanceParseError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

nlohmann::ordered_json family_to_json(const MatchingFamily& fam);
MatchingFamily family_from_json(const nlohmann::json& j);
MatchingFamily parse_family(const std::string& text);
MatchingFamily load_family(const std::string& path);
void save_family(const MatchingFamily& fam, const std::string& path);

nlohmann::ordered_json solution_space_to_json(const SolutionSpace& sol);

}  // namespace lcc
