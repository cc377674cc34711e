#pragma once

#include <string>

#include "json.hpp"
#include "jetcalc/strat.hpp"

namespace jetcalc {

// Raised for malformed tree documents; `field` names the offending JSON path.
class TreeParseError : public std::runtime_error {
public:
    TreeParseError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

StratTree tree_from_json(const nlohmann::json& doc);
StratTree tree_from_json_text(const std::string& text);
StratTree load_tree(const std::string& path);
nlohmann::json tree_to_json(const StratTree& tree);

} // namespace jetcalc
