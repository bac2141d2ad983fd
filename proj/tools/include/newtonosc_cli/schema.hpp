#pragma once

#include "newtonosc_cli/serialize.hpp"

#include <string>
#include <vector>

namespace newtonosc::cli {

/// Checks a subcommand document against its schema; dispatches on "command".
/// Returns one message per problem, empty when the document conforms.
std::vector<std::string> validate_document(const json& doc);

}  // namespace newtonosc::cli
