#pragma once

#include <string>

namespace textclass {

// Porter stemming algorithm (the original 1980 definition, steps 1a-5b).
// Expects a lowercase alphabetic token; words of length <= 2 are returned
// unchanged.
std::string porter_stem(const std::string& word);

}  // namespace textclass
