#pragma once

#include "sbp/operator.hpp"

#include <iosfwd>
#include <string>

namespace sbp {

inline constexpr const char* kOperatorFileHeader = "sbp-upwind-operator v1";

void write_operator(std::ostream& os, const OperatorPair& pair);
OperatorPair read_operator(std::istream& is, const std::string& source = "<stream>");

void save_operator(const OperatorPair& pair, const std::string& path);
OperatorPair load_operator(const std::string& path);

} // namespace sbp
