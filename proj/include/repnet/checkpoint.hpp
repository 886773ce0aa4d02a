#pragma once

#include <string>

#include "repnet/net.hpp"

namespace repnet {

// JSON checkpoint per net: name, regime, widths, row-major weight/bias
// arrays. Doubles round-trip bit-exactly through the decimal encoding.
std::string net_to_json(const GeneratorNet& net);
GeneratorNet net_from_json(const std::string& text);

void save_nets(const std::string& dir, const NetMap& nets);  // dir/net_<name>.json
NetMap load_nets(const std::string& dir);

}  // namespace repnet
