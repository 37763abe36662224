#pragma once

#include <string>

#include "netcode/io.hpp"
#include "netcode/network.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(NETCODE_DATA_DIR) + "/" + name; }

inline netcode::MulticastNetwork load(const std::string& name) { return netcode::io::load_network(data_path(name)); }

inline netcode::MulticastNetwork butterfly() { return load("butterfly.json"); }

// Two parallel links from s straight to a single receiver.
inline netcode::MulticastNetwork parallel_pair() {
    return netcode::MulticastNetwork::create(2, {"s", "t"}, {{"a", "s", "t"}, {"b", "s", "t"}}, "s", {"t"});
}

}  // namespace fixtures
