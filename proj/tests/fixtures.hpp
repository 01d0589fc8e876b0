#pragma once

#include <string>

#include "ltd/network.hpp"

namespace fixtures {

// The printed five-node weight matrix; out-degrees (1,3,2,2,3).
inline ltd::Network graph5() {
    return ltd::Network(5, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {1, 4, 1}, {2, 0, 1}, {2, 4, 1},
                            {3, 1, 1}, {3, 4, 1}, {4, 1, 1}, {4, 2, 1}, {4, 3, 1}});
}

// Seven nodes with out-degrees (3,1,3,3,3,3,3): node 2 only listens to node 1
// and every node k >= 3 puts two units on {1..k-1}.
inline ltd::Network graph7() {
    return ltd::Network(7, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 0, 1}, {2, 1, 1}, {2, 0, 1}, {2, 3, 1},
                            {3, 2, 1}, {3, 1, 1}, {3, 4, 1}, {4, 3, 1}, {4, 2, 1}, {4, 5, 1}, {5, 4, 1},
                            {5, 3, 1}, {5, 6, 1}, {6, 5, 1}, {6, 4, 1}, {6, 0, 1}});
}

inline ltd::Network two_node(const ltd::Rational& w1, const ltd::Rational& w2) {
    return ltd::Network(2, {{0, 1, w1}, {1, 0, w2}});
}

inline std::string data_path(const std::string& name) { return std::string(LTD_DATA_DIR) + "/" + name; }

}  // namespace fixtures
