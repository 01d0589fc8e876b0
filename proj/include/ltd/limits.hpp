#pragma once

#include <cstddef>
#include <stdexcept>

namespace ltd {

/// Sizes above which exhaustive scans refuse to run.
struct Limits {
    std::size_t max_partition_nodes = 24;
    std::size_t max_enumeration_nodes = 20;
    std::size_t max_subset_nodes = 20;
    /// Worker threads for subset scans; 0 = hardware concurrency.
    unsigned threads = 0;
};

/// An exhaustive scan was asked for more nodes than its cap allows.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ltd
