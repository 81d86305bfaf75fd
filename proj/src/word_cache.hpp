#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

namespace ifslab::detail {

/// Per-word logs at every level up to `depth`:
/// {log inf lower bound, log sup lower bound, log sup upper bound}.
struct WordTable {
    int depth = 0;
    std::size_t budget = 0;
    int samples = 0;
    std::vector<std::vector<std::array<double, 3>>> levels;
};

struct WordTableCache {
    std::mutex mutex;
    std::shared_ptr<const WordTable> table;
};

} // namespace ifslab::detail
