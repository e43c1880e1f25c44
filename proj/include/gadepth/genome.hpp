#pragma once

#include <cstddef>
#include <vector>

namespace gadepth {

// A GA individual: the selected feature indices, strictly increasing. The
// sparse set is semantically the paper-style length-d binary vector, but
// stays cheap when d is in the hundreds of thousands.
struct SubsetGenome {
    std::vector<std::size_t> selected;

    std::size_t size() const { return selected.size(); }
    bool operator==(const SubsetGenome& other) const = default;
};

// GA tie order: smaller genome first, then lexicographic on indices.
inline bool genome_before(const SubsetGenome& a, const SubsetGenome& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.selected < b.selected;
}

}  // namespace gadepth
