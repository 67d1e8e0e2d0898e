#include "xidet/exact.hpp"

#include <algorithm>
#include <numeric>

namespace xidet {

std::vector<Permutation> all_permutations(int r) {
    if (r < 1) throw std::invalid_argument("all_permutations: r must be >= 1");
    std::vector<int> idx(static_cast<size_t>(r));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Permutation> out;
    do {
        Permutation p;
        p.q = idx;
        // parity by counting inversions
        int inv = 0;
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = i + 1; j < idx.size(); ++j)
                if (idx[i] > idx[j]) ++inv;
        p.sign = (inv % 2 == 0) ? 1 : -1;
        out.push_back(std::move(p));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

} // namespace xidet
