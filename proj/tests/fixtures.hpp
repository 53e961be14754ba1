// Shared test fixtures.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace fixtures {

// Parity dataset: label is 1 iff the indices of the uniform 4-valued columns
// a and b have an even sum, so no single column carries any signal and only
// the a-b interaction separates the classes. Six independent uniform noise
// columns of varied cardinality pad the search space.
inline std::string planted_parity_csv(size_t n_samples, uint64_t seed) {
    crossforge::Rng rng(seed);
    std::ostringstream out;
    out << "a,b,n1,n2,n3,n4,n5,n6,y\n";
    const size_t noise_cards[6] = {2, 3, 5, 6, 7, 9};
    for (size_t i = 0; i < n_samples; ++i) {
        const size_t ia = rng.uniform_index(4);
        const size_t ib = rng.uniform_index(4);
        out << "a" << ia << ",b" << ib;
        for (size_t k = 0; k < 6; ++k)
            out << ",n" << (k + 1) << "v" << rng.uniform_index(noise_cards[k]);
        out << "," << ((ia + ib) % 2 == 0 ? 1 : 0) << "\n";
    }
    return out.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace fixtures
