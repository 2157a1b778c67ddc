#ifndef LATEMBED_EMBEDDING_STATE_HPP
#define LATEMBED_EMBEDDING_STATE_HPP

#include <vector>

#include "latembed/errors.hpp"
#include "latembed/lattice.hpp"

namespace latembed {

// The current map zeta from lattice points to continuous positions.
// positions[i] belongs to lattice[i]; the domain is exactly the lattice.
struct EmbeddingState {
    Lattice lattice{1};
    std::vector<ContinuousPoint> positions;
    int iteration = 0;

    const ContinuousPoint& position_for(const LatticePoint& q) const {
        const std::size_t idx = lattice.index_of(q);
        if (idx == Lattice::npos || idx >= positions.size())
            throw MissingEmbedding("no embedded position for lattice point " + q.to_string());
        return positions[idx];
    }

    // Throws when a position is missing or non-finite.
    void validate() const {
        if (positions.size() != lattice.size())
            throw MissingEmbedding("embedding covers " + std::to_string(positions.size()) +
                                   " of " + std::to_string(lattice.size()) + " lattice points");
        for (std::size_t i = 0; i < positions.size(); ++i)
            if (!positions[i].allFinite())
                throw Error("non-finite embedded position at lattice point " +
                            lattice[i].to_string());
    }
};

}  // namespace latembed

#endif
