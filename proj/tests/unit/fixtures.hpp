#pragma once

#include "flvg/corpus.hpp"

namespace fixture {

inline const flvg::harness::Corpus& corpus() {
    static const flvg::harness::Corpus c = flvg::harness::generate_corpus({});
    return c;
}

inline const flvg::media::IdentityVector& reference(std::size_t person) { return corpus().persons[person].reference.frames().front().identity; }

}  // namespace fixture
