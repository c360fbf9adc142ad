#pragma once

#include <string>
#include <vector>

#include "dialshape/episode.hpp"
#include "dialshape/rnn.hpp"

namespace dialshape {

/// Line-delimited episode persistence: one JSON record per dialogue with
/// fields id, ser, success, return, turns[{sys_act, obs_act, confidence,
/// reward}]. Beliefs and features are not stored; they are recomputed
/// deterministically from the acts on load.
void save_corpus(const std::vector<Episode>& episodes, const std::string& path);

/// Loads a corpus and rebuilds beliefs and feature vectors against the
/// given ontology. Unknown acts, slots, or values are hard errors.
std::vector<Episode> load_corpus(const std::string& path, const Ontology& ontology);

/// Projects episodes onto supervised (feature sequence, return) pairs.
std::vector<ReturnSequence> to_return_sequences(const std::vector<Episode>& episodes);

}  // namespace dialshape
