#pragma once

#include <cstddef>
#include <vector>

#include "cgd/game.hpp"

namespace cgd {

// Every canonical game with birthday <= day, by brute force over option
// subsets of the previous day, sorted by birthday and then printed form.
// Throws ResourceLimitError for day > 2.
std::vector<Game> enumerate_games(std::size_t day, std::size_t jobs = 1);

}  // namespace cgd
