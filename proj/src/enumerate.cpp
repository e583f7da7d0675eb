#include "cgd/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "cgd/parser.hpp"

namespace cgd {

std::vector<Game> enumerate_games(std::size_t day, std::size_t jobs) {
  if (day > 2) throw ResourceLimitError("enumeration is limited to birthday 2");
  std::vector<Game> games{zero()};
  for (std::size_t d = 1; d <= day; ++d) {
    const std::size_t subsets = std::size_t{1} << games.size();
    std::vector<std::set<Game>> found(subsets);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t l; (l = next++) < subsets;) {
        std::vector<Game> left;
        for (std::size_t i = 0; i < games.size(); ++i)
          if (l >> i & 1) left.push_back(games[i]);
        for (std::size_t r = 0; r < subsets; ++r) {
          std::vector<Game> right;
          for (std::size_t i = 0; i < games.size(); ++i)
            if (r >> i & 1) right.push_back(games[i]);
          found[l].insert(make_game(left, right));
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::max<std::size_t>(jobs, 1); ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::set<Game> all;
    for (const auto& s : found) all.insert(s.begin(), s.end());
    games.assign(all.begin(), all.end());
  }
  // stable order independent of interning history
  std::vector<std::pair<std::pair<std::uint32_t, std::string>, Game>> keyed;
  for (Game g : games) keyed.push_back({{birthday(g), print_game(g)}, g});
  std::sort(keyed.begin(), keyed.end());
  std::vector<Game> out;
  for (const auto& [_, g] : keyed) out.push_back(g);
  return out;
}

}  // namespace cgd
