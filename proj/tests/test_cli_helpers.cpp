#include <doctest.h>

#include "../tools/commands.hpp"

using namespace subsel;
using subsel::cli::parse_fractions;
using subsel::cli::proportional_budget;

TEST_CASE("fraction lists and ranges") {
  CHECK(parse_fractions("5:100:5").size() == 20);
  CHECK(parse_fractions("5:100:5").back() == 100.0);
  CHECK(parse_fractions("0.5,1.5,100") == std::vector<double>{0.5, 1.5, 100});
  CHECK(parse_fractions("10:40:10") == std::vector<double>{10, 20, 30, 40});
  for (auto bad : {"", "0", "101", "5:100", "a,b", "10:5:-1", "10,,20"}) {
    CHECK_THROWS_AS(parse_fractions(bad), Error);
  }
}

TEST_CASE("proportional budgets") {
  CHECK(proportional_budget({50, 30, 20}, 10) == std::vector<std::size_t>{5, 3, 2});
  CHECK(proportional_budget({1, 1, 1}, 2) == std::vector<std::size_t>{1, 1, 0});
  CHECK(proportional_budget({2, 7}, 9) == std::vector<std::size_t>{2, 7});
  CHECK(proportional_budget({3, 3}, 0) == std::vector<std::size_t>{0, 0});
  CHECK(proportional_budget({10, 5}, 4) == std::vector<std::size_t>{3, 1});
}
