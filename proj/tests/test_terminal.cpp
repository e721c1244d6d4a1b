#include <doctest.h>

#include "ordembed/constraints.hpp"
#include "ordembed/error.hpp"
#include "ordembed/terminal_embed.hpp"
#include "ordembed/verifier.hpp"
#include "test_graphs.hpp"

using namespace ordembed;

namespace {

FiniteMetricSpace three() { return FiniteMetricSpace::from_upper_triangle(3, std::vector<double>{1, 2, 1.5}); }

// dist(0,2)=1, dist(0,3)=2, dist(1,2)=3, dist(1,3)=4
FiniteMetricSpace four() {
  return FiniteMetricSpace::from_upper_triangle(4, std::vector<double>{2.5, 1, 2, 3, 4, 2});
}

double sq(const Embedding& e, std::size_t i, std::size_t j) {
  double s = 0;
  for (std::size_t c = 0; c < e.dim(); ++c) s += (e.at(i, c) - e.at(j, c)) * (e.at(i, c) - e.at(j, c));
  return s;
}

}  // namespace

TEST_CASE("rank tables") {
  const auto r3 = rank_table(three(), {0});
  CHECK(r3.rank(0, 1) == 1);
  CHECK(r3.rank(0, 2) == 2);
  const auto r4 = rank_table(four(), {1, 0});
  CHECK(r4.terminals() == std::vector<std::size_t>{0, 1});
  CHECK(r4.rank(0, 2) == 1);
  CHECK(r4.rank(0, 3) == 2);
  CHECK(r4.rank(1, 2) == 3);
  CHECK(r4.rank(1, 3) == 4);
  CHECK(r4.is_terminal(1));
  CHECK_FALSE(r4.is_terminal(3));
}

TEST_CASE("tied terminal distances") {
  const auto tied = FiniteMetricSpace::from_upper_triangle(3, std::vector<double>{1, 1, 1});
  CHECK_THROWS_WITH_AS(rank_table(tied, {0}), doctest::Contains("dist(0,1)"), TieError);
  CHECK_THROWS_WITH_AS(rank_table(tied, {0}), doctest::Contains("dist(0,2)"), TieError);
  const auto lex = rank_table(tied, {0}, TieBreak::lexicographic);
  CHECK(lex.rank(0, 1) == 1);
  CHECK(lex.rank(0, 2) == 2);
}

TEST_CASE("n=3 construction with M=9") {
  const auto te = embed_terminals(three(), {0});
  CHECK(te.M == 9);
  CHECK(te.emb.dim() == 1);
  CHECK(te.emb.at(0, 0) == -9);
  CHECK(te.emb.at(1, 0) == 1);
  CHECK(te.emb.at(2, 0) == 2);
  CHECK(sq(te.emb, 0, 1) == 100);
  CHECK(sq(te.emb, 0, 2) == 121);
  const auto dom = dominance_check(te, three());
  CHECK(dom.ok());
  CHECK(dom.max_rank_mass == 4);
  CHECK(dom.bound == 9);
}

TEST_CASE("n=4 construction with M=128") {
  const auto te = embed_terminals(four(), {0, 1});
  CHECK(te.M == 128);
  CHECK(te.emb.coords() == std::vector<double>{-128, 0, 0, -128, 1, 3, 2, 4});
  CHECK(sq(te.emb, 0, 2) == 16650);
  CHECK(sq(te.emb, 0, 3) == 16916);
  CHECK(sq(te.emb, 1, 2) == 17162);
  CHECK(sq(te.emb, 1, 3) == 17428);
  CHECK(16650 == 10 + 2 * 1 * 128 + 128 * 128);
  const auto dom = dominance_check(te, four());
  CHECK(dom.ok());
  CHECK(dom.pairs_checked == 4);
  CHECK(dom.max_rank_mass == 20);
  CHECK(dom.bound == 128);
  CHECK(check_constraints(te.emb, extract_terminal(four(), {0, 1})).violated.empty());
}

TEST_CASE("offset threshold") {
  CHECK(minimum_offset(2, 4) == 128);
  CHECK(minimum_offset(1, 3, 3.0) == 6);  // ceil(sqrt(27))
  CHECK(minimum_offset(2, 5, kInfinityNorm) == 10);
  CHECK_THROWS_AS(minimum_offset(2, 5, 1.0), ValidationError);
  CHECK_THROWS_WITH_AS(embed_terminals(three(), {0}, 8), doctest::Contains("below"), ValidationError);
  const auto big = embed_terminals(three(), {0}, 1000);
  CHECK(big.M == 1000);
  CHECK(dominance_check(big, three()).ok());
  CHECK_THROWS_AS(embed_terminals(three(), {0, 1, 2}), ValidationError);
}

TEST_CASE("k = n-1 leaves one non-terminal") {
  const auto space = testgraphs::random_points(6, 3, 11);
  const auto te = embed_terminals(space, {0, 1, 2, 3, 5});
  CHECK(te.emb.dim() == 5);
  CHECK(check_constraints(te.emb, extract_terminal(space, {0, 1, 2, 3, 5})).violated.empty());
  CHECK(dominance_check(te, space).ok());
}

TEST_CASE("random metrics: zero violations, relaxation 1, exact dominance") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t n = 5 + s % 25;
    const bool graph = s % 2 == 0;
    const auto space = graph ? metric_from_graph(testgraphs::random_connected(n, n, s))
                              : testgraphs::random_points(n, 3, s);
    std::vector<std::size_t> terminals;
    for (std::size_t t = 0; t < 1 + s % 4; ++t) terminals.push_back((t * 7 + s) % n);
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    const auto tie = graph ? TieBreak::lexicographic : TieBreak::error;
    const auto te = embed_terminals(space, terminals, std::nullopt, tie);
    const auto cs = extract_terminal(space, terminals, TiePolicy::skip);
    CHECK(check_constraints(te.emb, cs).violated.empty());
    CHECK(relaxation(space, te.emb, cs) == 1.0);
    CHECK(dominance_check(te, space).ok());
  }
}

TEST_CASE("other norms") {
  const auto space = testgraphs::random_points(9, 2, 3);
  for (double p : {3.0, 4.0, kInfinityNorm}) {
    const auto te = embed_terminals(space, {1, 4}, std::nullopt, TieBreak::error, p);
    CHECK(check_constraints(te.emb, extract_terminal(space, {1, 4}), CheckOptions{p, 0}).violated.empty());
    CHECK(dominance_check(te, space).ok());
  }
}

TEST_CASE("dominance_check catches a tampered embedding") {
  auto te = embed_terminals(four(), {0, 1});
  te.emb.at(2, 0) = 2;
  te.emb.at(3, 0) = 1;
  CHECK_FALSE(dominance_check(te, four()).ok());
}
