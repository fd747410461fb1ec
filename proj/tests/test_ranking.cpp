#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "ideaforge/errors.hpp"
#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/provider/mock_provider.hpp"
#include "ideaforge/proposal/types.hpp"
#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/ranking/swiss.hpp"
#include "ideaforge/ranking/validation.hpp"
#include "ideaforge/util/rng.hpp"
#include "test_util.hpp"

using namespace ideaforge;

namespace {

ranking::CallbackJudge min_index_judge() {
  return ranking::CallbackJudge(
      [](size_t l, size_t r, const ranking::JudgeContext&) {
        return std::min(l, r);
      });
}

ranking::CallbackJudge seeded_coin_judge() {
  return ranking::CallbackJudge(
      [](size_t l, size_t r, const ranking::JudgeContext& ctx) {
        util::RandomStream rng(ctx.seed);
        return rng.bernoulli(0.5) ? l : r;
      });
}

proposal::ProjectProposal tiny_proposal(const std::string& title) {
  proposal::ProjectProposal p;
  p.title = title;
  p.problem_statement = "Models answer confidently even when wrong.";
  p.motivation = "Calibrated refusals would make deployments safer.";
  p.proposed_method = "Ask the model to grade its own evidence first.";
  p.experiment_plan = "Run the grader on three QA benchmarks.";
  p.test_case_examples = "Q: capital of France. A: Paris, confidence high.";
  p.fallback_plan = "Fall back to token-level entropy thresholds.";
  return p;
}

}  // namespace

TEST_CASE("pair_round sorts by score then index") {
  std::vector<int> scores{0, 2, 1, 2};
  std::vector<int> byes(4, 0);
  auto plan = ranking::pair_round(scores, byes, {});
  REQUIRE(plan.pairs.size() == 2);
  CHECK_FALSE(plan.bye.has_value());
  // Standings: 1 and 3 on two points, then 2, then 0.
  CHECK(plan.pairs[0] == std::pair<size_t, size_t>{1, 3});
  CHECK(plan.pairs[1] == std::pair<size_t, size_t>{2, 0});
}

TEST_CASE("pair_round swaps one step down to dodge a rematch") {
  std::vector<int> scores{1, 1, 0, 0};
  std::vector<int> byes(4, 0);
  std::set<std::pair<size_t, size_t>> played{{0, 1}};
  auto plan = ranking::pair_round(scores, byes, played);
  REQUIRE(plan.pairs.size() == 2);
  CHECK(plan.pairs[0] == std::pair<size_t, size_t>{0, 2});
  CHECK(plan.pairs[1] == std::pair<size_t, size_t>{1, 3});
}

TEST_CASE("pair_round allows the rematch when there is nowhere to swap") {
  std::vector<int> scores{0, 0};
  std::vector<int> byes(2, 0);
  std::set<std::pair<size_t, size_t>> played{{0, 1}};
  auto plan = ranking::pair_round(scores, byes, played);
  REQUIRE(plan.pairs.size() == 1);
  CHECK(plan.pairs[0] == std::pair<size_t, size_t>{0, 1});
}

TEST_CASE("pair_round gives the bye to the lowest entry with fewest byes") {
  std::vector<int> scores{3, 2, 1, 0, 0};
  std::vector<int> byes{1, 0, 0, 0, 1};
  auto plan = ranking::pair_round(scores, byes, {});
  // Entry 4 sits lowest but already had a bye; entry 3 is next.
  REQUIRE(plan.bye.has_value());
  CHECK(*plan.bye == 3);
  REQUIRE(plan.pairs.size() == 2);
  CHECK(plan.pairs[0] == std::pair<size_t, size_t>{0, 1});
  CHECK(plan.pairs[1] == std::pair<size_t, size_t>{2, 4});
}

TEST_CASE("pair_round rejects mismatched inputs") {
  CHECK_THROWS_AS(ranking::pair_round({0, 0}, {0}, {}), ConfigError);
}

TEST_CASE("four entry tournament against a hand-simulated oracle") {
  auto judge = min_index_judge();
  ranking::TournamentConfig config;
  config.rounds = 2;
  config.seed = 7;
  auto report = ranking::run_tournament(4, judge, config);

  CHECK(report.entries == 4);
  CHECK(report.rounds == 2);
  REQUIRE(report.matches.size() == 4);
  // Round 0: 0v1 and 2v3; round 1 pairs the winners and the losers.
  CHECK(report.matches[0].left == 0);
  CHECK(report.matches[0].right == 1);
  CHECK(report.matches[0].winner == 0);
  CHECK(report.matches[1].left == 2);
  CHECK(report.matches[1].right == 3);
  CHECK(report.matches[1].winner == 2);
  CHECK(report.matches[2].left == 0);
  CHECK(report.matches[2].right == 2);
  CHECK(report.matches[2].winner == 0);
  CHECK(report.matches[3].left == 1);
  CHECK(report.matches[3].right == 3);
  CHECK(report.matches[3].winner == 1);
  CHECK(report.scores == std::vector<int>{2, 1, 1, 0});

  auto ranking = ranking::final_ranking(report);
  REQUIRE(ranking.size() == 4);
  CHECK(ranking[0].index == 0);
  CHECK(ranking[1].index == 1);  // ties entry 2 on score and opposition
  CHECK(ranking[2].index == 2);
  CHECK(ranking[3].index == 3);
  // Everyone faced two points of opposition in this bracket.
  for (const auto& r : ranking) CHECK(r.opponent_score_sum == 2);
}

TEST_CASE("odd field rotates the bye through everyone") {
  auto judge = min_index_judge();
  ranking::TournamentConfig config;
  config.rounds = 5;
  config.seed = 3;
  auto report = ranking::run_tournament(5, judge, config);
  REQUIRE(report.byes.size() == 5);
  std::set<size_t> seen;
  for (const auto& bye : report.byes) {
    REQUIRE(bye.has_value());
    seen.insert(*bye);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("scores stay bounded and points are conserved") {
  auto judge = seeded_coin_judge();
  for (auto [entries, rounds] : std::vector<std::pair<size_t, size_t>>{
           {3, 1}, {8, 5}, {9, 3}, {16, 7}}) {
    ranking::TournamentConfig config;
    config.rounds = rounds;
    config.seed = 1000 + entries;
    auto report = ranking::run_tournament(entries, judge, config);
    int total = 0;
    for (int s : report.scores) {
      CHECK(s >= 0);
      CHECK(s <= static_cast<int>(rounds));
      total += s;
    }
    CHECK(total == static_cast<int>(rounds * (entries / 2)));
    CHECK(report.matches.size() == rounds * (entries / 2));
    // One match per entry per round.
    for (size_t round = 0; round < rounds; ++round) {
      std::set<size_t> busy;
      for (const auto& m : report.matches) {
        if (m.round != round) continue;
        CHECK(busy.insert(m.left).second);
        CHECK(busy.insert(m.right).second);
      }
      if (report.byes[round]) CHECK(busy.insert(*report.byes[round]).second);
      // Matches plus the bye account for every entry exactly once.
      CHECK(busy.size() == entries);
    }
  }
}

TEST_CASE("parallel judging replays the serial tournament exactly") {
  auto judge = seeded_coin_judge();
  ranking::TournamentConfig serial;
  serial.rounds = 7;
  serial.seed = 99;
  serial.max_parallel = 1;
  auto a = ranking::run_tournament(33, judge, serial);

  ranking::TournamentConfig parallel = serial;
  parallel.max_parallel = 4;
  auto b = ranking::run_tournament(33, judge, parallel);

  CHECK(ranking::report_to_json(a) == ranking::report_to_json(b));
}

TEST_CASE("report survives a json round trip") {
  auto judge = seeded_coin_judge();
  ranking::TournamentConfig config;
  config.rounds = 3;
  config.seed = 17;
  auto report = ranking::run_tournament(6, judge, config);
  auto doc = ranking::report_to_json(report);
  auto back = ranking::report_from_json(doc);
  CHECK(ranking::report_to_json(back) == doc);
}

TEST_CASE("a judge answering outside the match is an error") {
  ranking::CallbackJudge rogue(
      [](size_t, size_t, const ranking::JudgeContext&) -> size_t {
        return 999;
      });
  ranking::TournamentConfig config;
  config.rounds = 1;
  CHECK_THROWS_AS(ranking::run_tournament(4, rogue, config), StageError);
}

TEST_CASE("judge reply parsing wants a standalone capital letter") {
  CHECK(ranking::parse_judge_reply("A") == 'A');
  CHECK(ranking::parse_judge_reply("The answer is B.") == 'B');
  CHECK(ranking::parse_judge_reply("Answer: B") == 'B');
  CHECK(ranking::parse_judge_reply("ABBA") == 0);
  CHECK(ranking::parse_judge_reply("") == 0);
  CHECK(ranking::parse_judge_reply("a then b") == 0);
}

TEST_CASE("validate_ranker scores a judge against labeled pairs") {
  std::vector<ranking::LabeledPair> pairs;
  for (size_t i = 0; i < 25; ++i) pairs.push_back({i * 2, i * 2 + 1});

  ranking::CallbackJudge oracle(
      [](size_t l, size_t, const ranking::JudgeContext&) { return l; });
  auto report = ranking::validate_ranker(oracle, pairs, 11);
  CHECK(report.pairs == 25);
  CHECK(report.correct == 25);
  CHECK(report.accuracy == doctest::Approx(1.0));

  ranking::CallbackJudge anti(
      [](size_t, size_t r, const ranking::JudgeContext&) { return r; });
  auto inverted = ranking::validate_ranker(anti, pairs, 11);
  CHECK(inverted.accuracy == doctest::Approx(0.0));

  auto coin = seeded_coin_judge();
  std::vector<ranking::LabeledPair> many;
  for (size_t i = 0; i < 1000; ++i) many.push_back({i * 2, i * 2 + 1});
  auto chance = ranking::validate_ranker(coin, many, 2024);
  CHECK(chance.accuracy > 0.44);
  CHECK(chance.accuracy < 0.56);
}

TEST_CASE("score_gap compares the ends of a ranking") {
  std::vector<size_t> ranked;
  std::unordered_map<size_t, double> scores;
  for (size_t i = 0; i < 20; ++i) {
    ranked.push_back(i);
    scores[i] = 20.0 - static_cast<double>(i);
  }
  auto report = ranking::score_gap(ranked, scores, 10);
  CHECK(report.k == 10);
  CHECK(report.top_mean == 15.5);
  CHECK(report.bottom_mean == 5.5);
  CHECK(report.gap == 10.0);

  CHECK_THROWS_AS(ranking::score_gap(ranked, scores, 11), ConfigError);
  scores.erase(7);
  CHECK_THROWS_AS(ranking::score_gap(ranked, scores, 10), ConfigError);
}

TEST_CASE("llm judge follows the reply and falls back to a coin") {
  test_util::TempDir tmp("judge-cache");
  std::vector<proposal::ProjectProposal> proposals{
      tiny_proposal("Self-grading before answering"),
      tiny_proposal("Entropy-gated refusal")};

  ranking::JudgeContext ctx;
  ctx.seed = 12345;

  {
    provider::MockScript script;
    script.rules.push_back({ranking::kPairwiseMarker, "A", 0});
    provider::GatewayConfig config;
    config.cache_dir = tmp.path() / "a";
    config.retry.base_delay_ms = 0;
    provider::Gateway gateway(config,
                              std::make_shared<provider::MockProvider>(script));
    ranking::LlmPairwiseJudge judge(gateway, proposals, {});
    auto decision = judge.compare(0, 1, ctx);
    CHECK_FALSE(decision.fallback_coin);
    CHECK(decision.judge_ref.size() == 64);
    // "A" names whichever entry was shown first.
    CHECK(decision.winner == (decision.swapped_presentation ? 1u : 0u));
  }

  {
    provider::MockScript script;
    script.rules.push_back(
        {ranking::kPairwiseMarker, "neither option stands out", 0});
    provider::GatewayConfig config;
    config.cache_dir = tmp.path() / "b";
    config.retry.base_delay_ms = 0;
    provider::Gateway gateway(config,
                              std::make_shared<provider::MockProvider>(script));
    ranking::LlmPairwiseJudge judge(gateway, proposals, {});
    auto decision = judge.compare(0, 1, ctx);
    CHECK(decision.fallback_coin);
    CHECK((decision.winner == 0 || decision.winner == 1));
    // The coin is seeded, so the fallback replays identically.
    auto again = judge.compare(0, 1, ctx);
    CHECK(again.winner == decision.winner);
  }
}
