#include "ideaforge/ranking/types.hpp"

#include "ideaforge/errors.hpp"

namespace ideaforge::ranking {

using nlohmann::json;

json report_to_json(const TournamentReport& report) {
  json byes = json::array();
  for (const auto& bye : report.byes) {
    if (bye) {
      byes.push_back(*bye);
    } else {
      byes.push_back(nullptr);
    }
  }
  json matches = json::array();
  for (const auto& m : report.matches) {
    matches.push_back({{"round", m.round},
                       {"left", m.left},
                       {"right", m.right},
                       {"winner", m.winner},
                       {"swapped_presentation", m.swapped_presentation},
                       {"fallback_coin", m.fallback_coin},
                       {"judge_ref", m.judge_ref}});
  }
  return json{{"entries", report.entries}, {"rounds", report.rounds},
              {"seed", report.seed},       {"scores", report.scores},
              {"byes", byes},              {"matches", matches}};
}

TournamentReport report_from_json(const json& doc) {
  TournamentReport report;
  try {
    report.entries = doc.at("entries").get<size_t>();
    report.rounds = doc.at("rounds").get<size_t>();
    report.seed = doc.at("seed").get<uint64_t>();
    report.scores = doc.at("scores").get<std::vector<int>>();
    for (const auto& bye : doc.at("byes")) {
      if (bye.is_null()) {
        report.byes.emplace_back(std::nullopt);
      } else {
        report.byes.emplace_back(bye.get<size_t>());
      }
    }
    for (const auto& m : doc.at("matches")) {
      MatchRecord rec;
      rec.round = m.at("round").get<size_t>();
      rec.left = m.at("left").get<size_t>();
      rec.right = m.at("right").get<size_t>();
      rec.winner = m.at("winner").get<size_t>();
      rec.swapped_presentation = m.value("swapped_presentation", false);
      rec.fallback_coin = m.value("fallback_coin", false);
      rec.judge_ref = m.value("judge_ref", "");
      report.matches.push_back(std::move(rec));
    }
  } catch (const json::exception& err) {
    throw ParseError(std::string("bad tournament report: ") + err.what(),
                     "tournament");
  }
  return report;
}

}  // namespace ideaforge::ranking
