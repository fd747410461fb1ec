// Command-line front end: pipeline stages, tournament utilities, and the
// review-analysis toolkit.

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ideaforge/errors.hpp"
#include "ideaforge/pipeline/pipeline.hpp"
#include "ideaforge/provider/http_provider.hpp"
#include "ideaforge/provider/mock_provider.hpp"
#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/ranking/swiss.hpp"
#include "ideaforge/ranking/validation.hpp"
#include "ideaforge/stats/tables.hpp"
#include "ideaforge/util/io.hpp"

namespace {

using ideaforge::BudgetExhaustedError;
using ideaforge::ConfigError;
using ideaforge::Error;
using nlohmann::json;

struct PipelineArgs {
  std::string config_path;
  std::string provider = "mock";  // mock | http | none
  std::string mock_script;
  std::string topic;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

void add_pipeline_options(CLI::App* cmd, PipelineArgs& args) {
  cmd->add_option("--config", args.config_path, "pipeline config JSON")
      ->required();
  cmd->add_option("--provider", args.provider,
                  "model backend: mock, http, or none (replay from cache)")
      ->check(CLI::IsMember({"mock", "http", "none"}));
  cmd->add_option("--mock-script", args.mock_script,
                  "scripted replies for the mock provider");
  cmd->add_option("--topic", args.topic, "run only this topic");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.has_seed = true; });
}

std::shared_ptr<ideaforge::provider::Provider> make_provider(
    const PipelineArgs& args) {
  if (args.provider == "none") return nullptr;
  if (args.provider == "http") {
    return std::make_shared<ideaforge::provider::HttpProvider>(
        ideaforge::provider::HttpProviderConfig{});
  }
  if (!args.mock_script.empty()) {
    return std::make_shared<ideaforge::provider::MockProvider>(
        ideaforge::provider::load_mock_script(args.mock_script));
  }
  return std::make_shared<ideaforge::provider::MockProvider>();
}

ideaforge::pipeline::Pipeline make_pipeline(const PipelineArgs& args) {
  ideaforge::pipeline::PipelineConfig config =
      ideaforge::pipeline::load_config(args.config_path);
  if (args.has_seed) config.seed = args.seed;
  return ideaforge::pipeline::Pipeline(config, make_provider(args));
}

void print_run_report(const ideaforge::pipeline::RunReport& report) {
  for (const auto& name : report.executed) {
    std::cout << "ran     " << name << "\n";
  }
  for (const auto& name : report.skipped) {
    std::cout << "skipped " << name << " (artifacts verified)\n";
  }
  std::printf(
      "provider calls %llu, cache hits %llu, misses %llu, retries %llu, "
      "cost %.3f units\n",
      static_cast<unsigned long long>(report.stats.provider_calls),
      static_cast<unsigned long long>(report.stats.cache_hits),
      static_cast<unsigned long long>(report.stats.cache_misses),
      static_cast<unsigned long long>(report.stats.retries),
      report.stats.cost_units);
}

// ---- rank utility modes ----------------------------------------------

int run_validate_pairs(const std::string& pairs_path,
                       const PipelineArgs& args, std::uint64_t seed) {
  auto provider = make_provider(args);
  ideaforge::provider::GatewayConfig gc;
  gc.cache_dir = "cache";
  ideaforge::provider::Gateway gateway(gc, provider);

  std::vector<ideaforge::proposal::ProjectProposal> proposals;
  std::vector<ideaforge::ranking::LabeledPair> pairs;
  for (const auto& row : ideaforge::util::read_jsonl(pairs_path)) {
    ideaforge::ranking::LabeledPair pair;
    pair.accepted = proposals.size();
    proposals.push_back(
        ideaforge::proposal::proposal_from_json(row.at("accepted")));
    pair.rejected = proposals.size();
    proposals.push_back(
        ideaforge::proposal::proposal_from_json(row.at("rejected")));
    pairs.push_back(pair);
  }
  if (pairs.empty()) {
    throw ConfigError("no pairs in " + pairs_path);
  }

  ideaforge::ranking::JudgeOptions jo;
  ideaforge::ranking::LlmPairwiseJudge judge(gateway, proposals, jo);
  ideaforge::ranking::ValidationReport report =
      ideaforge::ranking::validate_ranker(judge, pairs, seed);
  std::printf("pairs %zu  correct %zu  accuracy %.4f\n", report.pairs,
              report.correct, report.accuracy);
  return 0;
}

int run_score_gap(const std::string& tournament_path,
                  const std::string& scores_path, size_t k) {
  ideaforge::ranking::TournamentReport report =
      ideaforge::ranking::report_from_json(
          json::parse(ideaforge::util::read_file(tournament_path)));
  std::vector<ideaforge::ranking::RankedEntry> ranking =
      ideaforge::ranking::final_ranking(report);
  std::vector<size_t> order;
  for (const auto& entry : ranking) order.push_back(entry.index);

  std::map<size_t, double> loaded;
  auto rows = ideaforge::util::parse_csv(
      ideaforge::util::read_file(scores_path));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() < 2) continue;
    if (i == 0 && rows[i][0] == "entry") continue;  // optional header
    try {
      loaded[std::stoul(rows[i][0])] = std::stod(rows[i][1]);
    } catch (const std::exception&) {
      throw ConfigError("bad score row " + std::to_string(i + 1) + " in " +
                        scores_path);
    }
  }
  std::unordered_map<size_t, double> scores(loaded.begin(), loaded.end());

  ideaforge::ranking::ScoreGapReport gap =
      ideaforge::ranking::score_gap(order, scores, k);
  std::printf("k %zu  top mean %.4f  bottom mean %.4f  gap %.4f\n", gap.k,
              gap.top_mean, gap.bottom_mean, gap.gap);
  return 0;
}

// ---- analyze ----------------------------------------------------------

struct AnalyzeArgs {
  std::string reviews_path;
  std::string metric = "all";
  std::string unit = "all";
  size_t family = ideaforge::stats::kMetricCount;
  bool correlations = false;
  bool agreement = false;
  bool topics = false;
  bool tests_requested = false;  // --unit given explicitly
  size_t reps = 200;
  double fraction = 0.5;
  std::uint64_t seed = 20260819;
  std::string judge_scores;
  std::string out_path;
};

std::vector<ideaforge::stats::Metric> metrics_for(const std::string& name) {
  if (name == "all") {
    return {ideaforge::stats::kMetrics,
            ideaforge::stats::kMetrics + ideaforge::stats::kMetricCount};
  }
  return {ideaforge::stats::parse_metric(name)};
}

int run_analyze(const AnalyzeArgs& args) {
  namespace stats = ideaforge::stats;
  stats::ReviewSet reviews = stats::load_reviews(args.reviews_path);

  bool everything = !args.correlations && !args.agreement && !args.topics &&
                    !args.tests_requested;
  json out;
  out["reviews"] = reviews.records.size();

  std::vector<std::string> units;
  if (args.unit == "all") {
    units = {"review", "idea", "reviewer"};
  } else if (args.unit == "per-review" || args.unit == "review") {
    units = {"review"};
  } else if (args.unit == "per-idea" || args.unit == "idea") {
    units = {"idea"};
  } else if (args.unit == "per-reviewer" || args.unit == "reviewer") {
    units = {"reviewer"};
  } else {
    throw ConfigError("unknown unit \"" + args.unit +
                      "\" (per-review, per-idea, per-reviewer, all)");
  }

  if (everything || args.tests_requested) {
    json tests = json::array();
    for (const auto& unit : units) {
      for (auto metric : metrics_for(args.metric)) {
        stats::TestReport report;
        if (unit == "review") {
          report = stats::test_per_review(reviews, metric, args.family);
        } else if (unit == "idea") {
          report = stats::test_per_idea(reviews, metric, args.family);
        } else {
          report = stats::test_per_reviewer(reviews, metric, args.family);
        }
        std::cout << stats::format_test_report(report) << "\n";
        tests.push_back(stats::test_report_to_json(report));
      }
    }
    out["tests"] = std::move(tests);
  }

  if (everything || args.correlations) {
    stats::CorrelationMatrix matrix = stats::pearson_matrix(reviews);
    std::cout << stats::format_correlation_matrix(matrix) << "\n";
    out["correlations"] = stats::correlation_matrix_to_json(matrix);
  }

  if (everything || args.agreement) {
    json agreements = json::array();
    for (auto metric : metrics_for(args.metric)) {
      stats::AgreementResult result = stats::split_half_agreement(
          reviews, metric, args.reps, args.fraction, args.seed);
      std::string title =
          "split-half agreement, " + stats::metric_name(metric);
      std::cout << stats::format_agreement(result, title) << "\n";
      json row = stats::agreement_to_json(result);
      row["metric"] = stats::metric_name(metric);
      agreements.push_back(std::move(row));
    }
    out["agreement"] = std::move(agreements);
  }

  if (!args.judge_scores.empty()) {
    std::map<std::string, double> judge;
    auto rows = ideaforge::util::parse_csv(
        ideaforge::util::read_file(args.judge_scores));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() < 2) continue;
      if (i == 0 && (rows[i][0] == "idea_id" || rows[i][0] == "idea")) {
        continue;
      }
      try {
        judge[rows[i][0]] = std::stod(rows[i][1]);
      } catch (const std::exception&) {
        throw ConfigError("bad judge score row " + std::to_string(i + 1) +
                          " in " + args.judge_scores);
      }
    }
    json benches = json::array();
    for (auto metric : metrics_for(args.metric)) {
      auto consensus = stats::idea_consensus(reviews, metric);
      stats::AgreementResult result =
          stats::judge_benchmark(consensus, judge, args.fraction);
      std::string title =
          "judge benchmark, " + stats::metric_name(metric);
      std::cout << stats::format_agreement(result, title) << "\n";
      json row = stats::agreement_to_json(result);
      row["metric"] = stats::metric_name(metric);
      benches.push_back(std::move(row));
    }
    out["judge_benchmark"] = std::move(benches);
  }

  if (everything || args.topics) {
    json breakdowns = json::array();
    for (auto metric : metrics_for(args.metric)) {
      stats::TopicBreakdown breakdown =
          stats::topic_breakdown(reviews, metric);
      std::cout << stats::format_topic_breakdown(breakdown) << "\n";
      breakdowns.push_back(stats::topic_breakdown_to_json(breakdown));
    }
    out["topic_breakdown"] = std::move(breakdowns);
  }

  if (!args.out_path.empty()) {
    ideaforge::util::write_file_atomic(args.out_path, out.dump(2) + "\n");
    std::cout << "wrote " << args.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Research ideation pipeline: retrieval-grounded idea generation, "
      "near-duplicate filtering, proposal expansion, quality filtering, "
      "style normalization, tournament ranking, and review analysis"};
  app.require_subcommand(1);

  PipelineArgs pargs;
  std::vector<CLI::App*> stage_cmds;
  CLI::App* run_cmd =
      app.add_subcommand("run", "run every stage for every topic");
  add_pipeline_options(run_cmd, pargs);
  for (const auto& stage : ideaforge::pipeline::stage_names()) {
    CLI::App* cmd = app.add_subcommand(stage, "run the " + stage +
                                                  " stage only");
    if (stage != "rank") add_pipeline_options(cmd, pargs);
    stage_cmds.push_back(cmd);
  }

  // rank doubles as the tournament utility: stage mode with --config,
  // accuracy mode with --validate-pairs, gap mode with --scores.
  CLI::App* rank_cmd = stage_cmds.back();
  std::string pairs_path;
  std::string tournament_path;
  std::string scores_path;
  size_t gap_k = 10;
  std::uint64_t rank_seed = 0;
  rank_cmd->add_option("--config", pargs.config_path,
                       "pipeline config JSON (stage mode)");
  rank_cmd->add_option("--provider", pargs.provider,
                       "model backend: mock, http, or none")
      ->check(CLI::IsMember({"mock", "http", "none"}));
  rank_cmd->add_option("--mock-script", pargs.mock_script,
                       "scripted replies for the mock provider");
  rank_cmd->add_option("--topic", pargs.topic, "run only this topic");
  rank_cmd->add_option("--validate-pairs", pairs_path,
                       "JSONL of {accepted, rejected} proposal pairs; "
                       "reports judge accuracy");
  rank_cmd->add_option("--tournament", tournament_path,
                       "tournament.json for gap mode");
  rank_cmd->add_option("--scores", scores_path,
                       "CSV of entry,score for gap mode");
  rank_cmd->add_option("--k", gap_k, "group size for the score gap");
  rank_cmd->add_option("--seed", rank_seed,
                       "seed for pair validation judging");

  AnalyzeArgs aargs;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "statistics over blind review scores");
  analyze_cmd
      ->add_option("--reviews", aargs.reviews_path,
                   "review scores (.csv or .jsonl)")
      ->required();
  analyze_cmd->add_option(
      "--metric", aargs.metric,
      "novelty, excitement, feasibility, effectiveness, overall, or all");
  analyze_cmd
      ->add_option("--unit", aargs.unit,
                   "per-review, per-idea, per-reviewer, or all (default)")
      ->each([&aargs](const std::string&) { aargs.tests_requested = true; });
  analyze_cmd->add_option("--family", aargs.family,
                          "Bonferroni family size for adjusted p-values");
  analyze_cmd->add_flag("--correlations", aargs.correlations,
                        "only the metric correlation matrix");
  analyze_cmd->add_flag("--agreement", aargs.agreement,
                        "only split-half reviewer agreement");
  analyze_cmd->add_flag("--topics", aargs.topics,
                        "only the per-topic breakdown");
  analyze_cmd->add_option("--reps", aargs.reps,
                          "split-half repetitions (default 200)");
  analyze_cmd->add_option("--fraction", aargs.fraction,
                          "top/bottom fraction selected (default 0.5)");
  analyze_cmd->add_option("--seed", aargs.seed, "split-half seed");
  analyze_cmd->add_option("--judge-scores", aargs.judge_scores,
                          "CSV of idea_id,score to benchmark a judge");
  analyze_cmd->add_option("--out", aargs.out_path,
                          "write machine-readable analysis JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze_cmd->parsed()) {
      return run_analyze(aargs);
    }
    if (rank_cmd->parsed()) {
      if (!pairs_path.empty()) {
        return run_validate_pairs(pairs_path, pargs, rank_seed);
      }
      if (!scores_path.empty() || !tournament_path.empty()) {
        if (scores_path.empty() || tournament_path.empty()) {
          throw ConfigError(
              "gap mode needs both --tournament and --scores");
        }
        return run_score_gap(tournament_path, scores_path, gap_k);
      }
      if (pargs.config_path.empty()) {
        throw ConfigError(
            "rank needs --config (stage mode), --validate-pairs, or "
            "--tournament with --scores");
      }
      print_run_report(make_pipeline(pargs).run_stage("rank", pargs.topic));
      return 0;
    }
    if (run_cmd->parsed()) {
      print_run_report(make_pipeline(pargs).run(pargs.topic));
      return 0;
    }
    for (CLI::App* cmd : stage_cmds) {
      if (cmd->parsed()) {
        print_run_report(
            make_pipeline(pargs).run_stage(cmd->get_name(), pargs.topic));
        return 0;
      }
    }
    throw ConfigError("no subcommand selected");
  } catch (const BudgetExhaustedError& err) {
    std::cerr << "budget exhausted: " << err.what() << "\n";
    return 4;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
}
