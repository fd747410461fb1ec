#include "ideaforge/pipeline/config.hpp"

#include <set>

#include "ideaforge/errors.hpp"
#include "ideaforge/retrieval/types.hpp"
#include "ideaforge/util/digest.hpp"
#include "ideaforge/util/io.hpp"

namespace ideaforge::pipeline {

using nlohmann::json;

PipelineConfig config_from_json(const json& doc) {
  static const std::set<std::string> known = {
      "seed",          "topics",       "out_dir",      "cache_dir",
      "assets_dir",    "models",       "paper_source", "retrieval",
      "generation",    "dedup",        "expansion",    "ranking",
      "budget",        "re_asks",      "max_parallel", "cost_per_token",
      "assets"};
  if (!doc.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown config key \"" + key + "\"");
    }
  }

  PipelineConfig config;
  try {
    config.seed = doc.value("seed", std::uint64_t{0});
    config.topics = doc.value("topics", std::vector<std::string>{});
    config.out_dir = doc.value("out_dir", std::string("out"));
    config.cache_dir = doc.value("cache_dir", std::string("cache"));
    config.assets_dir = doc.value("assets_dir", std::string("assets"));
    config.paper_source = doc.value("paper_source", std::string("synthetic"));

    if (doc.contains("models")) {
      const json& m = doc["models"];
      config.chat_model = m.value("chat", config.chat_model);
      config.embed_model = m.value("embedding", config.embed_model);
    }
    if (doc.contains("retrieval")) {
      const json& r = doc["retrieval"];
      config.retrieval_per_call =
          r.value("per_call_keep", config.retrieval_per_call);
      config.retrieval_max_papers =
          r.value("max_papers", config.retrieval_max_papers);
      config.retrieval_max_actions =
          r.value("max_actions", config.retrieval_max_actions);
    }
    if (doc.contains("generation")) {
      const json& g = doc["generation"];
      config.ideas_per_topic =
          g.value("ideas_per_topic", config.ideas_per_topic);
      config.batch_size = g.value("batch_size", config.batch_size);
      config.rag_probability =
          g.value("rag_probability", config.rag_probability);
      config.rag_pool = g.value("rag_pool", config.rag_pool);
      config.rag_sample = g.value("rag_sample", config.rag_sample);
      config.max_prompt_tokens =
          g.value("max_prompt_tokens", config.max_prompt_tokens);
      config.generation_temperature =
          g.value("temperature", config.generation_temperature);
      config.generation_max_tokens =
          g.value("max_tokens", config.generation_max_tokens);
    }
    if (doc.contains("dedup")) {
      const json& d = doc["dedup"];
      config.dedup_threshold = d.value("threshold", config.dedup_threshold);
      config.dedup_compare_all_prior =
          d.value("compare_all_prior", config.dedup_compare_all_prior);
      config.curve_bucket = d.value("curve_bucket", config.curve_bucket);
    }
    if (doc.contains("expansion")) {
      const json& e = doc["expansion"];
      config.expand_top = e.value("expand_top", config.expand_top);
      config.novelty_top = e.value("novelty_top", config.novelty_top);
    }
    if (doc.contains("ranking")) {
      config.ranking_rounds =
          doc["ranking"].value("rounds", config.ranking_rounds);
    }
    if (doc.contains("budget")) {
      const json& b = doc["budget"];
      config.budget_max_requests =
          b.value("max_requests", config.budget_max_requests);
      config.budget_max_cost_units =
          b.value("max_cost_units", config.budget_max_cost_units);
    }
    config.re_asks = doc.value("re_asks", config.re_asks);
    config.max_parallel = doc.value("max_parallel", config.max_parallel);
    config.cost_per_token =
        doc.value("cost_per_token", config.cost_per_token);
    if (doc.contains("assets")) {
      const json& a = doc["assets"];
      config.proposal_template = a.value(
          "proposal_template", config.proposal_template.string());
      config.style_prompt = a.value("style_prompt",
                                    config.style_prompt.string());
      config.seed_demo_dir =
          a.value("seed_demo_dir", config.seed_demo_dir.string());
      config.proposal_demo =
          a.value("proposal_demo", config.proposal_demo.string());
    }
  } catch (const json::exception& err) {
    throw ConfigError(std::string("bad config value: ") + err.what());
  }

  if (config.topics.empty()) {
    throw ConfigError("config lists no topics");
  }
  for (const auto& name : config.topics) {
    retrieval::topic_by_name(name);  // throws ConfigError when unknown
  }
  if (config.paper_source != "synthetic" && config.paper_source != "live") {
    throw ConfigError("paper_source must be \"synthetic\" or \"live\"");
  }
  if (config.batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (config.ideas_per_topic == 0) {
    throw ConfigError("ideas_per_topic must be >= 1");
  }
  if (config.rag_probability < 0.0 || config.rag_probability > 1.0) {
    throw ConfigError("rag_probability must lie in [0, 1]");
  }
  if (config.rag_sample > config.rag_pool) {
    throw ConfigError("rag_sample cannot exceed rag_pool");
  }
  if (config.dedup_threshold < 0.0 || config.dedup_threshold > 1.0) {
    throw ConfigError("dedup threshold must lie in [0, 1]");
  }
  if (config.curve_bucket == 0) {
    throw ConfigError("curve_bucket must be >= 1");
  }
  if (config.ranking_rounds == 0) {
    throw ConfigError("ranking rounds must be >= 1");
  }
  if (config.re_asks < 0) throw ConfigError("re_asks must be >= 0");
  if (config.max_parallel < 1) {
    throw ConfigError("max_parallel must be >= 1");
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(util::read_file(path));
  } catch (const json::exception& err) {
    throw ConfigError("config " + path.string() +
                      " is not valid JSON: " + err.what());
  }
  return config_from_json(doc);
}

json config_to_json(const PipelineConfig& c) {
  return json{
      {"seed", c.seed},
      {"topics", c.topics},
      {"out_dir", c.out_dir.string()},
      {"cache_dir", c.cache_dir.string()},
      {"assets_dir", c.assets_dir.string()},
      {"models", {{"chat", c.chat_model}, {"embedding", c.embed_model}}},
      {"paper_source", c.paper_source},
      {"retrieval",
       {{"per_call_keep", c.retrieval_per_call},
        {"max_papers", c.retrieval_max_papers},
        {"max_actions", c.retrieval_max_actions}}},
      {"generation",
       {{"ideas_per_topic", c.ideas_per_topic},
        {"batch_size", c.batch_size},
        {"rag_probability", c.rag_probability},
        {"rag_pool", c.rag_pool},
        {"rag_sample", c.rag_sample},
        {"max_prompt_tokens", c.max_prompt_tokens},
        {"temperature", c.generation_temperature},
        {"max_tokens", c.generation_max_tokens}}},
      {"dedup",
       {{"threshold", c.dedup_threshold},
        {"compare_all_prior", c.dedup_compare_all_prior},
        {"curve_bucket", c.curve_bucket}}},
      {"expansion",
       {{"expand_top", c.expand_top}, {"novelty_top", c.novelty_top}}},
      {"ranking", {{"rounds", c.ranking_rounds}}},
      {"budget",
       {{"max_requests", c.budget_max_requests},
        {"max_cost_units", c.budget_max_cost_units}}},
      {"re_asks", c.re_asks},
      {"max_parallel", c.max_parallel},
      {"cost_per_token", c.cost_per_token},
      {"assets",
       {{"proposal_template", c.proposal_template.string()},
        {"style_prompt", c.style_prompt.string()},
        {"seed_demo_dir", c.seed_demo_dir.string()},
        {"proposal_demo", c.proposal_demo.string()}}}};
}

std::string config_digest(const PipelineConfig& config) {
  return util::sha256_hex(config_to_json(config).dump());
}

}  // namespace ideaforge::pipeline
