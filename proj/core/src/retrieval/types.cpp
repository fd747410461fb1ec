#include "ideaforge/retrieval/types.hpp"

#include "ideaforge/errors.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::retrieval {

using nlohmann::json;

const std::vector<Topic>& topic_catalog() {
  static const std::vector<Topic> topics = {
      {"bias",
       "novel prompting methods to reduce social biases and stereotypes of "
       "large language models"},
      {"coding",
       "novel prompting methods for large language models to improve code "
       "generation"},
      {"safety",
       "novel prompting methods to improve large language models' robustness "
       "against adversarial attacks or improve their security or privacy"},
      {"multilingual",
       "novel prompting methods to improve large language models' "
       "performance on multilingual tasks or low-resource languages and "
       "vernacular languages"},
      {"factuality",
       "novel prompting methods that can improve factuality and reduce "
       "hallucination of large language models"},
      {"math",
       "novel prompting methods for large language models to improve "
       "mathematical problem solving"},
      {"uncertainty",
       "novel prompting methods that can better quantify uncertainty or "
       "calibrate the confidence of large language models"},
  };
  return topics;
}

const Topic& topic_by_name(const std::string& name) {
  std::string needle = util::to_lower(util::trim(name));
  for (const Topic& t : topic_catalog()) {
    if (t.name == needle) return t;
  }
  throw ConfigError("unknown topic: \"" + name + "\"");
}

std::string action_kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::KeywordQuery:
      return "KeywordQuery";
    case ActionKind::PaperQuery:
      return "PaperQuery";
    case ActionKind::GetReferences:
      return "GetReferences";
  }
  return "KeywordQuery";
}

std::string format_action(const RetrievalAction& action) {
  return action_kind_name(action.kind) + "(" + action.argument + ")";
}

namespace {

// Case-insensitive find.
size_t ifind(const std::string& haystack, const std::string& needle) {
  std::string h = util::to_lower(haystack);
  std::string n = util::to_lower(needle);
  return h.find(n);
}

}  // namespace

std::optional<PlannedStep> parse_planned_step(const std::string& text) {
  struct Candidate {
    size_t pos;
    ActionKind kind;
    size_t tag_len;
  };
  std::optional<Candidate> best;
  for (ActionKind kind : {ActionKind::KeywordQuery, ActionKind::PaperQuery,
                          ActionKind::GetReferences}) {
    std::string tag = action_kind_name(kind) + "(";
    size_t pos = ifind(text, tag);
    if (pos != std::string::npos && (!best || pos < best->pos)) {
      best = Candidate{pos, kind, tag.size()};
    }
  }
  size_t stop_pos = ifind(text, "stop()");
  if (stop_pos != std::string::npos && (!best || stop_pos < best->pos)) {
    return PlannedStep{true, {}};
  }
  if (!best) return std::nullopt;

  size_t arg_start = best->pos + best->tag_len;
  size_t close = text.find(')', arg_start);
  if (close == std::string::npos) return std::nullopt;
  std::string arg = util::trim(text.substr(arg_start, close - arg_start));
  if (arg.empty()) return std::nullopt;
  return PlannedStep{false, {best->kind, arg}};
}

json paper_to_json(const PaperRecord& paper) {
  return json{{"paper_id", paper.paper_id},
              {"title", paper.title},
              {"abstract", paper.abstract_text},
              {"relevance", paper.relevance}};
}

PaperRecord paper_from_json(const json& row) {
  PaperRecord p;
  p.paper_id = row.at("paper_id").get<std::string>();
  p.title = row.value("title", "");
  p.abstract_text = row.value("abstract", "");
  p.relevance = row.value("relevance", 0);
  return p;
}

bool RetrievalTrace::add_paper(PaperRecord paper) {
  if (paper.paper_id.empty() || !seen_.insert(paper.paper_id).second) {
    return false;
  }
  papers.push_back(std::move(paper));
  return true;
}

}  // namespace ideaforge::retrieval
