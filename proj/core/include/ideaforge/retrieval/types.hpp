#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::retrieval {

struct Topic {
  std::string name;  // short slug, e.g. "factuality"
  std::string description;
};

// The seven research topics the pipeline generates ideas for.
const std::vector<Topic>& topic_catalog();
const Topic& topic_by_name(const std::string& name);  // throws ConfigError

enum class ActionKind { KeywordQuery, PaperQuery, GetReferences };

std::string action_kind_name(ActionKind kind);

struct RetrievalAction {
  ActionKind kind = ActionKind::KeywordQuery;
  std::string argument;
};

// "KeywordQuery(chain of thought)" etc.
std::string format_action(const RetrievalAction& action);

// Planner reply: either an action or an explicit stop.
struct PlannedStep {
  bool stop = false;
  RetrievalAction action;
};

// Scans free text for the first action form or Stop(); nullopt when the
// text contains neither (the caller re-asks).
std::optional<PlannedStep> parse_planned_step(const std::string& text);

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::string abstract_text;
  int relevance = 0;  // 1..10 once scored, 0 before
};

nlohmann::json paper_to_json(const PaperRecord& paper);
PaperRecord paper_from_json(const nlohmann::json& row);

struct ExecutedAction {
  RetrievalAction action;
  size_t added = 0;  // new unique papers appended by this action
};

struct RetrievalCaps {
  size_t per_call_keep = 20;  // top results kept per action
  size_t max_papers = 120;    // hard cap on the collected pool
  size_t max_actions = 30;
};

// Accumulated retrieval state for one topic: executed actions plus the
// collected papers, unique by paper_id, in arrival order.
struct RetrievalTrace {
  std::string topic_name;
  std::vector<ExecutedAction> actions;
  std::vector<PaperRecord> papers;

  bool contains(const std::string& paper_id) const {
    return seen_.count(paper_id) > 0;
  }

  // Appends if unseen; returns whether it was added.
  bool add_paper(PaperRecord paper);

 private:
  std::unordered_set<std::string> seen_;
};

}  // namespace ideaforge::retrieval
