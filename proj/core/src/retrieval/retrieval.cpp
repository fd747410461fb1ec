#include "ideaforge/retrieval/retrieval.hpp"

#include <algorithm>
#include <cctype>

#include "ideaforge/util/rng.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::retrieval {

namespace {

provider::CompletionRequest make_request(const LlmOptions& options,
                                         std::string prompt,
                                         std::uint64_t attempt) {
  provider::CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.seed = util::derive_seed(options.seed, "attempt", attempt);
  req.messages = {{"user", std::move(prompt)}};
  return req;
}

// "7", "7/10", "Score: 7" all yield 7; returns 0 when no integer in
// [1, 10] is found at the start of a digit run.
int parse_score_reply(const std::string& text) {
  for (size_t i = 0; i < text.size(); ++i) {
    if (!isdigit(static_cast<unsigned char>(text[i]))) continue;
    if (i > 0 && (isalnum(static_cast<unsigned char>(text[i - 1])) ||
                  text[i - 1] == '.' || text[i - 1] == '-')) {
      // Inside a word or a decimal like "3.5"; skip this digit run.
      while (i + 1 < text.size() &&
             isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
      }
      continue;
    }
    size_t end = i;
    while (end < text.size() && isdigit(static_cast<unsigned char>(text[end]))) {
      ++end;
    }
    int value = std::stoi(text.substr(i, end - i));
    if (value >= 1 && value <= 10) return value;
    return 0;  // an integer was present but out of range
  }
  return 0;
}

}  // namespace

std::string build_planner_prompt(const Topic& topic,
                                 const RetrievalTrace& trace) {
  std::string prompt =
      "You are collecting related literature for a research topic.\n";
  prompt += "Topic: " + topic.name + "\n";
  prompt += "Description: " + topic.description + "\n\n";
  prompt += "Available actions:\n";
  prompt += "  KeywordQuery(keywords)     search papers by keywords\n";
  prompt += "  PaperQuery(paper id)       fetch one known paper\n";
  prompt +=
      "  GetReferences(paper id)    fetch the references of a collected "
      "paper\n";
  prompt += "  Stop()                     finish collecting\n\n";
  if (trace.actions.empty()) {
    prompt += "No actions executed yet.\n";
  } else {
    prompt += "Actions so far:\n";
    for (const auto& a : trace.actions) {
      prompt += "  " + format_action(a.action) + " -> " +
                std::to_string(a.added) + " new papers\n";
    }
  }
  prompt += "Collected papers: " + std::to_string(trace.papers.size()) + "\n\n";
  prompt += std::string(kPlannerMarker) +
            ", in exactly the form shown above, and nothing else.\n";
  return prompt;
}

std::string build_score_prompt(const Topic& topic, const PaperRecord& paper) {
  std::string prompt =
      "Grade how relevant this paper is to the research topic.\n";
  prompt += "Topic: " + topic.description + "\n\n";
  prompt += "Title: " + paper.title + "\n";
  prompt += "Abstract: " + paper.abstract_text + "\n\n";
  prompt += "Reply with " + std::string(kScoreMarker) +
            " where 10 means directly relevant and 1 means unrelated.\n";
  return prompt;
}

std::optional<RetrievalAction> plan_action(const Topic& topic,
                                           const RetrievalTrace& trace,
                                           provider::Gateway& gateway,
                                           const LlmOptions& options) {
  std::string prompt = build_planner_prompt(topic, trace);
  std::string last_reply;
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    provider::Completion reply = gateway.complete(make_request(
        options, prompt, static_cast<std::uint64_t>(attempt) ^
                             (trace.actions.size() << 8)));
    last_reply = reply.text;
    if (auto step = parse_planned_step(reply.text)) {
      if (step->stop) return std::nullopt;
      return step->action;
    }
  }
  throw ParseError("planner reply had no recognizable action: \"" +
                       last_reply.substr(0, 120) + "\"",
                   "action");
}

size_t execute_action(const RetrievalAction& action, PaperSource& source,
                      RetrievalTrace& trace, const RetrievalCaps& caps) {
  std::vector<PaperRecord> results;
  switch (action.kind) {
    case ActionKind::KeywordQuery:
      results = source.keyword_search(action.argument, caps.per_call_keep);
      break;
    case ActionKind::PaperQuery: {
      auto paper = source.lookup(action.argument);
      if (!paper) {
        throw StageError("PaperQuery: unknown paper id \"" + action.argument +
                         "\"");
      }
      results.push_back(*paper);
      break;
    }
    case ActionKind::GetReferences: {
      if (!trace.contains(action.argument) &&
          !source.lookup(action.argument)) {
        throw StageError("GetReferences: unknown paper id \"" +
                         action.argument + "\"");
      }
      results = source.references(action.argument, caps.per_call_keep);
      break;
    }
  }

  size_t added = 0;
  for (auto& paper : results) {
    if (added >= caps.per_call_keep) break;
    if (trace.papers.size() >= caps.max_papers) break;
    if (trace.add_paper(std::move(paper))) ++added;
  }
  trace.actions.push_back({action, added});
  return added;
}

int score_paper(const Topic& topic, const PaperRecord& paper,
                provider::Gateway& gateway, const LlmOptions& options) {
  std::string prompt = build_score_prompt(topic, paper);
  std::string last_reply;
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    provider::Completion reply = gateway.complete(
        make_request(options, prompt, static_cast<std::uint64_t>(attempt)));
    last_reply = reply.text;
    int score = parse_score_reply(reply.text);
    if (score != 0) return score;
  }
  throw ParseError("no relevance score in [1,10] in reply: \"" +
                       last_reply.substr(0, 120) + "\"",
                   "relevance");
}

TopSelection select_top(const RetrievalTrace& trace, size_t n) {
  TopSelection out;
  out.papers = trace.papers;
  std::stable_sort(
      out.papers.begin(), out.papers.end(),
      [](const PaperRecord& a, const PaperRecord& b) {
        return a.relevance > b.relevance;
      });
  if (out.papers.size() > n) {
    out.papers.resize(n);
  } else if (out.papers.size() < n) {
    out.short_of_request = true;
  }
  return out;
}

RetrievalTrace run_retrieval(const Topic& topic, provider::Gateway& gateway,
                             PaperSource& source, const RetrievalCaps& caps,
                             const LlmOptions& options) {
  RetrievalTrace trace;
  trace.topic_name = topic.name;
  while (trace.papers.size() < caps.max_papers &&
         trace.actions.size() < caps.max_actions) {
    auto action = plan_action(topic, trace, gateway, options);
    if (!action) break;
    size_t before = trace.papers.size();
    execute_action(*action, source, trace, caps);
    for (size_t i = before; i < trace.papers.size(); ++i) {
      trace.papers[i].relevance =
          score_paper(topic, trace.papers[i], gateway, options);
    }
  }
  return trace;
}

}  // namespace ideaforge::retrieval
