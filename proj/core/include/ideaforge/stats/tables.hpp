#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ideaforge/stats/protocol.hpp"

namespace ideaforge::stats {

// Fixed-width text renderings of the analysis reports, one row per
// condition, aligned for terminal reading. JSON forms carry full precision.

std::string format_test_report(const TestReport& report);
std::string format_correlation_matrix(const CorrelationMatrix& matrix);
std::string format_agreement(const AgreementResult& result,
                             const std::string& title);
std::string format_topic_breakdown(const TopicBreakdown& breakdown);

nlohmann::json test_report_to_json(const TestReport& report);
nlohmann::json correlation_matrix_to_json(const CorrelationMatrix& matrix);
nlohmann::json agreement_to_json(const AgreementResult& result);
nlohmann::json topic_breakdown_to_json(const TopicBreakdown& breakdown);

}  // namespace ideaforge::stats
