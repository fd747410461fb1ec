#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>

#include "ideaforge/provider/cache.hpp"
#include "ideaforge/provider/provider.hpp"

namespace ideaforge::provider {

struct RetryPolicy {
  int max_attempts = 5;
  int base_delay_ms = 250;
  double multiplier = 2.0;
  int max_delay_ms = 8000;
};

// Zero means unlimited.
struct BudgetConfig {
  std::uint64_t max_requests = 0;
  double max_cost_units = 0.0;
};

// Thread-safe spend meter, charged before dispatch. Counters only grow.
class Budget {
 public:
  explicit Budget(BudgetConfig config) : config_(config) {}

  // Throws BudgetExhaustedError (leaving counters unchanged) when a
  // further request would exceed either limit.
  void charge_request();
  void add_cost(double units);

  std::uint64_t requests_used() const;
  double cost_used() const;

 private:
  BudgetConfig config_;
  mutable std::mutex mutex_;
  std::uint64_t requests_ = 0;
  double cost_ = 0.0;
};

struct GatewayConfig {
  std::filesystem::path cache_dir = "cache";
  RetryPolicy retry;
  BudgetConfig budget;
  int max_parallel = 8;
  // Cost accounting: (prompt + completion tokens) * this, per request.
  double cost_per_token = 0.001;
};

struct GatewayStats {
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t provider_calls = 0;  // dispatches that reached the provider
  std::uint64_t retries = 0;
  std::uint64_t requests_charged = 0;
  double cost_units = 0.0;
};

// Front door for all model traffic: content-addressed caching, bounded
// exponential-backoff retry, pre-dispatch budget enforcement, and a
// parallelism bound. A null provider is "replay mode": cache hits succeed,
// misses raise ProviderError without consuming budget.
class Gateway {
 public:
  Gateway(GatewayConfig config, std::shared_ptr<Provider> provider);
  ~Gateway();  // defined where Semaphore is complete

  Completion complete(const CompletionRequest& request);
  Embeddings embed(const EmbeddingRequest& request);

  GatewayStats stats() const;
  bool has_provider() const { return provider_ != nullptr; }
  const GatewayConfig& config() const { return config_; }

 private:
  void backoff(int attempt);
  template <typename Fn>
  auto with_retry(Fn&& fn) -> decltype(fn());

  std::mutex& stripe_for(const std::string& key);

  GatewayConfig config_;
  std::shared_ptr<Provider> provider_;
  ResponseCache cache_;
  Budget budget_;
  mutable std::mutex stats_mutex_;
  GatewayStats stats_;
  std::unique_ptr<class Semaphore> semaphore_;
  // Single-writer discipline per cache key: concurrent identical requests
  // serialize on a stripe, so the second one replays instead of paying.
  static constexpr size_t kStripes = 64;
  std::array<std::mutex, kStripes> stripes_;
};

}  // namespace ideaforge::provider
