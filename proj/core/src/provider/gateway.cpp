#include "ideaforge/provider/gateway.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <thread>

#include "ideaforge/dedup/dedup.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::provider {

using nlohmann::json;

// Counting semaphore bounding in-flight provider dispatches.
class Semaphore {
 public:
  explicit Semaphore(int slots) : slots_(slots) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [this] { return slots_ > 0; });
    --slots_;
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++slots_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int slots_;
};

namespace {

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(Semaphore& s) : s_(s) { s_.acquire(); }
  ~SemaphoreGuard() { s_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  Semaphore& s_;
};

}  // namespace

void Budget::charge_request() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (config_.max_requests > 0 && requests_ + 1 > config_.max_requests) {
    throw BudgetExhaustedError(
        "request budget exhausted (" + std::to_string(config_.max_requests) +
        " requests)");
  }
  if (config_.max_cost_units > 0.0 && cost_ >= config_.max_cost_units) {
    throw BudgetExhaustedError("cost budget exhausted (" +
                               std::to_string(config_.max_cost_units) +
                               " units)");
  }
  ++requests_;
}

void Budget::add_cost(double units) {
  std::lock_guard<std::mutex> lock(mutex_);
  cost_ += units;
}

std::uint64_t Budget::requests_used() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

double Budget::cost_used() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cost_;
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Provider> provider)
    : config_(std::move(config)),
      provider_(std::move(provider)),
      cache_(config_.cache_dir),
      budget_(config_.budget),
      semaphore_(std::make_unique<Semaphore>(
          config_.max_parallel > 0 ? config_.max_parallel : 1)) {}

Gateway::~Gateway() = default;

void Gateway::backoff(int attempt) {
  double delay = config_.retry.base_delay_ms *
                 std::pow(config_.retry.multiplier, attempt);
  delay = std::min(delay, static_cast<double>(config_.retry.max_delay_ms));
  if (delay > 0) {
    std::this_thread::sleep_for(
        std::chrono::milliseconds(static_cast<long>(delay)));
  }
}

template <typename Fn>
auto Gateway::with_retry(Fn&& fn) -> decltype(fn()) {
  int attempts = std::max(1, config_.retry.max_attempts);
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const TransientProviderError& e) {
      if (attempt + 1 >= attempts) {
        throw ProviderError(std::string("provider failed after ") +
                            std::to_string(attempts) +
                            " attempts: " + e.what());
      }
      {
        std::lock_guard<std::mutex> lock(stats_mutex_);
        ++stats_.retries;
      }
      backoff(attempt);
    }
  }
}

std::mutex& Gateway::stripe_for(const std::string& key) {
  size_t h = std::hash<std::string>{}(key);
  return stripes_[h % kStripes];
}

Completion Gateway::complete(const CompletionRequest& request) {
  std::string key = cache_key(request);
  auto from_payload = [&key](const json& payload) {
    Completion c;
    c.text = payload["text"].get<std::string>();
    c.usage.prompt_tokens =
        payload["usage"]["prompt_tokens"].get<std::uint64_t>();
    c.usage.completion_tokens =
        payload["usage"]["completion_tokens"].get<std::uint64_t>();
    c.from_cache = true;
    c.cache_key = key;
    return c;
  };
  if (auto cached = cache_.load(request.model, key)) {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_hits;
    return from_payload(*cached);
  }
  std::lock_guard<std::mutex> stripe(stripe_for(key));
  if (auto cached = cache_.load(request.model, key)) {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_hits;
    return from_payload(*cached);
  }
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_misses;
  }
  if (!provider_) {
    throw ProviderError("cache miss with provider disabled (key " + key + ")");
  }
  budget_.charge_request();
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.requests_charged;
  }

  Completion result = with_retry([&] {
    SemaphoreGuard guard(*semaphore_);
    {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.provider_calls;
    }
    return provider_->complete(request);
  });
  result.from_cache = false;
  result.cache_key = key;

  double cost = config_.cost_per_token *
                static_cast<double>(result.usage.prompt_tokens +
                                    result.usage.completion_tokens);
  budget_.add_cost(cost);
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    stats_.cost_units += cost;
  }

  cache_.store(request.model, key, "completion",
               json{{"text", result.text},
                    {"usage",
                     {{"prompt_tokens", result.usage.prompt_tokens},
                      {"completion_tokens", result.usage.completion_tokens}}}});
  return result;
}

Embeddings Gateway::embed(const EmbeddingRequest& request) {
  std::string key = cache_key(request);
  auto from_payload = [&key](const json& payload) {
    Embeddings e;
    e.vectors = payload["vectors"].get<std::vector<std::vector<double>>>();
    e.from_cache = true;
    e.cache_key = key;
    return e;
  };
  if (auto cached = cache_.load(request.model, key)) {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_hits;
    return from_payload(*cached);
  }
  std::lock_guard<std::mutex> stripe(stripe_for(key));
  if (auto cached = cache_.load(request.model, key)) {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_hits;
    return from_payload(*cached);
  }
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.cache_misses;
  }
  if (!provider_) {
    throw ProviderError("cache miss with provider disabled (key " + key + ")");
  }
  budget_.charge_request();
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.requests_charged;
  }

  std::vector<std::vector<double>> raw = with_retry([&] {
    SemaphoreGuard guard(*semaphore_);
    {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.provider_calls;
    }
    return provider_->embed(request);
  });
  if (raw.size() != request.texts.size()) {
    throw ProviderError("embedding provider returned " +
                        std::to_string(raw.size()) + " vectors for " +
                        std::to_string(request.texts.size()) + " texts");
  }

  Embeddings result;
  result.vectors.reserve(raw.size());
  for (auto& v : raw) {
    result.vectors.push_back(dedup::l2_normalize(std::move(v)));
  }
  result.from_cache = false;
  result.cache_key = key;

  std::uint64_t approx = 0;
  for (const auto& t : request.texts) approx += util::approx_tokens(t);
  result.usage.prompt_tokens = approx;
  double cost = config_.cost_per_token * static_cast<double>(approx);
  budget_.add_cost(cost);
  {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    stats_.cost_units += cost;
  }

  cache_.store(request.model, key, "embedding",
               json{{"vectors", result.vectors}});
  return result;
}

GatewayStats Gateway::stats() const {
  std::lock_guard<std::mutex> lock(stats_mutex_);
  return stats_;
}

}  // namespace ideaforge::provider
