#include "recipesim/http_embedding.hpp"

#include <cmath>
#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace recipesim {

using nlohmann::json;

HttpEmbeddingProvider::HttpEmbeddingProvider(HttpEmbeddingConfig config)
    : config_(std::move(config)) {
  if (config_.dimension == 0) throw InputError("embedding service dimension must be positive");
  if (config_.max_in_flight == 0) config_.max_in_flight = 1;
  if (config_.batch_size == 0) config_.batch_size = 1;
  const auto scheme = config_.url.find("://");
  if (scheme == std::string::npos) {
    throw InputError("embedding service url needs a scheme: '" + config_.url + "'");
  }
  const auto slash = config_.url.find('/', scheme + 3);
  scheme_host_port_ = config_.url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : config_.url.substr(slash);
}

std::size_t HttpEmbeddingProvider::requests_sent() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::vector<std::vector<double>> HttpEmbeddingProvider::request(
    const std::vector<std::string>& texts) const {
  httplib::Client client(scheme_host_port_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const std::string body = json{{"texts", texts}}.dump();
  std::string last_error;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    {
      std::lock_guard lock(mutex_);
      ++requests_;
    }
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw InputError("embedding service rejected request with status " +
                       std::to_string(res->status));
    }
    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception&) {
      throw InputError("embedding service returned invalid JSON");
    }
    if (!reply.contains("vectors") || !reply["vectors"].is_array() ||
        reply["vectors"].size() != texts.size()) {
      throw InputError("embedding service reply must carry one vector per text");
    }
    std::vector<std::vector<double>> vectors;
    for (const auto& v : reply["vectors"]) {
      std::vector<double> values = v.get<std::vector<double>>();
      if (values.size() != config_.dimension) {
        throw InputError("embedding service returned dimension " + std::to_string(values.size()) +
                         ", expected " + std::to_string(config_.dimension));
      }
      double norm = 0.0;
      for (double x : values) {
        if (!std::isfinite(x)) throw InputError("embedding service returned non-finite values");
        norm += x * x;
      }
      if (norm == 0.0) throw InputError("embedding service returned a zero vector");
      vectors.push_back(std::move(values));
    }
    return vectors;
  }
  throw InputError("embedding service unavailable after " +
                   std::to_string(config_.max_retries + 1) + " attempts (" + last_error + ")");
}

Embedding HttpEmbeddingProvider::embed(const Recipe& recipe) const {
  {
    std::lock_guard lock(mutex_);
    if (const auto it = cache_.find(recipe.id); it != cache_.end()) {
      return {it->second, config_.model_tag};
    }
  }
  auto vectors = request({recipe.instruction_text()});
  std::lock_guard lock(mutex_);
  // First writer wins so repeated lookups stay identical.
  const auto [it, inserted] = cache_.emplace(recipe.id, std::move(vectors.front()));
  return {it->second, config_.model_tag};
}

void HttpEmbeddingProvider::prefetch(std::span<const Recipe* const> recipes) const {
  std::vector<const Recipe*> pending;
  {
    std::lock_guard lock(mutex_);
    for (const Recipe* r : recipes) {
      if (!cache_.contains(r->id)) pending.push_back(r);
    }
  }
  if (pending.empty()) return;

  std::counting_semaphore<> slots(static_cast<std::ptrdiff_t>(config_.max_in_flight));
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::jthread> workers;
  for (std::size_t start = 0; start < pending.size(); start += config_.batch_size) {
    const std::size_t end = std::min(pending.size(), start + config_.batch_size);
    slots.acquire();
    workers.emplace_back([&, start, end] {
      try {
        std::vector<std::string> texts;
        for (std::size_t k = start; k < end; ++k) texts.push_back(pending[k]->instruction_text());
        auto vectors = request(texts);
        std::lock_guard lock(mutex_);
        for (std::size_t k = start; k < end; ++k) {
          cache_.emplace(pending[k]->id, std::move(vectors[k - start]));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
      slots.release();
    });
  }
  workers.clear();  // joins
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace recipesim
