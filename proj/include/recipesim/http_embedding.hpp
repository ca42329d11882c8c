#pragma once

// Embedding provider backed by an external HTTP service.
//
//   POST <url>  {"texts": ["...", ...]}
//   200         {"vectors": [[...], ...]}   one vector per text, same order

#include <cstddef>
#include <map>
#include <mutex>
#include <string>

#include "recipesim/semantic.hpp"

namespace recipesim {

struct HttpEmbeddingConfig {
  std::string url;  // e.g. "http://127.0.0.1:8090/embed"
  std::string model_tag = "remote";
  std::size_t dimension = 0;
  double timeout_seconds = 30.0;
  std::size_t max_in_flight = 4;
  std::size_t max_retries = 2;
  std::size_t batch_size = 32;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

  const std::string& model_tag() const override { return config_.model_tag; }
  std::size_t dimension() const override { return config_.dimension; }

  // Cached per recipe id; a cache miss issues a single-text request.
  Embedding embed(const Recipe& recipe) const override;

  // Fetches all uncached recipes in batches, at most max_in_flight
  // requests at a time. Requests are retried up to max_retries times on
  // transport errors and 5xx responses.
  void prefetch(std::span<const Recipe* const> recipes) const override;

  std::size_t requests_sent() const;

 private:
  std::vector<std::vector<double>> request(const std::vector<std::string>& texts) const;

  HttpEmbeddingConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<double>> cache_;
  mutable std::size_t requests_ = 0;
};

}  // namespace recipesim
