#pragma once

// Client side of the embedder service protocol.
//
//   POST /v1/embed  {"modality": "text"|"image",
//                    "items": [{"key": "...", "payload": "..."}],
//                    "model": "..."}                       (model optional)
//   -> 200 {"model_id": "...", "dim": D, "vectors": [{"key": "...", "vec": [...]}]}
//   GET  /health    -> 200 {"status": "ok", "model_id": "...", "dim": D}
//
// Text payloads are the surface string; image payloads are base64 file bytes.

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cccl/embedding_store.hpp"
#include "cccl/error.hpp"
#include "cccl/text.hpp"

namespace cccl {

struct EmbedItem {
  std::string key;
  std::string payload;
};

struct EmbedResponse {
  std::string model_id;
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
};

struct HealthStatus {
  std::string status;
  std::string model_id;
  std::size_t dim = 0;
};

/// Anything that turns a batch of payloads into vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual EmbedResponse embed(Modality modality, std::span<const EmbedItem> items) = 0;
};

struct RetryPolicy {
  std::size_t batch_size = 64;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
};

namespace detail {

inline EmbedResponse parse_embed_response(const std::string& body, std::span<const EmbedItem> items) {
  using nlohmann::json;
  EmbedResponse resp;
  try {
    auto j = json::parse(body);
    resp.model_id = j.at("model_id").get<std::string>();
    resp.dim = j.at("dim").get<std::size_t>();
    for (const auto& v : j.at("vectors"))
      resp.vectors.emplace_back(v.at("key").get<std::string>(), v.at("vec").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ProviderError(std::string("malformed provider response: ") + e.what());
  }
  if (resp.vectors.size() != items.size())
    throw ProviderError("provider returned " + std::to_string(resp.vectors.size()) + " vectors for " +
                        std::to_string(items.size()) + " items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (resp.vectors[i].first != items[i].key)
      throw ProviderError("provider response out of order at position " + std::to_string(i));
    if (resp.vectors[i].second.size() != resp.dim)
      throw ProviderError("provider vector dim " + std::to_string(resp.vectors[i].second.size()) +
                          " disagrees with reported dim " + std::to_string(resp.dim));
  }
  return resp;
}

}  // namespace detail

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(std::string base_url, std::string model = {}, RetryPolicy policy = {})
      : base_url_(std::move(base_url)), model_(std::move(model)), policy_(policy) {}

  const RetryPolicy& policy() const noexcept { return policy_; }

  HealthStatus health() {
    auto body = with_retries([&](httplib::Client& cli) { return cli.Get("/health"); });
    try {
      auto j = nlohmann::json::parse(body);
      return {j.value("status", std::string{}), j.value("model_id", std::string{}), j.value("dim", std::size_t{0})};
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("malformed health response: ") + e.what());
    }
  }

  EmbedResponse embed(Modality modality, std::span<const EmbedItem> items) override {
    nlohmann::json req = {{"modality", std::string(to_string(modality))}, {"items", nlohmann::json::array()}};
    for (const auto& it : items) req["items"].push_back({{"key", it.key}, {"payload", it.payload}});
    if (!model_.empty()) req["model"] = model_;
    const std::string payload = req.dump();
    auto body = with_retries([&](httplib::Client& cli) { return cli.Post("/v1/embed", payload, "application/json"); });
    return detail::parse_embed_response(body, items);
  }

 private:
  // 5xx and transport failures are retried with exponential backoff; 4xx
  // means the request itself is wrong and is surfaced at once.
  template <typename Call>
  std::string with_retries(Call&& call) {
    std::string last_error;
    auto backoff = policy_.initial_backoff;
    for (int attempt = 1; attempt <= policy_.attempts; ++attempt) {
      httplib::Client cli(base_url_);
      cli.set_connection_timeout(5);
      cli.set_read_timeout(120);
      auto res = call(cli);
      if (res && res->status == 200) return res->body;
      if (res && res->status >= 400 && res->status < 500)
        throw ProviderError("provider rejected request (HTTP " + std::to_string(res->status) + "): " + res->body);
      last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
      if (attempt < policy_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    throw ProviderError("provider at " + base_url_ + " failed after " + std::to_string(policy_.attempts) +
                            " attempts: " + last_error,
                        true);
  }

  std::string base_url_;
  std::string model_;
  RetryPolicy policy_;
};

// ---------------------------------------------------------------------------
// Fetching into a store

namespace detail {

inline std::size_t fetch_into(EmbeddingProvider& provider, EmbeddingStore& store, Modality modality,
                              std::span<const std::pair<EmbeddingKey, std::string>> requests,
                              std::size_t batch_size) {
  if (requests.empty()) throw InputError("no embeddings requested");
  if (batch_size == 0) batch_size = 1;
  for (const auto& [key, _] : requests)
    if (key.modality != modality)
      throw InputError("key " + key.str() + " has the wrong modality for this request");

  std::size_t added = 0;
  for (std::size_t start = 0; start < requests.size(); start += batch_size) {
    auto chunk = requests.subspan(start, std::min(batch_size, requests.size() - start));
    std::vector<EmbedItem> items;
    items.reserve(chunk.size());
    for (const auto& [key, payload] : chunk) items.push_back({key.str(), payload});
    auto resp = provider.embed(modality, items);

    if (auto d = store.dim(); d && *d != resp.dim) throw DimensionError(*d, resp.dim);
    if (!store.extractor_id().empty() && store.extractor_id() != resp.model_id)
      throw ProviderError("provider model '" + resp.model_id + "' differs from store extractor '" +
                          store.extractor_id() + "'");
    store.set_extractor_id(resp.model_id);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (!store.contains(chunk[i].first)) ++added;
      store.put(chunk[i].first, EmbeddingVector(std::move(resp.vectors[i].second)));
    }
  }
  return added;
}

}  // namespace detail

/// Embeds surfaces and stores one text vector per key. Returns the number of
/// keys that were not present before.
inline std::size_t fetch_text_embeddings(EmbeddingProvider& provider, EmbeddingStore& store,
                                         std::span<const std::pair<EmbeddingKey, std::string>> surfaces,
                                         std::size_t batch_size = RetryPolicy{}.batch_size) {
  return detail::fetch_into(provider, store, Modality::text, surfaces, batch_size);
}

/// Reads and base64-encodes each image file, then embeds it under its key.
inline std::size_t fetch_image_embeddings(EmbeddingProvider& provider, EmbeddingStore& store,
                                          std::span<const std::pair<EmbeddingKey, std::filesystem::path>> images,
                                          std::size_t batch_size = RetryPolicy{}.batch_size) {
  std::vector<std::pair<EmbeddingKey, std::string>> encoded;
  encoded.reserve(images.size());
  for (const auto& [key, path] : images) {
    std::string bytes;
    try {
      bytes = text::read_file(path);
    } catch (const InputError&) {
      throw InputError("unreadable image " + path.string() + " for " + key.str());
    }
    encoded.emplace_back(key, httplib::detail::base64_encode(bytes));
  }
  return detail::fetch_into(provider, store, Modality::image, encoded, batch_size);
}

}  // namespace cccl
