#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>

#include "a11yrev/learners.hpp"

namespace a11yrev {

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Request handling for the scoring endpoint, independent of any transport.
/// The model is read-only after construction, so concurrent calls are safe.
///
///   GET  /health    -> 200 {"status":"ok"}
///   POST /classify  {"text": ...} or [{"text": ...}, ...]
///                   -> {"label": ..., "score": ...} or an array of them
/// Malformed JSON is 400, a body over the limit 413, unknown routes 404.
class ScoringService {
 public:
  /// The model must carry its featurizer.
  ScoringService(TrainedModel model, std::size_t max_body_bytes);

  HttpReply handle(const std::string& method, const std::string& path,
                   const std::string& body) const;
  std::size_t max_body_bytes() const { return max_body_bytes_; }
  const TrainedModel& model() const { return model_; }

 private:
  TrainedModel model_;
  Featurizer featurizer_;
  std::size_t max_body_bytes_;
};

/// HTTP binding of a ScoringService.
class ScoringServer {
 public:
  explicit ScoringServer(std::shared_ptr<const ScoringService> service);
  ~ScoringServer();
  ScoringServer(const ScoringServer&) = delete;
  ScoringServer& operator=(const ScoringServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace a11yrev
