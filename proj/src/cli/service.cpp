#include "a11yrev/service.hpp"

#include <httplib.h>
#include <json.hpp>

namespace a11yrev {

namespace {

using json = nlohmann::json;

HttpReply error_reply(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump(), "application/json"};
}

}  // namespace

ScoringService::ScoringService(TrainedModel model, std::size_t max_body_bytes)
    : model_(std::move(model)),
      featurizer_([&] {
        if (!model_.featurizer()) {
          throw LearnerError("model file carries no featurizer settings; retrain it with `train`");
        }
        return model_.featurizer()->make();
      }()),
      max_body_bytes_(max_body_bytes) {}

HttpReply ScoringService::handle(const std::string& method, const std::string& path,
                                 const std::string& body) const {
  if (path == "/health") {
    if (method != "GET") return error_reply(405, "use GET");
    return {200, R"({"status":"ok"})", "application/json"};
  }
  if (path != "/classify") return error_reply(404, "unknown route " + path);
  if (method != "POST") return error_reply(405, "use POST");
  if (body.size() > max_body_bytes_) {
    return error_reply(413, "body exceeds " + std::to_string(max_body_bytes_) + " bytes");
  }

  const json request = json::parse(body, nullptr, false);
  if (request.is_discarded()) return error_reply(400, "malformed JSON");

  const auto score_one = [&](const json& item, json& result) -> bool {
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string()) return false;
    const double score = predict_score(model_, featurizer_.featurize(item["text"].get<std::string>()));
    const Label label = score >= model_.threshold() ? Label::accessibility : Label::other;
    result = json{{"label", std::string(to_string(label))}, {"score", score}};
    return true;
  };

  json response;
  if (request.is_array()) {
    response = json::array();
    for (const auto& item : request) {
      json r;
      if (!score_one(item, r)) return error_reply(400, "each element needs a string \"text\"");
      response.push_back(std::move(r));
    }
  } else if (!score_one(request, response)) {
    return error_reply(400, "expected {\"text\": string} or an array of them");
  }
  return {200, response.dump(), "application/json"};
}

struct ScoringServer::Impl {
  std::shared_ptr<const ScoringService> service;
  httplib::Server server;
};

ScoringServer::ScoringServer(std::shared_ptr<const ScoringService> service)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto* impl = impl_.get();
  // a little slack so the service itself reports oversize bodies as JSON
  impl->server.set_payload_max_length(impl->service->max_body_bytes() + 1);
  const auto dispatch = [impl](const httplib::Request& req, httplib::Response& res) {
    const auto reply = impl->service->handle(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  impl->server.Get(".*", dispatch);
  impl->server.Post(".*", dispatch);
}

ScoringServer::~ScoringServer() { stop(); }

int ScoringServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ScoringServer::listen() { return impl_->server.listen_after_bind(); }

void ScoringServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace a11yrev
