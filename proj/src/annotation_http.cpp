#include "recipesim/annotation_http.hpp"

#include <sstream>

#include "httplib.h"

namespace recipesim {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

// Runs a handler and maps service and input failures onto 4xx replies.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const AnnotationError& e) {
    send_error(res, e.status(), e.code(), e.what());
  } catch (const InputError& e) {
    send_error(res, 400, "bad_request", e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, "malformed_request", e.what());
  }
}

}  // namespace

json recipe_to_json(const Recipe& recipe) {
  json ingredients = json::array();
  for (const auto& ing : recipe.ingredients) {
    json item = {{"descriptor", descriptor_text(ing.descriptor_path)},
                 {"path", ing.descriptor_path}};
    if (ing.quantity) {
      item["quantity"] = {{"amount", ing.quantity->amount}, {"unit", ing.quantity->unit}};
    }
    ingredients.push_back(std::move(item));
  }
  return {{"id", recipe.id},
          {"title", recipe.title},
          {"ingredients", std::move(ingredients)},
          {"instructions", recipe.instructions}};
}

struct AnnotationServer::Impl {
  explicit Impl(AnnotationService& s) : service(s) {}
  AnnotationService& service;
  httplib::Server server;
};

AnnotationServer::AnnotationServer(AnnotationService& service, std::string static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  AnnotationService& svc = impl_->service;

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server.Get("/api/tasks/next", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const NextTask next = svc.next_task(req.get_param_value("expert"));
      if (next.done) {
        send_json(res, 200, {{"status", "done"}, {"judged", next.judged}, {"total", next.total}});
        return;
      }
      const PairPresentation& p = *next.pair;
      json body = {{"status", "pair"},
                   {"position", p.position},
                   {"total", p.total},
                   {"judged", p.judged},
                   {"main", recipe_to_json(*p.main)},
                   {"secondary", recipe_to_json(*p.secondary)}};
      if (p.fused) body["fused"] = *p.fused;
      send_json(res, 200, body);
    });
  });

  server.Post("/api/judgments", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = json::parse(req.body);
      if (!body.is_object()) {
        throw AnnotationError(400, "malformed_request", "judgment body must be a JSON object");
      }
      for (const char* field : {"expert", "main_id", "secondary_id", "verdict"}) {
        if (!body.contains(field) || !body[field].is_string()) {
          throw AnnotationError(400, "malformed_request",
                                std::string("missing string field '") + field + "'");
        }
      }
      const SubmitAck ack =
          svc.submit_judgment(body["expert"].get<std::string>(), body["main_id"].get<std::string>(),
                              body["secondary_id"].get<std::string>(),
                              body["verdict"].get<std::string>());
      send_json(res, 200, {{"status", "ok"}, {"judged", ack.judged}, {"changed", ack.changed}});
    });
  });

  server.Get("/api/stats/agreement", [&svc](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const AgreementStats s = svc.agreement();
      send_json(res, 200,
                {{"experts", s.experts},
                 {"total_pairs_judged_by_all", s.total_pairs_judged_by_all},
                 {"agreed_count", s.agreed_count},
                 {"agreement_pct", s.agreement_pct}});
    });
  });

  server.Get("/api/export/ground-truth", [&svc](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      std::ostringstream out;
      svc.export_ground_truth(out);
      res.status = 200;
      res.set_content(out.str(), "text/csv");
    });
  });

  server.Get(R"(/api/recipes/([^/]+))", [&svc](const httplib::Request& req,
                                                httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, recipe_to_json(svc.recipe(req.matches[1]))); });
  });

  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool AnnotationServer::serve() { return impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_) impl_->server.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace recipesim
