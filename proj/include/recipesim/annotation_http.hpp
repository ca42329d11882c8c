#pragma once

// HTTP front of the annotation service.
//
//   GET  /health                          {"status":"ok"}
//   GET  /api/tasks/next?expert=ID        next pair for the expert, or done
//   POST /api/judgments                   {expert, main_id, secondary_id, verdict}
//   GET  /api/stats/agreement             agreement statistics
//   GET  /api/export/ground-truth         labeled-pair CSV
//   GET  /api/recipes/{id}                one recipe
//
// Errors are JSON {"error": <code>, "message": <text>} with a 4xx status.

#include <memory>
#include <string>

#include "json.hpp"
#include "recipesim/annotation.hpp"

namespace recipesim {

nlohmann::json recipe_to_json(const Recipe& recipe);

class AnnotationServer {
 public:
  // static_dir, when set, is served at "/" (the browser frontend build).
  explicit AnnotationServer(AnnotationService& service, std::string static_dir = {});
  ~AnnotationServer();

  // Binds host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace recipesim
