#include "uptake/server.hpp"

#include <ctime>
#include <httplib.h>

#include "uptake/annotate.hpp"
#include "uptake/error.hpp"
#include "uptake/jsonl.hpp"

namespace uptake {
namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(jsonl::OrderedJson{{"error", message}}.dump(), kJson);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateAnnotation: return 409;
    case ErrorCode::UnknownAnnotator: return 404;
    case ErrorCode::NotAssigned: return 403;
    case ErrorCode::NoOverlap: return 422;
    case ErrorCode::MalformedRecord: return 400;
    default: return 500;
  }
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, status_for(e.code()), e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

const char* kPlaceholderPage =
    "<!doctype html><title>annotation service</title>"
    "<p>The annotation UI assets are not installed. The JSON API is available under /api/.</p>";

}  // namespace

void register_routes(httplib::Server& server, AnnotationService& service, const std::string& ui_dir) {
  server.Get("/api/tasks/next", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("annotator")) return send_error(res, 400, "missing annotator parameter");
      const auto task = service.next_task(req.get_param_value("annotator"));
      res.set_content(task ? task_to_json(*task) : std::string(R"({"done":true})"), kJson);
    });
  });

  server.Post("/api/annotations", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto body = jsonl::Json::parse(req.body, nullptr, false);
      if (body.is_object() && !body.contains("created_at")) {
        body["created_at"] = static_cast<std::int64_t>(std::time(nullptr));
      }
      const auto annotation = annotation_from_json_text(body.is_discarded() ? req.body : body.dump(), "request body", 1);
      service.submit(annotation);
      res.status = 201;
      res.set_content(R"({"status":"created"})", kJson);
    });
  });

  server.Get("/api/agreement", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("a") || !req.has_param("b")) return send_error(res, 400, "parameters a and b are required");
      res.set_content(agreement_to_json(service.agreement(req.get_param_value("a"), req.get_param_value("b"))), kJson);
    });
  });

  server.Get("/api/progress", [&service](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      auto out = jsonl::OrderedJson::array();
      for (const auto& p : service.progress()) {
        out.push_back({{"annotator", p.annotator}, {"assigned", p.assigned}, {"annotated", p.annotated}});
      }
      res.set_content(jsonl::OrderedJson{{"annotators", out}}.dump(), kJson);
    });
  });

  server.Get("/api/export", [&service](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { res.set_content(service.export_jsonl(), "application/x-ndjson"); });
  });

  if (!ui_dir.empty() && server.set_mount_point("/", ui_dir)) return;
  server.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kPlaceholderPage, "text/html"); });
}

}  // namespace uptake
