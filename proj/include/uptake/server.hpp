#pragma once

#include <string>

namespace httplib {
class Server;
}

namespace uptake {

class AnnotationService;

/// Mounts the JSON API on `server`:
///   GET  /api/tasks/next?annotator=ID   task or {"done": true}
///   POST /api/annotations               201, 409 on duplicates
///   GET  /api/agreement?a=ID&b=ID       per-cue kappa
///   GET  /api/progress                  per-annotator counts
///   GET  /api/export                    meq.jsonl
/// Static UI assets are served from `ui_dir` at / when it is non-empty.
void register_routes(httplib::Server& server, AnnotationService& service, const std::string& ui_dir);

}  // namespace uptake
