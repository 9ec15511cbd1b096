#pragma once

#include <string>

#include "rpmsim/errors.h"

namespace httplib {
class Server;
}

namespace rpm {

class CohortService;

/// Installs the JSON endpoints of `service` on `server`. Error bodies are
/// `{"kind": ..., "message": ...}`.
void register_routes(httplib::Server& server, CohortService& service);

int http_status_for(ErrorKind kind);

} // namespace rpm
