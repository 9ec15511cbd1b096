#include "rpmsim/http_api.h"

#include <httplib.h>
#include <json.hpp>

#include "rpmsim/service.h"

namespace rpm {

using nlohmann::json;

int http_status_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::validation: return 422;
    case ErrorKind::format:
    case ErrorKind::version:
    case ErrorKind::invalid_mode: return 400;
    case ErrorKind::io: return 500;
    }
    return 500;
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorKind kind, const std::string& message,
                const std::vector<std::string>& details = {}) {
    json body = {{"kind", std::string(to_string(kind))}, {"message", message}};
    if (!details.empty()) body["details"] = details;
    send_json(res, body, http_status_for(kind));
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("request body is not valid JSON: ") + e.what());
    }
}

template <class F>
httplib::Server::Handler guarded(F&& f) {
    return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const ValidationError& e) {
            send_error(res, e.kind(), e.what(), e.details());
        } catch (const Error& e) {
            send_error(res, e.kind(), e.what());
        } catch (const json::exception& e) {
            send_error(res, ErrorKind::format, e.what());
        }
    };
}

std::string string_field(const json& body, const char* key) {
    if (!body.contains(key)) return {};
    if (!body[key].is_string()) throw ValidationError("invalid request body", {std::string(key) + ": expected a string"});
    return body[key].get<std::string>();
}

} // namespace

void register_routes(httplib::Server& server, CohortService& service) {
    server.Post("/cohorts", guarded([&](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, to_json(service.create_cohort(parse_body(req))), 201);
                }));
    server.Get(R"(/cohorts/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, to_json(service.handle(req.matches[1])));
               }));
    server.Post(R"(/cohorts/([^/]+)/advance)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                    json body = parse_body(req);
                    int days = 1;
                    if (body.contains("days")) {
                        if (!body["days"].is_number_integer())
                            throw ValidationError("invalid advance request", {"days: expected an integer"});
                        days = body["days"].get<int>();
                    }
                    json report = to_json(service.advance(req.matches[1], days));
                    report["cohort"] = to_json(service.handle(req.matches[1]));
                    send_json(res, report);
                }));
    server.Get(R"(/cohorts/([^/]+)/alerts)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   std::string status = req.has_param("status") ? req.get_param_value("status") : "";
                   send_json(res, service.list_alerts(req.matches[1], status));
               }));
    server.Post(R"(/cohorts/([^/]+)/alerts/([^/]+)/response)",
                guarded([&](const httplib::Request& req, httplib::Response& res) {
                    json body = parse_body(req);
                    send_json(res,
                              service.submit_response(req.matches[1], req.matches[2], string_field(body, "hcp_id"),
                                                      string_field(body, "action"), string_field(body, "note")),
                              201);
                }));
    server.Get(R"(/cohorts/([^/]+)/patients)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.patients(req.matches[1]));
               }));
    server.Get(R"(/cohorts/([^/]+)/patients/([^/]+)/timeline)",
               guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.timeline(req.matches[1], req.matches[2]));
               }));
    server.Get(R"(/cohorts/([^/]+)/patients/([^/]+)/summary)",
               guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.summary(req.matches[1], req.matches[2]));
               }));
    server.Get(R"(/cohorts/([^/]+)/stats)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.stats(req.matches[1]));
               }));
    server.Get(R"(/cohorts/([^/]+)/export)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                   std::string id = req.matches[1];
                   res.set_content(service.export_archive(id), "application/x-tar");
                   res.set_header("Content-Disposition", "attachment; filename=\"cohort-" + id + ".tar\"");
               }));
}

} // namespace rpm
