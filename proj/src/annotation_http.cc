//
// Copyright 2026 The FENSE Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <memory>

#include "fense/annotation_service.h"
#include "fense/formats.h"
#include "httplib.h"
#include "json.hpp"

namespace fense {
namespace {

using nlohmann::json;

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message = "") {
  json body = {{"error", code}};
  if (!message.empty()) body["message"] = message;
  SendJson(res, status, body);
}

json StatsJson(const AnnotationStats& stats, int raters_per_pair) {
  json categories = json::object();
  for (const auto& [category, p] : stats.categories) {
    categories[std::string(CategoryName(category))] = {
        {"pairs", p.pairs}, {"complete", p.complete}, {"judgments", p.judgments}};
  }
  json body = {{"pairs_total", stats.pairs_total},
               {"pairs_complete", stats.pairs_complete},
               {"judgments", stats.judgments},
               {"raters", stats.raters},
               {"raters_per_pair", raters_per_pair},
               {"categories", categories}};
  if (stats.kappa) {
    body["kappa"] = stats.kappa->kappa;
    body["kappa_degenerate"] = stats.kappa->degenerate;
  } else {
    body["kappa"] = nullptr;
  }
  return body;
}

}  // namespace

std::string AudioContentType(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".wav") return "audio/wav";
  if (ext == ".mp3") return "audio/mpeg";
  if (ext == ".flac") return "audio/flac";
  if (ext == ".ogg" || ext == ".oga") return "audio/ogg";
  if (ext == ".m4a" || ext == ".mp4") return "audio/mp4";
  if (ext == ".webm") return "audio/webm";
  return "application/octet-stream";
}

struct AnnotationServer::Impl {
  AnnotationService& service;
  AnnotationServerOptions options;
  httplib::Server server;

  Impl(AnnotationService& s, AnnotationServerOptions o)
      : service(s), options(std::move(o)) {
    server.Get("/api/pairs/next", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("rater")) return SendError(res, 400, "missing_rater");
      const std::string rater = req.get_param_value("rater");
      const NextResult next = service.NextPair(rater);
      switch (next.status) {
        case NextStatus::kUnknownRater:
          return SendError(res, 404, "unknown_rater");
        case NextStatus::kExhausted:
          res.status = 204;
          return;
        case NextStatus::kAssigned:
          break;
      }
      const DisplayedPair& p = *next.pair;
      SendJson(res, 200,
               {{"pair_id", p.pair_id},
                {"audio_id", p.audio_id},
                {"audio_url", "/api/audio/" + httplib::detail::encode_url(p.audio_id)},
                {"caption_a", p.caption_a},
                {"caption_b", p.caption_b},
                {"progress", {{"judged", p.judged}, {"available", p.available}}}});
    });

    server.Post("/api/judgments", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error&) {
        return SendError(res, 400, "invalid_json");
      }
      if (!body.is_object() || !body.contains("pair_id") || !body["pair_id"].is_string() ||
          !body.contains("rater_id") || !body["rater_id"].is_string() ||
          !body.contains("choice") || !body["choice"].is_string()) {
        return SendError(res, 400, "invalid_request",
                         "expected {pair_id, rater_id, choice} strings");
      }
      const auto choice = ParseChoice(body["choice"].get<std::string>());
      if (!choice) return SendError(res, 400, "invalid_choice", "choice must be A, B or NotSure");
      switch (service.Submit(body["pair_id"].get<std::string>(),
                             body["rater_id"].get<std::string>(), *choice)) {
        case SubmitStatus::kAccepted:
          return SendJson(res, 200, {{"status", "accepted"}});
        case SubmitStatus::kUnknownRater:
          return SendError(res, 404, "unknown_rater");
        case SubmitStatus::kUnknownPair:
          return SendError(res, 404, "unknown_pair");
        case SubmitStatus::kDuplicate:
          return SendError(res, 409, "duplicate");
        case SubmitStatus::kNoOpenAssignment:
          return SendError(res, 409, "no_open_assignment");
        case SubmitStatus::kLateSubmission:
          return SendError(res, 410, "late_submission");
      }
    });

    server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      SendJson(res, 200, StatsJson(service.Stats(), service.raters_per_pair()));
    });

    server.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(service.ExportJsonl(), "application/x-ndjson");
    });

    server.Get(R"(/api/audio/(.+))", [this](const httplib::Request& req,
                                            httplib::Response& res) {
      auto it = options.audio_files.find(req.matches[1].str());
      if (it == options.audio_files.end()) return SendError(res, 404, "unknown_audio");
      const std::string path = it->second;
      std::error_code ec;
      const auto size = std::filesystem::file_size(path, ec);
      if (ec) return SendError(res, 404, "audio_unavailable");
      auto file = std::make_shared<std::ifstream>(path, std::ios::binary);
      if (!*file) return SendError(res, 404, "audio_unavailable");
      res.set_content_provider(
          size, AudioContentType(path),
          [file](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
            char buffer[64 * 1024];
            file->seekg(static_cast<std::streamoff>(offset));
            const std::size_t want = std::min(length, sizeof(buffer));
            file->read(buffer, static_cast<std::streamsize>(want));
            const auto got = file->gcount();
            if (got <= 0) return false;
            return sink.write(buffer, static_cast<std::size_t>(got));
          });
    });

    if (!options.static_dir.empty()) server.set_mount_point("/", options.static_dir);

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "internal error";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message = e.what();
          } catch (...) {
          }
          SendError(res, 500, "internal", message);
        });
  }
};

AnnotationServer::AnnotationServer(AnnotationService& service, AnnotationServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

AnnotationServer::~AnnotationServer() { Stop(); }

int AnnotationServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool AnnotationServer::Bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool AnnotationServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void AnnotationServer::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void AnnotationServer::WaitUntilReady() const { impl_->server.wait_until_ready(); }

}  // namespace fense
