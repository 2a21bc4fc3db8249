#include "serve.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <mutex>
#include <set>

#include "aaechat/common/errors.hpp"
#include "aaechat/common/jsonl.hpp"
#include "aaechat/common/text.hpp"
#include "aaechat/dialect/dialect.hpp"
#include "aaechat/evalharness/assignments.hpp"
#include "aaechat/evalharness/metrics.hpp"
#include "aaechat/evalharness/ratings.hpp"
#include "corpus_io.hpp"
#include "manifest.hpp"

namespace aaechat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using evalharness::ChatbotModality;

struct ChatbotData {
  ChatbotModality modality = ChatbotModality::text;
  std::map<std::string, corpus::Dialogue> dialogues;
  fs::path audio_dir;
  std::map<std::string, std::pair<std::string, std::string>> audio_files;  // id -> (wav, timeline)
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

json metric_view(const evalharness::Metric& m, const std::string& role) {
  auto j = evalharness::to_json(m);
  auto rendered = m.statement;
  if (auto pos = rendered.find("{role}"); pos != std::string::npos) {
    rendered.replace(pos, 6, role.empty() ? "this" : text::to_lower(role));
  }
  j["rendered_statement"] = rendered;
  j["scale_labels"] = scale_labels(m.kind);
  return j;
}

}  // namespace

struct RaterServer::Impl {
  ServeConfig config;
  std::map<std::string, ChatbotData> chatbots;
  std::vector<evalharness::Task> tasks;
  std::set<std::string> evaluators;
  evalharness::RatingStore store;
  std::mutex post_mu;
  httplib::Server http;

  Impl(ServeConfig cfg, Diagnostics* diag) : config(std::move(cfg)), store(config.ratings) {
    load_text();
    load_audio(diag);
    load_tasks();
    routes();
  }

  void load_text() {
    const auto dir = config.data_root / "translated";
    if (!fs::is_directory(dir)) return;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (!e.is_regular_file() || e.path().extension() != ".jsonl") continue;
      for (auto& r : read_records(e.path())) {
        if (r.provider_id.empty() || r.dialect_level.empty()) continue;
        const auto id = text_chatbot_id(r.provider_id, dialect::level_from_string(r.dialect_level));
        auto& bot = chatbots[id];
        bot.modality = ChatbotModality::text;
        bot.dialogues[r.dialogue.id] = std::move(r.dialogue);
      }
    }
  }

  void load_audio(Diagnostics* diag) {
    const auto dir = config.data_root / "audio";
    if (!fs::is_directory(dir)) return;
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto index_path = e.path() / "index.json";
      if (!e.is_directory() || !fs::exists(index_path)) continue;
      const auto index = read_json_file(index_path);
      const auto id = index.at("chatbot_id").get<std::string>();
      if (evalharness::infer_chatbot_modality(id) != ChatbotModality::spoken) {
        warn(diag, e.path().string() + ": chatbot id '" + id + "' does not name a spoken chatbot; skipped");
        continue;
      }
      auto& bot = chatbots[id];
      bot.modality = ChatbotModality::spoken;
      bot.audio_dir = e.path();
      for (const auto& r : read_records(e.path() / "dialogues.jsonl")) bot.dialogues[r.dialogue.id] = r.dialogue;
      for (const auto& d : index.at("dialogues")) {
        bot.audio_files[d.at("dialogue_id").get<std::string>()] = {d.at("audio").get<std::string>(),
                                                                   d.at("timeline").get<std::string>()};
      }
    }
  }

  void load_tasks() {
    const auto doc = read_json_file(config.tasks);
    tasks = evalharness::tasks_from_json(doc.is_object() ? doc.at("tasks") : doc);
    if (doc.is_object() && doc.contains("evaluators")) {
      for (const auto& e : doc["evaluators"]) evaluators.insert(e.get<std::string>());
    }
    std::vector<std::string> problems;
    for (const auto& t : tasks) {
      evaluators.insert(t.evaluator_id);
      auto it = chatbots.find(t.chatbot_id);
      if (it == chatbots.end()) {
        problems.push_back("unknown chatbot " + t.chatbot_id);
      } else if (!it->second.dialogues.contains(t.dialogue_id)) {
        problems.push_back("chatbot " + t.chatbot_id + " has no dialogue " + t.dialogue_id);
      } else if (it->second.modality == ChatbotModality::spoken && !it->second.audio_files.contains(t.dialogue_id)) {
        problems.push_back("chatbot " + t.chatbot_id + " has no audio for " + t.dialogue_id);
      }
    }
    std::sort(problems.begin(), problems.end());
    problems.erase(std::unique(problems.begin(), problems.end()), problems.end());
    if (!problems.empty()) {
      throw ValidationError("study references missing data:\n  " + text::join(problems, "\n  "));
    }
  }

  bool authorized(const httplib::Request& req, httplib::Response& res) const {
    if (config.evaluator_token.empty()) return true;
    const auto header = req.get_header_value("X-Evaluator-Token");
    const auto query = req.get_param_value("token");
    if (header == config.evaluator_token || query == config.evaluator_token) return true;
    send_error(res, 401, "missing or wrong evaluator token");
    return false;
  }

  const ChatbotData* find_chatbot(const httplib::Request& req, httplib::Response& res) const {
    if (!req.has_param("chatbot")) {
      send_error(res, 400, "query parameter 'chatbot' is required");
      return nullptr;
    }
    auto it = chatbots.find(req.get_param_value("chatbot"));
    if (it == chatbots.end()) {
      send_error(res, 404, "unknown chatbot " + req.get_param_value("chatbot"));
      return nullptr;
    }
    return &it->second;
  }

  bool task_complete(const evalharness::Task& t, ChatbotModality modality) const {
    for (const auto& m : evalharness::metrics_for(modality)) {
      evalharness::Rating probe{t.evaluator_id, t.dialogue_id, t.chatbot_id, m.name, 0, ""};
      if (!store.contains(probe)) return false;
    }
    return true;
  }

  void routes() {
    http.Get("/api/metrics", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      std::vector<evalharness::Metric> metrics = evalharness::metric_registry();
      if (req.has_param("modality")) {
        try {
          metrics = evalharness::metrics_for(evalharness::chatbot_modality_from_string(req.get_param_value("modality")));
        } catch (const ValidationError& e) {
          send_error(res, 400, e.what());
          return;
        }
      }
      json list = json::array();
      for (const auto& m : metrics) list.push_back(evalharness::to_json(m));
      send_json(res, 200,
                {{"metrics", list},
                 {"scale_labels",
                  {{"attribute", evalharness::scale_labels(evalharness::MetricKind::attribute)},
                   {"rate", evalharness::scale_labels(evalharness::MetricKind::rate)}}}});
    });

    http.Get(R"(/api/assignments/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      const std::string evaluator = req.matches[1];
      if (!evaluators.contains(evaluator)) {
        send_error(res, 404, "unknown evaluator " + evaluator);
        return;
      }
      json pending = json::array();
      std::size_t total = 0;
      for (const auto& t : tasks) {
        if (t.evaluator_id != evaluator) continue;
        ++total;
        const auto modality = chatbots.at(t.chatbot_id).modality;
        if (task_complete(t, modality)) continue;
        pending.push_back(
            {{"dialogue_id", t.dialogue_id}, {"chatbot_id", t.chatbot_id}, {"modality", evalharness::to_string(modality)}});
      }
      send_json(res, 200,
                {{"evaluator_id", evaluator}, {"tasks", pending}, {"total", total}, {"completed", total - pending.size()}});
    });

    http.Get(R"(/api/dialogues/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      const auto* bot = find_chatbot(req, res);
      if (!bot) return;
      const std::string id = req.matches[1];
      auto it = bot->dialogues.find(id);
      if (it == bot->dialogues.end()) {
        send_error(res, 404, "unknown dialogue " + id);
        return;
      }
      const auto& d = it->second;
      const auto chatbot = req.get_param_value("chatbot");
      json turns = json::array();
      for (const auto& t : d.turns) {
        turns.push_back({{"index", t.index},
                         {"speaker", t.side == corpus::Side::chatbot ? "Chatbot" : "User"},
                         {"side", corpus::to_string(t.side)},
                         {"text", t.text}});
      }
      json metrics = json::array();
      for (const auto& m : evalharness::metrics_for(bot->modality)) metrics.push_back(metric_view(m, d.chatbot_role));
      json body = {{"dialogue_id", d.id},
                   {"chatbot_id", chatbot},
                   {"modality", evalharness::to_string(bot->modality)},
                   {"domain", d.domain},
                   {"chatbot_role", d.chatbot_role},
                   {"turns", turns},
                   {"metrics", metrics}};
      if (bot->modality == ChatbotModality::spoken) {
        const auto q = "?chatbot=" + httplib::detail::encode_query_param(chatbot);
        body["audio_url"] = "/api/audio/" + httplib::detail::encode_query_param(d.id) + q;
        body["timeline_url"] = "/api/timeline/" + httplib::detail::encode_query_param(d.id) + q;
      }
      send_json(res, 200, body);
    });

    auto audio_file = [this](const httplib::Request& req, httplib::Response& res,
                             bool timeline) -> std::optional<fs::path> {
      if (!authorized(req, res)) return std::nullopt;
      const auto* bot = find_chatbot(req, res);
      if (!bot) return std::nullopt;
      const std::string id = req.matches[1];
      auto it = bot->audio_files.find(id);
      if (it == bot->audio_files.end()) {
        send_error(res, 404, "no audio for dialogue " + id + " and chatbot " + req.get_param_value("chatbot"));
        return std::nullopt;
      }
      return bot->audio_dir / (timeline ? it->second.second : it->second.first);
    };

    http.Get(R"(/api/audio/([^/]+))", [this, audio_file](const httplib::Request& req, httplib::Response& res) {
      auto path = audio_file(req, res, false);
      if (!path) return;
      const auto q = "?chatbot=" + httplib::detail::encode_query_param(req.get_param_value("chatbot"));
      res.set_header("Link", "</api/timeline/" + httplib::detail::encode_query_param(req.matches[1].str()) + q +
                                 ">; rel=\"timeline\"; type=\"application/json\"");
      res.set_content(read_file(*path), "audio/wav");
    });

    http.Get(R"(/api/timeline/([^/]+))", [audio_file](const httplib::Request& req, httplib::Response& res) {
      auto path = audio_file(req, res, true);
      if (!path) return;
      res.set_content(read_file(*path), "application/json");
    });

    http.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        send_json(res, 400, {{"errors", {{{"field", "body"}, {"message", "invalid JSON"}}}}});
        return;
      }
      const bool batch = body.is_array();
      const json items = batch ? body : json::array({body});
      if (items.empty()) {
        send_json(res, 400, {{"errors", {{{"field", "body"}, {"message", "empty batch"}}}}});
        return;
      }
      json errors = json::array();
      for (std::size_t i = 0; i < items.size(); ++i) {
        for (const auto& [field, message] : evalharness::validate_rating_json(items[i])) {
          json e = {{"field", field}, {"message", message}};
          if (batch) e["index"] = i;
          errors.push_back(std::move(e));
        }
      }
      if (!errors.empty()) {
        send_json(res, 400, {{"errors", errors}});
        return;
      }
      std::vector<evalharness::Rating> ratings;
      for (const auto& item : items) {
        auto r = evalharness::rating_from_json(item);
        if (!evaluators.contains(r.evaluator_id)) return send_error(res, 404, "unknown evaluator " + r.evaluator_id);
        auto bot = chatbots.find(r.chatbot_id);
        if (bot == chatbots.end()) return send_error(res, 404, "unknown chatbot " + r.chatbot_id);
        if (!bot->second.dialogues.contains(r.dialogue_id)) {
          return send_error(res, 404, "unknown dialogue " + r.dialogue_id + " for chatbot " + r.chatbot_id);
        }
        if (r.timestamp.empty()) r.timestamp = utc_now();
        ratings.push_back(std::move(r));
      }
      std::lock_guard lock(post_mu);
      std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
      json duplicates = json::array();
      for (const auto& r : ratings) {
        if (store.contains(r) || !seen.insert(r.key()).second) duplicates.push_back(evalharness::to_json(r));
      }
      if (!duplicates.empty()) {
        send_json(res, 409, {{"error", "duplicate rating"}, {"duplicates", duplicates}});
        return;
      }
      for (const auto& r : ratings) store.append(r);
      send_json(res, 201, {{"stored", ratings.size()}});
    });

    if (!config.static_dir.empty()) http.set_mount_point("/", config.static_dir.string());

    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_error(res, 500, what);
    });
  }
};

RaterServer::RaterServer(ServeConfig config, Diagnostics* diag)
    : impl_(std::make_unique<Impl>(std::move(config), diag)) {}

RaterServer::~RaterServer() = default;

bool RaterServer::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int RaterServer::bind_to_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }

bool RaterServer::listen_after_bind() { return impl_->http.listen_after_bind(); }

void RaterServer::stop() { impl_->http.stop(); }

void RaterServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

std::size_t RaterServer::chatbot_count() const { return impl_->chatbots.size(); }

}  // namespace aaechat::cli
