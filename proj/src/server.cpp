#include "vmine/server.hpp"

#include <sstream>

#include "vmine/error.hpp"

namespace vmine {
namespace {

ApiResponse json_response(int status, const Json& body) {
  return {status, canonical_dump(body), "application/json"};
}

ApiResponse error_response(const Error& e) {
  return json_response(http_status(e.code()), {{"code", std::string(to_string(e.code()))},
                                               {"message", e.what()},
                                               {"detail", e.detail()}});
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

Json verdict_json(const RefineVerdict& v) {
  return {{"cluster", v.cluster},
          {"accepted", v.accepted},
          {"evaluated", v.evaluated},
          {"sub_clusters", v.sub_clusters},
          {"sub_modularity", v.sub_modularity},
          {"threshold", v.threshold ? Json(*v.threshold) : Json(nullptr)},
          {"message", v.accepted ? "significant substructure" : "no significant substructure"}};
}

Error bad_request(const std::string& what) {
  return Error(ErrorCode::kInvalidConfig, "bad request: " + what);
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownDataset:
      return 404;
    case ErrorCode::kNothingToUndo:
    case ErrorCode::kNothingToRedo:
      return 409;
    default:
      return 400;
  }
}

Api::Api(ServerOptions options) : options_(std::move(options)) {}

std::string Api::add_dataset(std::shared_ptr<const Network> network,
                             std::optional<std::string> year_attribute) {
  Dataset d;
  d.network = std::move(network);
  const auto comps = connected_components(*d.network);
  d.giant = comps.empty() ? d.network
                          : std::make_shared<const Network>(induced_subgraph(*d.network, comps[0]));
  d.year_attribute = std::move(year_attribute);
  std::lock_guard lock(mutex_);
  std::string id = "d" + std::to_string(next_dataset_++);
  datasets_.emplace(id, std::move(d));
  return id;
}

ApiResponse Api::handle(const std::string& method, const std::string& path,
                        const std::map<std::string, std::string>& query, const std::string& body) {
  try {
    Json request = Json::object();
    if (!body.empty()) {
      request = Json::parse(body, nullptr, false);
      if (request.is_discarded()) throw bad_request("body is not valid JSON");
    }
    const auto parts = split_path(path);
    if (parts.size() == 1 && parts[0] == "datasets" && method == "POST") return post_dataset(request);
    if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") return post_session(request);
    if (parts.size() == 3 && parts[0] == "sessions") {
      return session_route(method, parts[1], parts[2], query, request);
    }
    return json_response(404, {{"code", "NotFound"}, {"message", "no route " + method + " " + path}, {"detail", path}});
  } catch (const Error& e) {
    return error_response(e);
  } catch (const Json::exception& e) {
    return error_response(bad_request(e.what()));
  } catch (const std::exception& e) {
    return json_response(500, {{"code", "Internal"}, {"message", e.what()}, {"detail", ""}});
  }
}

ApiResponse Api::post_dataset(const Json& body) {
  const DatasetManifest manifest = manifest_from_json(body, options_.data_root);
  auto net = std::make_shared<const Network>(read_dataset(manifest));
  const std::string id = add_dataset(net, manifest.year_attribute);
  std::size_t giant = 0;
  {
    std::lock_guard lock(mutex_);
    giant = datasets_.at(id).giant->node_count();
  }
  return json_response(201, {{"dataset", id},
                             {"nodes", net->node_count()},
                             {"edges", net->edge_count()},
                             {"giant_component", giant}});
}

ApiResponse Api::post_session(const Json& body) {
  const std::string dataset = body.value("dataset", std::string{});
  Dataset d;
  {
    std::lock_guard lock(mutex_);
    auto it = datasets_.find(dataset);
    if (it == datasets_.end()) {
      throw Error(ErrorCode::kUnknownDataset, "unknown dataset '" + dataset + "'", dataset);
    }
    d = it->second;
  }
  SessionOptions so;
  so.seed = body.value("seed", std::uint64_t{0});
  so.alpha = body.value("alpha", options_.alpha);
  so.null = options_.null;
  so.null.replicates = body.value("replicates", options_.null.replicates);
  so.null.swaps_per_edge = body.value("swaps_per_edge", options_.null.swaps_per_edge);
  so.layout_iterations = body.value("layout_iterations", options_.layout_iterations);
  so.year_attribute = d.year_attribute;
  if (so.null.replicates < 1) throw Error(ErrorCode::kInvalidConfig, "replicates must be >= 1", "replicates");
  if (!(so.alpha > 0.0 && so.alpha < 1.0)) throw Error(ErrorCode::kInvalidConfig, "alpha must lie in (0, 1)", "alpha");
  const std::string scope = body.value("scope", std::string{"giant"});
  if (scope != "giant" && scope != "all") throw bad_request("scope must be giant or all");

  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "s" + std::to_string(next_session_++);
  }
  auto session = std::make_shared<Session>(id, dataset, scope == "all" ? d.network : d.giant, so);
  {
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, session);
  }
  return json_response(201, session_payload(session->state()));
}

std::shared_ptr<Session> Api::find_session(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "unknown session '" + id + "'", id);
  return it->second;
}

ApiResponse Api::session_route(const std::string& method, const std::string& id,
                               const std::string& action,
                               const std::map<std::string, std::string>& query, const Json& body) {
  auto session = find_session(id);
  if (method == "GET" && action == "state") {
    return json_response(200, session_payload(session->state()));
  }
  if (method == "GET" && action == "export") {
    auto it = query.find("kind");
    const ExportKind kind = parse_export_kind(it == query.end() ? "json" : it->second);
    static const char* kTypes[] = {"application/json", "image/svg+xml", "text/csv"};
    return {200, session->export_bytes(kind), kTypes[static_cast<int>(kind)]};
  }
  if (method != "POST") throw bad_request(method + " not allowed on " + action);

  if (action == "refine") {
    if (!body.contains("clusters") || !body.at("clusters").is_array()) throw bad_request("clusters must be an array");
    const auto targets = body.at("clusters").get<std::vector<ClusterId>>();
    const RefineOutcome out = session->refine(targets);
    Json verdicts = Json::array();
    for (const auto& v : out.verdicts) verdicts.push_back(verdict_json(v));
    return json_response(200, {{"changed", out.changed},
                               {"verdicts", verdicts},
                               {"session", session_payload(session->state())}});
  }
  if (action == "coarsen") {
    if (!body.contains("k")) throw bad_request("k is required");
    const CoarsenOutcome out = session->coarsen(body.at("k").get<std::size_t>());
    return json_response(200, {{"modularity", out.modularity},
                               {"significant", out.significant ? Json(*out.significant) : Json(nullptr)},
                               {"session", session_payload(session->state())}});
  }
  if (action == "overlay") {
    if (!body.contains("attribute")) throw bad_request("attribute is required");
    std::optional<std::string> category;
    if (body.contains("category") && !body.at("category").is_null()) category = body.at("category").get<std::string>();
    const TestOverlay o = session->overlay(body.at("attribute").get<std::string>(), category);
    return json_response(200, {{"overlay", to_json(o)}, {"session", session_payload(session->state())}});
  }
  if (action == "groups") {
    if (!body.contains("labels") || !body.at("labels").is_object()) throw bad_request("labels must be an object");
    std::map<ClusterId, std::string> labels;
    for (const auto& [key, label] : body.at("labels").items()) {
      std::size_t pos = 0;
      unsigned long c = 0;
      try {
        c = std::stoul(key, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != key.size() || key.empty()) throw bad_request("label keys must be cluster ids");
      labels[static_cast<ClusterId>(c)] = label.get<std::string>();
    }
    const Snapshot s = session->groups(labels);
    return json_response(200, {{"group_geodesics", to_json(*s.group_geodesics)},
                               {"group_years", s.group_years ? to_json(*s.group_years) : Json(nullptr)},
                               {"session", session_payload(session->state())}});
  }
  if (action == "undo") {
    session->undo();
    return json_response(200, session_payload(session->state()));
  }
  if (action == "redo") {
    session->redo();
    return json_response(200, session_payload(session->state()));
  }
  return json_response(404, {{"code", "NotFound"}, {"message", "unknown action " + action}, {"detail", action}});
}

}  // namespace vmine
