#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trasdim/cover.hpp"
#include "trasdim/errors.hpp"
#include "trasdim/metric.hpp"
#include "trasdim/search.hpp"
#include "trasdim/set_system.hpp"
#include "trasdim/window.hpp"
#include "trasdim/witness.hpp"

namespace trasdim {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  static const char* hexd = "0123456789abcdef";
  std::string out = "fnv1a:";
  for (int i = 60; i >= 0; i -= 4) out += hexd[(h >> i) & 0xF];
  return out;
}

inline std::string digest_of_bytes(const std::string& bytes) {
  return digest_hex(fnv1a(bytes.data(), bytes.size()));
}

// --- files ------------------------------------------------------------

inline std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(Errc::io, "write to '" + path + "' failed");
}

inline json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::bad_json, "malformed JSON in " + what);
  return j;
}

// --- manifest ---------------------------------------------------------

// Every output file embeds one of these. Re-running the same command with the
// same inputs and seed reproduces all decision-relevant fields byte for byte;
// wall_ms is the only field allowed to drift.
struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest
  std::int64_t wall_ms = 0;
  std::int64_t nodes = -1;
};

inline json to_json(const Manifest& m) {
  json j;
  j["tool"] = std::string("trasdim ") + kToolVersion;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  json in = json::object();
  for (const auto& [path, digest] : m.inputs) in[path] = digest;
  j["inputs"] = in;
  j["wall_ms"] = m.wall_ms;
  if (m.nodes >= 0) j["nodes"] = m.nodes;
  return j;
}

// --- set systems --------------------------------------------------------

inline json to_json(const SetSystem& s) {
  json members = json::array();
  for (const auto& m : s.members()) members.push_back(m);
  return json{{"members", members}};
}

inline SetSystem system_from_json(const json& j) {
  if (!j.is_object() || !j.contains("members") || !j["members"].is_array())
    fail(Errc::bad_json, "set system: expected {\"members\": [[...], ...]}");
  std::vector<FinSet> members;
  for (const auto& m : j["members"]) {
    if (!m.is_array()) fail(Errc::bad_json, "set system member must be an array of labels");
    FinSet f;
    for (const auto& v : m) {
      if (!v.is_number_integer()) fail(Errc::bad_json, "labels must be integers");
      f.push_back(v.get<Label>());
    }
    members.push_back(std::move(f));
  }
  return SetSystem(std::move(members));
}

// --- windows ------------------------------------------------------------

inline json params_to_json(const Window& w) {
  json p;
  switch (w.kind) {
    case SpaceKind::R:
      p["block"] = w.params.block_lo;
      break;
    case SpaceKind::XKI:
      p["k"] = w.params.k;
      p["block"] = w.params.block_lo;
      break;
    case SpaceKind::XOmegaK:
    case SpaceKind::YOmegaK:
      p["k"] = w.params.k;
      p["blocks"] = json::array({w.params.block_lo, w.params.block_hi});
      break;
    case SpaceKind::X2Omega:
      p["levels"] = json::array({w.params.level_lo, w.params.level_hi});
      p["blocks"] = json::array({w.params.block_lo, w.params.block_hi});
      break;
  }
  p["radius"] = w.params.radius;
  return p;
}

// x2omega points are level-tagged because equal coordinate tuples recur at
// every level of the disjoint union; other kinds determine the point from its
// coordinates alone
inline json point_to_json(const Window& w, const Point& p) {
  json arr = json::array();
  if (w.kind == SpaceKind::X2Omega) arr.push_back(p.level);
  for (Coord c : p.coords) arr.push_back(c);
  return arr;
}

inline json to_json(const Window& w) {
  json j;
  j["schema"] = "window/1";
  j["kind"] = kind_name(w.kind);
  j["params"] = params_to_json(w);
  j["count"] = w.size();
  json pts = json::array();
  for (const auto& p : w.points) pts.push_back(point_to_json(w, p));
  j["points"] = pts;
  return j;
}

inline WindowSpec window_spec_from_json(const json& j) {
  WindowSpec spec;
  if (!j.contains("kind") || !j.contains("params"))
    fail(Errc::bad_json, "window: missing kind/params");
  spec.kind = kind_from_name(j["kind"].get<std::string>());
  const json& p = j["params"];
  auto geti = [&](const char* key) -> int {
    if (!p.contains(key) || !p[key].is_number_integer())
      fail(Errc::bad_json, std::string("window params: missing integer '") + key + "'");
    return p[key].get<int>();
  };
  switch (spec.kind) {
    case SpaceKind::R:
      spec.params.block_lo = spec.params.block_hi = geti("block");
      break;
    case SpaceKind::XKI:
      spec.params.k = geti("k");
      spec.params.block_lo = spec.params.block_hi = geti("block");
      break;
    case SpaceKind::XOmegaK:
    case SpaceKind::YOmegaK: {
      spec.params.k = geti("k");
      if (!p.contains("blocks") || !p["blocks"].is_array() || p["blocks"].size() != 2)
        fail(Errc::bad_json, "window params: blocks must be [lo, hi]");
      spec.params.block_lo = p["blocks"][0].get<int>();
      spec.params.block_hi = p["blocks"][1].get<int>();
      break;
    }
    case SpaceKind::X2Omega: {
      for (const char* key : {"levels", "blocks"})
        if (!p.contains(key) || !p[key].is_array() || p[key].size() != 2)
          fail(Errc::bad_json, std::string("window params: ") + key + " must be [lo, hi]");
      spec.params.level_lo = p["levels"][0].get<int>();
      spec.params.level_hi = p["levels"][1].get<int>();
      spec.params.block_lo = p["blocks"][0].get<int>();
      spec.params.block_hi = p["blocks"][1].get<int>();
      break;
    }
  }
  if (!p.contains("radius") || !p["radius"].is_number_integer())
    fail(Errc::bad_json, "window params: missing integer 'radius'");
  spec.params.radius = p["radius"].get<Coord>();
  return spec;
}

// Loads and revalidates: every point must satisfy its membership predicate
// and the list must be in canonical order.
inline Window window_from_json(const json& j) {
  const WindowSpec spec = window_spec_from_json(j);
  detail::check_window_spec(spec);
  Window w;
  w.kind = spec.kind;
  w.params = spec.params;
  if (!j.contains("points") || !j["points"].is_array())
    fail(Errc::bad_json, "window: missing points array");
  for (const auto& arr : j["points"]) {
    if (!arr.is_array() || arr.empty()) fail(Errc::bad_json, "window point must be an array");
    Point pt;
    std::size_t start = 0;
    if (w.kind == SpaceKind::X2Omega) {
      pt.level = arr[0].get<int>();
      require(pt.level >= w.params.level_lo && pt.level <= w.params.level_hi, Errc::invariant,
              "window point level outside declared range");
      start = 1;
    } else if (w.kind != SpaceKind::R) {
      pt.level = w.params.k;
    }
    for (std::size_t i = start; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer()) fail(Errc::bad_json, "point coordinates must be integers");
      pt.coords.push_back(arr[i].get<Coord>());
    }
    const int b = pt.block();
    require(b >= w.params.block_lo && b <= w.params.block_hi, Errc::invariant,
            "window point block outside declared range");
    for (Coord c : pt.coords)
      require(c >= 0 && c <= w.params.radius, Errc::invariant,
              "window point coordinate outside [0, radius]");
    switch (w.kind) {
      case SpaceKind::R: break;
      case SpaceKind::XKI:
      case SpaceKind::XOmegaK:
        require(member_xki(w.params.k, b, pt), Errc::invariant,
                "window point violates its membership predicate");
        break;
      case SpaceKind::YOmegaK:
        require(member_tower(w.params.k, b, pt.coords), Errc::invariant,
                "window point violates its membership predicate");
        break;
      case SpaceKind::X2Omega:
        require(member_tower(pt.level, b, pt.coords), Errc::invariant,
                "window point violates its membership predicate");
        break;
    }
    if (!w.points.empty())
      require(point_less(w.points.back(), pt), Errc::invariant,
              "window points must be strictly increasing in canonical order");
    w.points.push_back(std::move(pt));
  }
  if (j.contains("count"))
    require(j["count"].get<int>() == w.size(), Errc::bad_json,
            "window count disagrees with points array");
  return w;
}

// JSON-lines form for large point lists: a header object on the first line,
// then one point array per line. The object form above stays the canonical
// interchange format; loaders accept both.
inline std::string window_to_jsonl(const Window& w, const json& manifest) {
  json header;
  header["schema"] = "window-jsonl/1";
  header["kind"] = kind_name(w.kind);
  header["params"] = params_to_json(w);
  header["count"] = w.size();
  if (!manifest.is_null()) header["manifest"] = manifest;
  std::string out = header.dump();
  out += '\n';
  for (const auto& p : w.points) {
    out += point_to_json(w, p).dump();
    out += '\n';
  }
  return out;
}

inline Window window_from_text(const std::string& text, const std::string& what) {
  json whole = json::parse(text, nullptr, false);
  if (!whole.is_discarded() && whole.is_object() && whole.contains("points"))
    return window_from_json(whole);
  // JSON-lines: header then one point per line
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::bad_json, "empty window file " + what);
  json header = parse_json(line, what + " (jsonl header)");
  json points = json::array();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    points.push_back(parse_json(line, what + " (jsonl point)"));
  }
  header["points"] = points;
  return window_from_json(header);
}

inline Window load_window_file(const std::string& path) {
  return window_from_text(load_text(path), path);
}

inline std::string window_digest(const Window& w) {
  std::uint64_t h = fnv1a(kind_name(w.kind), std::string(kind_name(w.kind)).size());
  const Coord meta[6] = {w.params.k,       w.params.block_lo, w.params.block_hi,
                         w.params.level_lo, w.params.level_hi, w.params.radius};
  h = fnv1a(meta, sizeof(meta), h);
  for (const auto& p : w.points) {
    const Coord lvl = p.level;
    h = fnv1a(&lvl, sizeof(lvl), h);
    h = fnv1a(p.coords.data(), p.coords.size() * sizeof(Coord), h);
  }
  return digest_hex(h);
}

// --- covers ---------------------------------------------------------------

inline json to_json(const Cover& c) {
  json j;
  j["schema"] = "cover/1";
  j["sigma"] = c.sigma();
  json fams = json::array();
  for (const auto& f : c.families) {
    json members = json::array();
    for (const auto& m : f.members) members.push_back(m);
    fams.push_back(json{{"r", f.r}, {"members", members}});
  }
  j["families"] = fams;
  return j;
}

inline Cover cover_from_json(const json& j) {
  if (!j.contains("families") || !j["families"].is_array())
    fail(Errc::bad_json, "cover: missing families array");
  Cover c;
  for (const auto& fj : j["families"]) {
    Family f;
    if (!fj.contains("r") || !fj["r"].is_number_integer())
      fail(Errc::bad_json, "cover family: missing integer r");
    f.r = fj["r"].get<int>();
    require(f.r >= 1, Errc::invariant, "cover family r must be positive");
    if (!fj.contains("members") || !fj["members"].is_array())
      fail(Errc::bad_json, "cover family: missing members array");
    for (const auto& mj : fj["members"]) {
      if (!mj.is_array()) fail(Errc::bad_json, "cover member must be an index array");
      IndexSet m;
      for (const auto& v : mj) m.push_back(v.get<int>());
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      f.members.push_back(std::move(m));
    }
    c.families.push_back(std::move(f));
  }
  return c;
}

// --- decisions --------------------------------------------------------------

inline json to_json(const Decision& d, const std::vector<int>& sigma, Coord bound) {
  json j;
  j["schema"] = "decision/1";
  j["sigma"] = sigma;
  j["bound"] = bound;
  j["outcome"] = outcome_name(d.outcome);
  j["nodes"] = d.nodes_explored;
  j["budget"] = d.budget;
  j["witness"] = d.witness ? to_json(*d.witness) : json(nullptr);
  return j;
}

// --- fragments ----------------------------------------------------------------

inline json to_json(const AFragment& f) {
  json j;
  j["schema"] = "afragment/1";
  j["window"] = f.window_digest;
  j["bound"] = f.bound;
  j["n_max"] = f.n_max;
  j["s_max"] = f.s_max;
  j["budget_per_sigma"] = f.budget_per_sigma;
  j["definite_in"] = to_json(f.definite_in);
  j["definite_out"] = to_json(f.definite_out);
  j["unknown"] = to_json(f.unknown);
  json recs = json::array();
  for (const auto& r : f.outcomes)
    recs.push_back(json{{"sigma", r.sigma},
                        {"outcome", outcome_name(r.outcome)},
                        {"nodes", r.nodes},
                        {"inferred", r.inferred}});
  j["sigmas"] = recs;
  return j;
}

inline AFragment afragment_from_json(const json& j) {
  AFragment f;
  for (const char* key : {"definite_in", "definite_out", "unknown"})
    if (!j.contains(key)) fail(Errc::bad_json, std::string("afragment: missing ") + key);
  f.window_digest = j.value("window", std::string{});
  f.bound = j.value("bound", Coord{0});
  f.n_max = j.value("n_max", 1);
  f.s_max = j.value("s_max", 1);
  f.budget_per_sigma = j.value("budget_per_sigma", std::int64_t{0});
  f.definite_in = system_from_json(j["definite_in"]);
  f.definite_out = system_from_json(j["definite_out"]);
  f.unknown = system_from_json(j["unknown"]);
  return f;
}

// --- witness decompositions ------------------------------------------------

inline json to_json(const WitnessDecomposition& d, const std::string& window_digest) {
  json j;
  j["schema"] = "witness/1";
  j["window"] = window_digest;
  j["r"] = d.r;
  j["k"] = d.k;
  j["c"] = d.c;
  json tail = json::array();
  for (const auto& m : d.tail.members) tail.push_back(m.front());
  j["tail"] = tail;
  j["residual"] = d.residual;
  j["tail_empty"] = d.tail_empty;
  return j;
}

inline WitnessDecomposition witness_from_json(const json& j, std::string* digest_out = nullptr) {
  WitnessDecomposition d;
  for (const char* key : {"r", "k", "c", "tail", "residual"})
    if (!j.contains(key)) fail(Errc::bad_json, std::string("witness: missing ") + key);
  d.r = j["r"].get<int>();
  d.k = j["k"].get<int>();
  d.c = j["c"].get<Coord>();
  d.tail.r = d.r;
  for (const auto& v : j["tail"]) d.tail.members.push_back(IndexSet{v.get<int>()});
  for (const auto& v : j["residual"]) d.residual.push_back(v.get<int>());
  d.tail_empty = j.value("tail_empty", false);
  if (digest_out) *digest_out = j.value("window", std::string{});
  return d;
}

inline json to_json(const CoasdimStepVerdict& v) {
  json j;
  j["schema"] = "witness_verdict/1";
  j["ok"] = v.ok();
  j["partition_ok"] = v.partition_ok;
  j["tail_disjoint_ok"] = v.tail_disjoint_ok;
  j["tail_bounded_ok"] = v.tail_bounded_ok;
  j["residual_ok"] = v.residual_ok;
  j["vacuous_residual"] = v.vacuous_residual;
  j["residual_margin"] = v.residual_margin;
  j["residual_ok_at_c_minus_1"] = v.residual_ok_at_c_minus_1;
  if (v.disjoint_violation)
    j["disjoint_violation"] = json::array({v.disjoint_violation->first, v.disjoint_violation->second});
  if (v.residual_violation) j["residual_violation"] = *v.residual_violation;
  return j;
}

// --- audits -----------------------------------------------------------------

inline json to_json(const AuditReport& r, const MetricHandle& m) {
  json j;
  j["schema"] = "audit/1";
  j["metric"] = metric_name(m.kind);
  if (m.kind == MetricKind::Level) j["k"] = m.k;
  j["checked"] = r.checked;
  j["distinct_triples"] = r.distinct_triples;
  j["violation_count"] = r.violation_count;
  json v = json::array();
  for (const auto& viol : r.violations)
    v.push_back(json{{"check", viol.check},
                     {"sample", viol.sample},
                     {"x", viol.x},
                     {"y", viol.y},
                     {"z", viol.z},
                     {"d_xy", viol.d_xy},
                     {"d_yx", viol.d_yx},
                     {"d_yz", viol.d_yz},
                     {"d_xz", viol.d_xz}});
  j["violations"] = v;
  return j;
}

// --- cover verdicts --------------------------------------------------------

inline json to_json(const CoverVerdict& v) {
  json j;
  j["schema"] = "cover_verdict/1";
  j["ok"] = v.ok();
  j["covers"] = v.covers;
  j["bounded_ok"] = v.bounded_ok;
  j["disjoint_ok"] = v.disjoint_ok;
  j["max_diameter"] = v.max_diameter ? json(*v.max_diameter) : json(nullptr);
  j["first_violation"] = v.first_violation;
  return j;
}

}  // namespace trasdim
