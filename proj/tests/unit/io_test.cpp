#include <catch2/catch_amalgamated.hpp>

#include "trasdim/json_io.hpp"

using namespace trasdim;

namespace {

Window tower_window() {
  return gen_window({SpaceKind::X2Omega,
                     {.block_lo = 1, .block_hi = 2, .level_lo = 1, .level_hi = 2, .radius = 8}});
}

}  // namespace

TEST_CASE("window round-trips through the object form") {
  const std::vector<WindowSpec> specs = {
      {SpaceKind::R, {.block_lo = 2, .block_hi = 2, .radius = 5}},
      {SpaceKind::XKI, {.k = 1, .block_lo = 2, .block_hi = 2, .radius = 8}},
      {SpaceKind::XOmegaK, {.k = 2, .block_lo = 1, .block_hi = 2, .radius = 8}},
      {SpaceKind::YOmegaK, {.k = 1, .block_lo = 1, .block_hi = 2, .radius = 8}},
      {SpaceKind::X2Omega,
       {.block_lo = 1, .block_hi = 2, .level_lo = 1, .level_hi = 2, .radius = 8}},
  };
  for (const auto& spec : specs) {
    const Window w = gen_window(spec);
    const Window back = window_from_json(to_json(w));
    CHECK(back.kind == w.kind);
    CHECK(back.params == w.params);
    CHECK(back.points == w.points);
    CHECK(window_digest(back) == window_digest(w));
  }
}

TEST_CASE("window round-trips through the json-lines form") {
  const Window w = tower_window();
  const std::string text = window_to_jsonl(w, json(nullptr));
  const Window back = window_from_text(text, "test");
  CHECK(back.points == w.points);
  CHECK(window_digest(back) == window_digest(w));
}

TEST_CASE("window loading enforces membership and order") {
  const Window w = tower_window();
  json j = to_json(w);
  {
    json broken = j;
    broken["points"][0] = json::array({1, 1});  // coordinate 1 is off the level-1 grid
    CHECK_THROWS_AS(window_from_json(broken), Error);
  }
  {
    json swapped = j;
    std::swap(swapped["points"][0], swapped["points"][1]);
    CHECK_THROWS_AS(window_from_json(swapped), Error);
  }
  {
    json miscounted = j;
    miscounted["count"] = w.size() + 1;
    CHECK_THROWS_AS(window_from_json(miscounted), Error);
  }
}

TEST_CASE("malformed json fails with the json error") {
  CHECK_THROWS_AS(parse_json("{not json", "test"), Error);
  try {
    parse_json("{not json", "test");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_json);
  }
}

TEST_CASE("set systems round-trip") {
  const SetSystem m({{1, 2}, {1, 3}, {7}});
  CHECK(system_from_json(to_json(m)) == m);
  CHECK(system_from_json(parse_json(R"({"members": [[2,1],[1,3],[1,2]]})", "t")) ==
        SetSystem({{1, 2}, {1, 3}}));
  CHECK_THROWS_AS(system_from_json(parse_json(R"({"members": [[0]]})", "t")), Error);
  CHECK_THROWS_AS(system_from_json(parse_json(R"({"members": "no"})", "t")), Error);
}

TEST_CASE("covers round-trip with window indices") {
  Cover c;
  c.families.push_back({2, {{0, 1, 2}, {6, 7}}});
  c.families.push_back({5, {}});
  const Cover back = cover_from_json(to_json(c));
  REQUIRE(back.families.size() == 2);
  CHECK(back.families[0].r == 2);
  CHECK(back.families[0].members == c.families[0].members);
  CHECK(back.families[1].members.empty());
  CHECK(back.sigma() == std::vector<int>{2, 5});
}

TEST_CASE("decisions serialize their witness or its absence") {
  const Window w = gen_window({SpaceKind::R, {.block_lo = 1, .block_hi = 1, .radius = 4}});
  const Decision yes = decide_cover(w, {2}, 4, 1000);
  const json jy = to_json(yes, {2}, 4);
  CHECK(jy["outcome"] == "EXISTS");
  CHECK(!jy["witness"].is_null());
  const Cover back = cover_from_json(jy["witness"]);
  CHECK(check_cover(back, w, 4, default_metric(w)).ok());

  const Decision no = decide_cover(w, {2}, 3, 1000);
  const json jn = to_json(no, {2}, 3);
  CHECK(jn["outcome"] == "NONE");
  CHECK(jn["witness"].is_null());
}

TEST_CASE("fragments round-trip enough to recompute ord bounds") {
  const Window w = gen_window({SpaceKind::R, {.block_lo = 1, .block_hi = 1, .radius = 10}});
  AFragment frag = build_afragment(w, 9, 3, 2, 100000);
  frag.window_digest = window_digest(w);
  const AFragment back = afragment_from_json(to_json(frag));
  CHECK(back.definite_in == frag.definite_in);
  CHECK(back.definite_out == frag.definite_out);
  CHECK(back.unknown == frag.unknown);
  CHECK(afragment_ord_bounds(back) == afragment_ord_bounds(frag));
}

TEST_CASE("witness decompositions round-trip against their window digest") {
  const Window w = tower_window();
  const auto dec = tail_singleton_witness(w, 2);
  const std::string digest = window_digest(w);
  std::string loaded_digest;
  const auto back = witness_from_json(to_json(dec, digest), &loaded_digest);
  CHECK(loaded_digest == digest);
  CHECK(back.r == dec.r);
  CHECK(back.k == dec.k);
  CHECK(back.c == dec.c);
  CHECK(back.residual == dec.residual);
  REQUIRE(back.tail.members.size() == dec.tail.members.size());
  const auto v1 = check_coasdim_step(w, dec, default_metric(w));
  const auto v2 = check_coasdim_step(w, back, default_metric(w));
  CHECK(v1.ok() == v2.ok());
}

TEST_CASE("manifest carries the command, seed, and digests") {
  Manifest m;
  m.command = "trasdim window gen --kind r";
  m.seed = 7;
  m.threads = 2;
  m.inputs.emplace_back("w.json", digest_of_bytes("abc"));
  m.nodes = 42;
  const json j = to_json(m);
  CHECK(j["command"] == "trasdim window gen --kind r");
  CHECK(j["seed"] == 7);
  CHECK(j["inputs"]["w.json"] == digest_of_bytes("abc"));
  CHECK(j["nodes"] == 42);
  CHECK(digest_of_bytes("abc") != digest_of_bytes("abd"));
}
