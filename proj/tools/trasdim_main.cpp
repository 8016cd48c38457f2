// Batch CLI wiring the library together with deterministic JSON I/O.
// Exit codes: 0 definite outcome, 1 usage/input error, 2 UNKNOWN present.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "trasdim/trasdim.hpp"

namespace {

using namespace trasdim;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency
  std::string command;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> inputs;

  int effective_threads() const {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
  }

  Manifest manifest(std::int64_t nodes = -1) const {
    Manifest m;
    m.command = command;
    m.seed = seed;
    m.threads = effective_threads();
    m.inputs = inputs;
    m.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    m.nodes = nodes;
    return m;
  }
};

std::string load_input(GlobalOpts& g, const std::string& path) {
  std::string text = load_text(path);
  g.inputs.emplace_back(path, digest_of_bytes(text));
  return text;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    save_text(out_path, text);
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) {
    try {
      const int v = std::stoi(s);
      return {v, v};
    } catch (...) {
      fail(Errc::usage, "expected a range 'lo..hi', got '" + s + "'");
    }
  }
  try {
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
  } catch (...) {
    fail(Errc::usage, "expected a range 'lo..hi', got '" + s + "'");
  }
}

std::vector<int> parse_sigma(const std::string& s) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!tok.empty()) {
      try {
        out.push_back(std::stoi(tok));
      } catch (...) {
        fail(Errc::usage, "bad sigma entry '" + tok + "'");
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) fail(Errc::usage, "sigma is empty");
  std::sort(out.begin(), out.end());
  return out;
}

MetricHandle metric_for(const Window& w, const std::string& override_name) {
  if (override_name.empty()) return default_metric(w);
  MetricHandle h{metric_from_name(override_name), 0};
  if (h.kind == MetricKind::Level) h.k = w.params.k;
  return h;
}

// ---- subcommand bodies ----

int cmd_window_gen(GlobalOpts& g, const std::string& kind_str, int k, int block,
                   const std::string& blocks, const std::string& levels, Coord radius,
                   std::int64_t ceiling, const std::string& out, bool jsonl) {
  WindowSpec spec;
  spec.kind = kind_from_name(kind_str);
  spec.params.k = k;
  spec.params.radius = radius;
  if (spec.kind == SpaceKind::R || spec.kind == SpaceKind::XKI) {
    require(block >= 1, Errc::usage, "--block (or --i) is required for this kind");
    spec.params.block_lo = spec.params.block_hi = block;
  } else {
    require(!blocks.empty(), Errc::usage, "--blocks lo..hi is required for this kind");
    std::tie(spec.params.block_lo, spec.params.block_hi) = parse_range(blocks);
  }
  if (spec.kind == SpaceKind::X2Omega) {
    require(!levels.empty(), Errc::usage, "--levels lo..hi is required for x2omega");
    std::tie(spec.params.level_lo, spec.params.level_hi) = parse_range(levels);
  }
  const Window w = gen_window(spec, ceiling);
  if (jsonl) {
    const std::string text = window_to_jsonl(w, to_json(g.manifest()));
    if (out.empty())
      std::cout << text;
    else
      save_text(out, text);
  } else {
    json j = to_json(w);
    j["manifest"] = to_json(g.manifest());
    emit(j, out);
  }
  return 0;
}

int cmd_metric_audit(GlobalOpts& g, const std::string& window_path, const std::string& metric_name,
                     std::int64_t samples, const std::string& out) {
  const Window w = window_from_text(load_input(g, window_path), window_path);
  const MetricHandle m = metric_for(w, metric_name);
  const AuditReport rep = metric_audit(w, m, samples, g.seed, g.effective_threads());
  json j = to_json(rep, m);
  j["manifest"] = to_json(g.manifest());
  emit(j, out);
  return 0;
}

int cmd_cover_decide(GlobalOpts& g, const std::string& window_path, const std::string& sigma_str,
                     Coord bound, std::int64_t budget, bool naive, const std::string& out) {
  const Window w = window_from_text(load_input(g, window_path), window_path);
  const std::vector<int> sigma = parse_sigma(sigma_str);
  const Decision dec =
      naive ? decide_cover_naive(w, sigma, bound) : decide_cover(w, sigma, bound, budget);
  json j = to_json(dec, sigma, bound);
  j["manifest"] = to_json(g.manifest(dec.nodes_explored));
  emit(j, out);
  return dec.outcome == Outcome::Unknown ? 2 : 0;
}

int cmd_cover_check(GlobalOpts& g, const std::string& window_path, const std::string& cover_path,
                    Coord bound, const std::string& out) {
  const Window w = window_from_text(load_input(g, window_path), window_path);
  const json cj = parse_json(load_input(g, cover_path), cover_path);
  const Cover c = cover_from_json(cj);
  const CoverVerdict v = check_cover(c, w, bound, default_metric(w));
  json j = to_json(v);
  j["bound"] = bound;
  j["manifest"] = to_json(g.manifest());
  emit(j, out);
  return 0;
}

int cmd_afrag(GlobalOpts& g, const std::string& window_path, Coord bound, int max_elem,
              int max_size, std::int64_t budget, const std::string& out) {
  const Window w = window_from_text(load_input(g, window_path), window_path);
  AFragment frag = build_afragment(w, bound, max_elem, max_size, budget);
  frag.window_digest = window_digest(w);
  std::int64_t nodes = 0;
  for (const auto& rec : frag.outcomes) nodes += rec.nodes;
  json j = to_json(frag);
  j["manifest"] = to_json(g.manifest(nodes));
  emit(j, out);
  return frag.unknown.empty() ? 0 : 2;
}

int cmd_ord(GlobalOpts& g, const std::string& system_path, const std::string& afrag_path,
            bool naive) {
  require(system_path.empty() != afrag_path.empty(), Errc::usage,
          "ord: give exactly one of --system / --afrag");
  if (!system_path.empty()) {
    const SetSystem M = system_from_json(parse_json(load_input(g, system_path), system_path));
    if (naive) {
      std::cout << ord_system_naive(M) << "\n";
      return 0;
    }
    const OrdResult r = ord_system_with_chain(M);
    std::cout << r.value << "\n";
    std::cout << "chain:";
    for (Label a : r.chain) std::cout << " " << a;
    std::cout << "\n";
    return 0;
  }
  const AFragment frag = afragment_from_json(parse_json(load_input(g, afrag_path), afrag_path));
  const auto [lo, hi] = afragment_ord_bounds(frag);
  json j{{"schema", "ord_interval/1"}, {"lo", lo}, {"hi", hi}};
  j["manifest"] = to_json(g.manifest());
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_witness_x2omega(GlobalOpts& g, int r, const std::string& levels, const std::string& blocks,
                        Coord box, std::int64_t ceiling, const std::string& out) {
  WindowSpec spec;
  spec.kind = SpaceKind::X2Omega;
  std::tie(spec.params.level_lo, spec.params.level_hi) = parse_range(levels);
  std::tie(spec.params.block_lo, spec.params.block_hi) = parse_range(blocks);
  spec.params.radius = box;
  const Window w = gen_window(spec, ceiling);
  const WitnessDecomposition dec = tail_singleton_witness(w, r);
  json j = to_json(dec, window_digest(w));
  j["manifest"] = to_json(g.manifest());
  emit(j, out);
  return 0;
}

int cmd_witness_check(GlobalOpts& g, const std::string& window_path, const std::string& dec_path,
                      const std::string& out) {
  const Window w = window_from_text(load_input(g, window_path), window_path);
  std::string expected_digest;
  const WitnessDecomposition dec =
      witness_from_json(parse_json(load_input(g, dec_path), dec_path), &expected_digest);
  if (!expected_digest.empty())
    require(expected_digest == window_digest(w), Errc::invariant,
            "witness check: decomposition was built for a different window");
  const CoasdimStepVerdict v = check_coasdim_step(w, dec, default_metric(w));
  json j = to_json(v);
  j["r"] = dec.r;
  j["k"] = dec.k;
  j["c"] = dec.c;
  // the step pushes the residual one finite notch below the ambient limit
  const Ordinal residual_claim{1, dec.k - 1};
  const Ordinal ambient{2, 0};
  j["residual_dimension_claim"] = ord_format(residual_claim);
  j["ambient_dimension"] = ord_format(ambient);
  j["claim_below_ambient"] = ord_compare(residual_claim, ambient) == Cmp::LT;
  j["manifest"] = to_json(g.manifest());
  emit(j, out);
  return 0;
}

int cmd_witness_grid(GlobalOpts& g, int block, int side, Coord box, const std::string& out) {
  WindowSpec spec;
  spec.kind = SpaceKind::R;
  spec.params.block_lo = spec.params.block_hi = block;
  spec.params.radius = box;
  const Window w = gen_window(spec);
  const Cover c = grid_cover(w, side);
  const CoverVerdict v = check_cover(c, w, side - 1, default_metric(w));
  json j = to_json(c);
  j["bound"] = side - 1;
  j["verdict"] = to_json(v);
  j["manifest"] = to_json(g.manifest());
  emit(j, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  for (int i = 0; i < argc; ++i) {
    if (i) g.command += ' ';
    g.command += argv[i];
  }

  CLI::App app{"exact desk-scale computations on lattice metric spaces: windows, metrics, "
               "r-disjoint cover search, Ord ranks, and decomposition witnesses"};
  app.set_version_flag("--version",
                       std::string("trasdim ") + kToolVersion +
                           " (schemas: window/1 cover/1 decision/1 afragment/1 witness/1 audit/1)");
  app.add_option("--seed", g.seed, "seed for all sampled draws")->capture_default_str();
  app.add_option("--threads", g.threads, "worker count (0 = hardware)")->capture_default_str();
  app.require_subcommand(1);

  int exit_code = 0;

  // window gen
  auto* window = app.add_subcommand("window", "generate finite space windows");
  window->require_subcommand(1);
  {
    auto* gen = window->add_subcommand("gen", "enumerate a window");
    auto kind = std::make_shared<std::string>();
    auto k = std::make_shared<int>(0);
    auto block = std::make_shared<int>(0);
    auto blocks = std::make_shared<std::string>();
    auto levels = std::make_shared<std::string>();
    auto radius = std::make_shared<Coord>(0);
    auto ceiling = std::make_shared<std::int64_t>(kDefaultPointCeiling);
    auto out = std::make_shared<std::string>();
    auto jsonl = std::make_shared<bool>(false);
    gen->add_option("--kind", *kind, "r | xki | xomegak | yomegak | x2omega")->required();
    gen->add_option("--k", *k, "bad-coordinate budget");
    gen->add_option("--block,--i", *block, "single block (r and xki kinds)");
    gen->add_option("--blocks", *blocks, "block range lo..hi");
    gen->add_option("--levels", *levels, "level range lo..hi (x2omega)");
    gen->add_option("--r,--radius", *radius, "box radius")->required();
    gen->add_option("--ceiling", *ceiling, "point-count ceiling");
    gen->add_option("--out", *out, "output file (stdout when omitted)");
    gen->add_flag("--jsonl", *jsonl, "write header + one point per line");
    gen->callback([&, kind, k, block, blocks, levels, radius, ceiling, out, jsonl] {
      exit_code = cmd_window_gen(g, *kind, *k, *block, *blocks, *levels, *radius, *ceiling, *out,
                                 *jsonl);
    });
  }

  // metric audit
  auto* metric = app.add_subcommand("metric", "metric-axiom auditing");
  metric->require_subcommand(1);
  {
    auto* audit = metric->add_subcommand("audit", "seeded identity/symmetry/triangle audit");
    auto window_path = std::make_shared<std::string>();
    auto metric_name = std::make_shared<std::string>();
    auto samples = std::make_shared<std::int64_t>(100000);
    auto out = std::make_shared<std::string>();
    audit->add_option("--window", *window_path, "window file")->required();
    audit->add_option("--metric", *metric_name, "sup | level | tower (default: window's own)");
    audit->add_option("--samples", *samples, "triple count")->capture_default_str();
    audit->add_option("--out", *out, "output file");
    audit->callback([&, window_path, metric_name, samples, out] {
      exit_code = cmd_metric_audit(g, *window_path, *metric_name, *samples, *out);
    });
  }

  // cover decide / check
  auto* cover = app.add_subcommand("cover", "bounded r-disjoint cover decisions");
  cover->require_subcommand(1);
  {
    auto* decide = cover->add_subcommand("decide", "exact budgeted existence decision");
    auto window_path = std::make_shared<std::string>();
    auto sigma = std::make_shared<std::string>();
    auto bound = std::make_shared<Coord>(0);
    auto budget = std::make_shared<std::int64_t>(1000000);
    auto canonical = std::make_shared<bool>(false);
    auto naive = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    decide->add_option("--window", *window_path, "window file")->required();
    decide->add_option("--sigma", *sigma, "comma-separated distinct disjointness parameters")
        ->required();
    decide->add_option("--bound", *bound, "diameter bound")->required();
    decide->add_option("--budget", *budget, "node budget")->capture_default_str();
    decide->add_flag("--canonical", *canonical,
                     "force the canonical sequential DFS witness (always on)");
    decide->add_flag("--naive", *naive, "use the exhaustive reference oracle instead");
    decide->add_option("--out", *out, "output file");
    decide->callback([&, window_path, sigma, bound, budget, naive, out] {
      exit_code = cmd_cover_decide(g, *window_path, *sigma, *bound, *budget, *naive, *out);
    });
  }
  {
    auto* check = cover->add_subcommand("check", "verify a cover certificate");
    auto window_path = std::make_shared<std::string>();
    auto cover_path = std::make_shared<std::string>();
    auto bound = std::make_shared<Coord>(0);
    auto out = std::make_shared<std::string>();
    check->add_option("--window", *window_path, "window file")->required();
    check->add_option("--cover", *cover_path, "cover file")->required();
    check->add_option("--bound", *bound, "diameter bound")->required();
    check->add_option("--out", *out, "output file");
    check->callback([&, window_path, cover_path, bound, out] {
      exit_code = cmd_cover_check(g, *window_path, *cover_path, *bound, *out);
    });
  }

  // afrag
  {
    auto* afrag = app.add_subcommand("afrag", "build a bounded no-cover fragment");
    auto window_path = std::make_shared<std::string>();
    auto bound = std::make_shared<Coord>(0);
    auto max_elem = std::make_shared<int>(1);
    auto max_size = std::make_shared<int>(1);
    auto budget = std::make_shared<std::int64_t>(1000000);
    auto out = std::make_shared<std::string>();
    afrag->add_option("--window", *window_path, "window file")->required();
    afrag->add_option("--bound", *bound, "diameter bound")->required();
    afrag->add_option("--max-elem", *max_elem, "largest sigma element")->required();
    afrag->add_option("--max-size", *max_size, "largest sigma size")->required();
    afrag->add_option("--budget", *budget, "node budget per sigma")->capture_default_str();
    afrag->add_option("--out", *out, "output file");
    afrag->callback([&, window_path, bound, max_elem, max_size, budget, out] {
      exit_code = cmd_afrag(g, *window_path, *bound, *max_elem, *max_size, *budget, *out);
    });
  }

  // ord
  {
    auto* ord = app.add_subcommand("ord", "Ord rank of a set system or fragment interval");
    auto system_path = std::make_shared<std::string>();
    auto afrag_path = std::make_shared<std::string>();
    auto naive = std::make_shared<bool>(false);
    ord->add_option("--system", *system_path, "set system file {\"members\": [[...]]}");
    ord->add_option("--afrag", *afrag_path, "fragment file");
    ord->add_flag("--naive", *naive, "use the unmemoized reference recursion");
    ord->callback([&, system_path, afrag_path, naive] {
      exit_code = cmd_ord(g, *system_path, *afrag_path, *naive);
    });
  }

  // witness
  auto* witness = app.add_subcommand("witness", "decomposition witnesses and grid covers");
  witness->require_subcommand(1);
  {
    auto* x2 = witness->add_subcommand("x2omega", "tail-singleton decomposition at scale r");
    auto r = std::make_shared<int>(1);
    auto levels = std::make_shared<std::string>();
    auto blocks = std::make_shared<std::string>();
    auto box = std::make_shared<Coord>(0);
    auto ceiling = std::make_shared<std::int64_t>(kDefaultPointCeiling);
    auto out = std::make_shared<std::string>();
    x2->add_option("--r", *r, "disjointness scale")->required();
    x2->add_option("--levels", *levels, "level range lo..hi")->required();
    x2->add_option("--blocks", *blocks, "block range lo..hi")->required();
    x2->add_option("--box", *box, "box radius")->required();
    x2->add_option("--ceiling", *ceiling, "point-count ceiling");
    x2->add_option("--out", *out, "output file");
    x2->callback([&, r, levels, blocks, box, ceiling, out] {
      exit_code = cmd_witness_x2omega(g, *r, *levels, *blocks, *box, *ceiling, *out);
    });
  }
  {
    auto* check = witness->add_subcommand("check", "verify a decomposition against its window");
    auto window_path = std::make_shared<std::string>();
    auto dec_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    check->add_option("--window", *window_path, "window file")->required();
    check->add_option("--dec", *dec_path, "decomposition file")->required();
    check->add_option("--out", *out, "output file");
    check->callback([&, window_path, dec_path, out] {
      exit_code = cmd_witness_check(g, *window_path, *dec_path, *out);
    });
  }
  {
    auto* grid = witness->add_subcommand("grid", "parity brick cover of an r-kind window");
    auto block = std::make_shared<int>(1);
    auto side = std::make_shared<int>(1);
    auto box = std::make_shared<Coord>(0);
    auto out = std::make_shared<std::string>();
    grid->add_option("--block", *block, "ambient dimension")->required();
    grid->add_option("--d", *side, "brick side / disjointness parameter")->required();
    grid->add_option("--box", *box, "box radius")->required();
    grid->add_option("--out", *out, "output file");
    grid->callback([&, block, side, box, out] {
      exit_code = cmd_witness_grid(g, *block, *side, *box, *out);
    });
  }

  // global flags (--seed, --threads) may appear after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough(true);
    for (auto* sc : a->get_subcommands(std::function<bool(CLI::App*)>{})) enable_fallthrough(sc);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    // CLI11 returns 0 for --help/--version
    return rc == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error[" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error[E_BADJSON]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[E_INTERNAL]: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
