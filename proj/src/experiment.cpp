#include "asymp/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "asymp/digest.hpp"
#include "asymp/error.hpp"

namespace asymp {

namespace fs = std::filesystem;

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
    case Errc::MalformedSpec:
    case Errc::BaseNotDividing:
    case Errc::BaseTooLarge:
    case Errc::BadRegion:
    case Errc::UnknownShape:
      return 2;
    case Errc::CodeOverflow:
      return 3;
    default:
      return 1;
  }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

const char* kTmZOdometer = R"({
  "name": "tm-z-odometer",
  "group": "Z",
  "seed": 20240601,
  "generator": {"kind": "ThueMorse", "region": {"lo": [-2048], "hi": [4096]}, "floors": 1},
  "tiling": {"builtin": "z-odometer", "sizes": [16, 64, 256, 1024, 4096]},
  "base": [16, 64, 256, 1024, 4096],
  "top_level": 5,
  "anchor": [1365],
  "coder": {"levels": [1, 2], "depth": 2, "fill": "zeros"},
  "horizon": 1000,
  "perturbed_pairs": 8,
  "probes": [{"K": [[-1], [0], [1]], "eps": "1/10"}],
  "scan": {"max_level": 3, "max_shape_size": 256},
  "detector": {"exam_radius": 0, "separation_exponent": 0}
})";

const char* kFullShiftZ = R"({
  "name": "fullshift-z",
  "group": "Z",
  "seed": 20240601,
  "generator": {"kind": "FullShift", "region": {"lo": [-2048], "hi": [4096]}, "floors": 1},
  "tiling": {"builtin": "z-odometer", "sizes": [16, 64, 256, 1024, 4096]},
  "base": [16, 64, 256, 1024, 4096],
  "top_level": 5,
  "anchor": [1365],
  "coder": {"levels": [1, 2], "depth": 2, "fill": "zeros"},
  "horizon": 1000,
  "perturbed_pairs": 8,
  "probes": [{"K": [[-1], [0], [1]], "eps": "1/10"}],
  "scan": {"max_level": 3, "max_shape_size": 256},
  "detector": {"exam_radius": 0, "separation_exponent": 0}
})";

const char* kZ2XorDyadic = R"({
  "name": "z2xor-z2-dyadic",
  "group": "Z2",
  "seed": 20240601,
  "generator": {"kind": "Z2Xor", "region": {"lo": [-64, -64], "hi": [64, 64]}, "floors": 1},
  "tiling": {"builtin": "z2-dyadic", "depth": 6},
  "base": [4, 16, 64, 256, 1024, 4096],
  "top_level": 6,
  "anchor": [63, 0],
  "coder": {"levels": [2, 3], "depth": 2, "fill": "zeros"},
  "horizon": 1000,
  "perturbed_pairs": 4,
  "probes": [{"K": [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]], "eps": "1/2"}],
  "scan": {"max_level": 4, "max_shape_size": 256},
  "detector": {"exam_radius": 0, "separation_exponent": 0}
})";

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

std::vector<std::string> builtin_config_names() { return {"tm-z-odometer", "fullshift-z", "z2xor-z2-dyadic"}; }

Json builtin_config(std::string_view name) {
  if (name == "tm-z-odometer") return Json::parse(kTmZOdometer);
  if (name == "fullshift-z") return Json::parse(kFullShiftZ);
  if (name == "z2xor-z2-dyadic") return Json::parse(kZ2XorDyadic);
  config_error("unknown builtin config '" + std::string(name) + "'");
}

ExperimentConfig parse_config(const Json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) config_error("config must be an object");
    cfg.echo = j;
    cfg.base_dir = base_dir;
    cfg.name = get_or<std::string>(j, "name", "");
    cfg.group = parse_group(j.at("group").get<std::string>());
    if (cfg.group == GroupKind::Heisenberg3) config_error("tiling pipelines exist for Z and Z2 only");
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

    const Json& g = j.at("generator");
    cfg.generator.kind = parse_sample(g.at("kind").get<std::string>());
    cfg.generator.region.kind = cfg.group;
    cfg.generator.region.lo = g.at("region").at("lo").get<std::vector<std::int64_t>>();
    cfg.generator.region.hi = g.at("region").at("hi").get<std::vector<std::int64_t>>();
    cfg.generator.floors = get_or<int>(g, "floors", 1);
    cfg.generator.complete_order = get_or<int>(g, "complete_order", 0);
    cfg.generator.seed = stream_seed(cfg.seed, "generator");
    const int dim = dimension(cfg.group);
    if (static_cast<int>(cfg.generator.region.lo.size()) != dim || static_cast<int>(cfg.generator.region.hi.size()) != dim) {
      config_error("generator region corners need " + std::to_string(dim) + " coordinates");
    }
    for (int d = 0; d < dim; ++d)
      if (cfg.generator.region.hi[d] <= cfg.generator.region.lo[d]) config_error("generator region is empty");
    if (cfg.generator.floors < 1) config_error("generator floors must be positive");

    cfg.tiling = j.at("tiling");
    if (!cfg.tiling.is_object()) config_error("tiling must be an object");

    cfg.base = j.at("base").get<std::vector<std::int64_t>>();
    if (cfg.base.empty()) config_error("base is empty");
    std::int64_t prev = 1;
    for (std::size_t i = 0; i < cfg.base.size(); ++i) {
      const std::int64_t p = cfg.base[i];
      if (p <= prev) config_error("base must increase strictly: p_" + std::to_string(i + 1) + " = " + std::to_string(p));
      if (p % prev != 0) {
        config_error("base: p_" + std::to_string(i + 1) + " = " + std::to_string(p) + " is not a multiple of p_" +
                     std::to_string(i) + " = " + std::to_string(prev));
      }
      prev = p;
    }
    cfg.top_level = get_or<int>(j, "top_level", static_cast<int>(cfg.base.size()));
    if (cfg.top_level < 1 || cfg.top_level > static_cast<int>(cfg.base.size())) config_error("top_level outside the base");
    cfg.anchor = j.contains("anchor") ? point_from_json(cfg.group, j.at("anchor")) : identity(cfg.group);

    const Json& c = j.at("coder");
    cfg.coder_levels = c.at("levels").get<std::vector<int>>();
    if (cfg.coder_levels.empty()) config_error("coder levels are empty");
    for (std::size_t i = 0; i < cfg.coder_levels.size(); ++i) {
      const int k = cfg.coder_levels[i];
      if (k < 1 || k > cfg.top_level || (i > 0 && k <= cfg.coder_levels[i - 1])) {
        config_error("coder levels must increase strictly within [1, top_level]");
      }
    }
    cfg.depth = get_or<int>(c, "depth", static_cast<int>(cfg.coder_levels.size()));
    if (cfg.depth < 1 || cfg.depth > static_cast<int>(cfg.coder_levels.size())) config_error("coder depth outside its levels");
    for (int n = 1; n <= cfg.depth; ++n) {
      const std::int64_t p = cfg.base[static_cast<std::size_t>(cfg.coder_levels[static_cast<std::size_t>(n - 1)] - 1)];
      if (p % (std::int64_t{1} << n) != 0) {
        config_error("2^" + std::to_string(n) + " does not divide p_" + std::to_string(n) + " = " + std::to_string(p));
      }
    }
    cfg.fill = parse_fill(get_or<std::string>(c, "fill", "zeros"));
    if (cfg.fill == Fill::Enumerate) config_error("pipelines need a deterministic fill");

    cfg.horizon = get_or<std::int64_t>(j, "horizon", 1000);
    cfg.perturbed_pairs = get_or<int>(j, "perturbed_pairs", 4);
    if (cfg.horizon < 0 || cfg.perturbed_pairs < 0) config_error("horizon and perturbed_pairs must be non-negative");

    if (j.contains("probes")) {
      for (const auto& pj : j.at("probes")) {
        ProbeConfig pc{FiniteSubset(cfg.group, points_from_json(cfg.group, pj.at("K"))), rational_from_json(pj.at("eps"))};
        if (pc.eps <= Rational(0)) config_error("probe eps must be positive");
        if (pc.K.empty()) config_error("probe K is empty");
        cfg.probes.push_back(std::move(pc));
      }
    }
    if (j.contains("scan")) {
      cfg.scan.max_level = get_or<int>(j.at("scan"), "max_level", cfg.scan.max_level);
      cfg.scan.max_shape_size = get_or<std::size_t>(j.at("scan"), "max_shape_size", cfg.scan.max_shape_size);
    }
    if (j.contains("detector")) {
      cfg.detector.exam_radius = get_or<int>(j.at("detector"), "exam_radius", 0);
      cfg.detector.separation_exponent = get_or<int>(j.at("detector"), "separation_exponent", 0);
    }
  } catch (const Json::exception& e) {
    config_error(e.what());
  } catch (const Error& e) {
    if (exit_code_for(e.code()) == 2) throw;
    config_error(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path, std::optional<std::uint64_t> seed_override) {
  Json j;
  std::string dir = ".";
  const auto names = builtin_config_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    j = builtin_config(name_or_path);
  } else {
    std::ifstream in(name_or_path);
    if (!in) config_error("cannot read config '" + name_or_path + "'");
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      config_error(e.what());
    }
    dir = fs::path(name_or_path).parent_path().string();
    if (dir.empty()) dir = ".";
  }
  if (seed_override) j["seed"] = *seed_override;
  return parse_config(j, dir);
}

TilingSpec resolve_tiling(const ExperimentConfig& cfg) {
  TilingSpec spec;
  try {
    const Json& t = cfg.tiling;
    if (t.contains("builtin")) {
      const auto name = t.at("builtin").get<std::string>();
      if (name == "z-odometer") {
        spec = z_odometer_spec(t.at("sizes").get<std::vector<std::int64_t>>(),
                               get_or<std::vector<int>>(t, "reversed_levels", {}));
      } else if (name == "z2-dyadic") {
        spec = z2_dyadic_spec(t.at("depth").get<int>());
      } else {
        config_error("unknown builtin tiling '" + name + "'");
      }
    } else if (t.contains("path")) {
      fs::path p = t.at("path").get<std::string>();
      if (p.is_relative()) p = fs::path(cfg.base_dir) / p;
      std::ifstream in(p);
      if (!in) config_error("cannot read tiling spec '" + p.string() + "'");
      spec = spec_from_json(Json::parse(in));
    } else if (t.contains("spec")) {
      spec = spec_from_json(t.at("spec"));
    } else {
      config_error("tiling needs one of builtin, path, spec");
    }
  } catch (const Json::exception& e) {
    config_error(e.what());
  }
  if (spec.group != cfg.group) {
    config_error("tiling spec is over " + std::string(group_name(spec.group)) + ", config over " +
                 std::string(group_name(cfg.group)));
  }
  if (spec.depth() != static_cast<int>(cfg.base.size())) {
    config_error("base lists " + std::to_string(cfg.base.size()) + " entries for " + std::to_string(spec.depth()) +
                 " tiling levels");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

Json report_to_json(const RunReport& r, bool with_timings) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"module", c.module}, {"law", c.law}, {"pass", c.pass}, {"detail", c.detail}});
  }
  Json j = {{"command", r.command},
            {"config", r.config},
            {"checks", checks},
            {"artifacts", r.artifacts},
            {"exit_status", r.exit_status}};
  if (!r.error.empty()) j["error"] = r.error;
  if (with_timings) j["timings_ms"] = r.timings;
  return j;
}

namespace {

class Timer {
 public:
  Timer(Json& sink, std::string name) : sink_(sink), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    sink_[name_] = std::chrono::duration<double, std::milli>(dt).count();
  }
  Timer(const Timer&) = delete;
  Timer& operator=(const Timer&) = delete;

 private:
  Json& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
};

ArrayPoint center_indicator(const TilingInstance& inst, int level, const FiniteSubset& cells) {
  ArrayPoint a(1, cells);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto t = inst.tile_at(level, cells[i]);
    a.set_at(1, i, t && t->center == cells[i]);
  }
  return a;
}

}  // namespace

RunReport run_pipeline(const ExperimentConfig& cfg, const std::set<std::string>& stages,
                       const std::optional<std::string>& out_dir, const std::string& command) {
  RunReport rep;
  rep.command = command;
  rep.config = cfg.echo;
  std::map<std::string, std::string> files;
  auto want = [&](const char* s) { return stages.count(s) != 0; };
  auto check = [&](const char* module, const char* law, bool pass, Json detail) {
    rep.checks.push_back({module, law, pass, std::move(detail)});
  };

  try {
    const TilingSpec spec = resolve_tiling(cfg);
    TilingSpec odo;
    {
      Timer t(rep.timings, "tile");
      std::vector<InvarianceProbe> probes;
      for (const auto& p : cfg.probes) probes.push_back({p.K, p.eps});
      const ValidationReport vr = validate_system(spec, probes);
      if (!vr.accepted) throw Error(Errc::MalformedSpec, vr.first_violation());
      odo = odometrize(center_normalize(spec), cfg.base, CenterChoice::Deterministic);
      if (want("tile")) {
        check("tilings", "determinism", vr.accepted, validation_to_json(vr));
        const OdometricReport odr = check_odometric(OrderedTilingSystem(odo));
        check("tilings", "odometric_congruences", odr.odometric, odometric_to_json(odr));
        const OrderedTilingSystem sys(spec);
        for (const auto& p : cfg.probes) {
          const IntervalScan scan = interval_invariance_scan(sys, p.K, p.eps, cfg.scan);
          check("ordered_tilings", "interval_scan", scan.l0.has_value(), scan_to_json(scan));
        }
        files["spec.json"] = dump_canonical(spec_to_json(odo));
      }
    }

    if (want("order") || want("entropy") || want("encode") || want("detect")) {
      const SystemPtr sys = compile(odo);
      const auto& top_offsets = sys->shape(cfg.top_level, 0).offsets;
      if (std::find(top_offsets.begin(), top_offsets.end(), cfg.anchor) == top_offsets.end()) {
        throw Error(Errc::ConfigError, "anchor " + to_string(cfg.anchor) + " is not a cell of the top shape");
      }
      const TilingInstance inst = anchored_instance(sys, cfg.top_level, 0, cfg.anchor);
      const OrderWindow order = induced_order_full(inst, cfg.top_level);
      const std::int64_t N = order.radius();

      if (want("order")) {
        Timer t(rep.timings, "order");
        bool round_trip = true;
        for (std::int64_t k = -N; k <= N; ++k) round_trip = round_trip && *order.position_of(*order.at_position(k)) == k;
        check("orders", "round_trip", round_trip, {{"radius", N}});

        std::mt19937_64 rng(stream_seed(cfg.seed, "order-checks"));
        std::uniform_int_distribution<std::int64_t> pick(-N / 2, N / 2);
        bool identity_ok = true;
        std::size_t cases = 0;
        for (int c = 0; c < 32 && N > 0; ++c) {
          const std::int64_t k = pick(rng);
          const GroupPoint g = *order.at_position(k);
          const OrderWindow w = act(g, order).value();
          for (std::int64_t i = -w.radius(); i <= w.radius(); ++i) {
            identity_ok = identity_ok && mul(*w.at_position(i), g) == *order.at_position(i + k);
          }
          identity_ok = identity_ok && *w.position_of(inverse(g)) == -k;
          ++cases;
        }
        check("orders", "translation_identity", identity_ok, {{"cases", cases}});

        const auto st = straightness_status(inst, cfg.top_level, FiniteSubset(order.kind(), order.positions()));
        Json idx = Json::array();
        for (const auto& [i, n] : st.central_index) idx.push_back({i, n});
        check("ordered_tilings", "straightness", st.kind == Straightness::StraightSoFar,
              {{"status", std::string(straightness_name(st.kind))}, {"depth", st.depth}, {"central_index", idx}});
        files["order.json"] = dump_canonical(order_to_json(order));
      }

      if (want("entropy") || want("encode") || want("detect")) {
        const UniversePtr sample = generate_sample(cfg.generator);
        const Coder coder = product_pipeline(*sample, inst, order, cfg.coder_levels);
        const ArrayPoint& x = coder.universe()->points().front();

        if (want("entropy")) {
          Timer t(rep.timings, "entropy");
          for (int n = 1; n <= cfg.depth; ++n) {
            std::set<std::vector<GroupPoint>> seen;
            std::vector<BoundInterval> intervals;
            for (const auto& r : coder.partition(n).ranges) {
              if (!r.complete) continue;
              auto cells = coder.range_cells(r);
              if (seen.insert(normalized_domain(cells)).second) intervals.push_back({std::move(cells), coder.p(n)});
            }
            const BoundReport br = entropy_bound_check(*coder.universe(), n, intervals);
            check("symbolic", "entropy_bound", br.all_pass, bound_to_json(br));
          }
        }

        if (want("encode") || want("detect")) {
          coder.prepare_tables(cfg.depth);
        }

        if (want("encode")) {
          Timer t(rep.timings, "encode");
          const CodedPoint y = coder.encode(x, cfg.depth, cfg.fill);
          const MaskCheck mc = check_mask_exactness(coder, y);
          check("extension_coder", "mask_exactness", mc.ok, mask_check_to_json(mc));
          bool prefix = true;
          if (cfg.depth > 1) {
            const CodedPoint shallow = coder.encode(x, cfg.depth - 1, cfg.fill);
            for (std::size_t i = 0; i < y.row.size(); ++i) {
              if (!shallow.undefined()[i]) prefix = prefix && !y.undefined()[i] && y.row[i] == shallow.row[i];
            }
          }
          check("extension_coder", "prefix_stability", prefix, {{"depth", cfg.depth}});
          Json parts = Json::array();
          for (int n = 1; n <= cfg.depth; ++n) parts.push_back(partition_to_json(coder.partition(n)));
          files["partitions.json"] = dump_canonical(parts);
          files["coded.json"] = dump_canonical(coded_to_json(y));
        }

        if (want("detect")) {
          Timer t(rep.timings, "detect");
          std::mt19937_64 rng(stream_seed(cfg.seed, "perturb"));
          std::uniform_int_distribution<std::int64_t> pick(-N / 2, N / 2);
          Json pairs = Json::array();
          bool sep_ok = true;
          bool detect_ok = true;
          for (int c = 0; c < cfg.perturbed_pairs; ++c) {
            const std::int64_t k = pick(rng);
            const GroupPoint g0 = *order.at_position(k);
            ArrayPoint x2 = x;
            const std::size_t i = *x.index_of(g0);
            x2.set_at(1, i, !x.bit_at(1, i));
            auto u = std::make_shared<const SampleUniverse>("perturbed pair", std::vector<ArrayPoint>{x, x2});
            const Coder pair_coder = coder.with_universe(u);
            const CodedPoint y1 = pair_coder.encode(x, cfg.depth, cfg.fill);
            const CodedPoint y2 = pair_coder.encode(x2, cfg.depth, cfg.fill);
            const SeparationReport sr = verify_separation(pair_coder, x, x2, y1, y2);
            sep_ok = sep_ok && sr.ok;
            Json pj = separation_to_json(sr);
            if (!sr.witnesses.empty()) {
              const auto v = detect(y1.as_point(), y2.as_point(), order, sr.position0, sr.witnesses.back().position,
                                    cfg.detector);
              detect_ok = detect_ok && v.is<SeparatedBeyond>();
              pj["verdict"] = std::string(v.kind());
            }
            pairs.push_back(pj);
          }
          check("extension_coder", "separation_witnesses", sep_ok, {{"pairs", pairs}});
          check("asymptotic", "separated_beyond", detect_ok, {{"pairs", cfg.perturbed_pairs}});

          const std::int64_t horizon = std::min(cfg.horizon, N);
          if (N >= 3) {
            const ArrayPoint y = tail_pair(x, order, 0, *order.at_position(-3));
            const auto v = detect(x, y, order, 0, horizon, cfg.detector);
            Json vj = verdict_to_json(v);
            vj.erase("distance_exponents");
            check("asymptotic", "tail_pair_agreeing", v.is<AgreeingTail>() && std::get<AgreeingTail>(v.value).from == 0, vj);
          }

          if (N >= 1) {
            const TilingInstance moved = inst.shifted(*order.at_position(1));
            const FiniteSubset cells(order.kind(), order.positions());
            const ArrayPoint a = center_indicator(inst, 1, cells);
            const ArrayPoint b = center_indicator(moved, 1, cells);
            // Shifts g whose radius-1 ball lies in the window and reaches a
            // mismatched center: u g with a != b for some |u| <= 1.
            const FiniteSubset unit_ball = ball(order.kind(), 1);
            std::vector<GroupPoint> shifts;
            for (std::int64_t k = -N / 2; k <= N / 2; ++k) {
              const GroupPoint g = *order.at_position(k);
              bool inside = true, reaches = false;
              for (const auto& u : unit_ball) {
                const auto ua = a.get(1, u * g), ub = b.get(1, u * g);
                inside = inside && ua && ub;
                reaches = reaches || (ua && ub && *ua != *ub);
              }
              if (inside && reaches) shifts.push_back(g);
            }
            const Dyadic floor = shifts.empty() ? Dyadic::nil() : distality_floor(a, b, shifts);
            check("asymptotic", "distality_floor", !shifts.empty() && floor >= Dyadic::pow2(1),
                  {{"shifts", shifts.size()}, {"floor", floor.to_string()}});

            // Center-incongruent encodings are never asymptotic: either the
            // orders differ or the distance stays above 2^{-p_1} when cells
            // within one level-1 tile size of the anchor are examined.
            const int scale = static_cast<int>(*sys->base(1));
            const DetectorOptions wide{scale, scale};
            const std::int64_t phi_horizon = std::max<std::int64_t>(0, std::min(horizon, N - scale));
            const auto phi = phi_asymptotic_check(a, b, order, induced_order_full(moved, cfg.top_level), 0,
                                                  phi_horizon, wide);
            Json pj;
            bool separated = false;
            if (const auto* od = std::get_if<OrdersDiffer>(&phi)) {
              pj = {{"verdict", "OrdersDiffer"}, {"position", od->position}};
              separated = true;
            } else {
              const auto& v = std::get<AsymptoticVerdict>(phi);
              pj = {{"verdict", std::string(v.kind())}, {"horizon", phi_horizon}, {"exam_radius", scale}};
              separated = v.is<SeparatedBeyond>();
            }
            check("asymptotic", "incongruent_not_asymptotic", separated, pj);
          }
        }
      }
    }
  } catch (const Error& e) {
    rep.error = e.what();
    rep.exit_status = exit_code_for(e.code());
  }
  if (rep.error.empty()) {
    rep.exit_status = 0;
    for (const auto& c : rep.checks)
      if (!c.pass) rep.exit_status = 1;
  }

  if (out_dir) {
    fs::create_directories(*out_dir);
    for (const auto& [name, content] : files) {
      std::ofstream(fs::path(*out_dir) / name, std::ios::binary) << content;
      rep.artifacts[name] = {{"path", name}, {"sha256", sha256_hex(content)}};
    }
    std::ofstream(fs::path(*out_dir) / "report.json", std::ios::binary) << dump_canonical(report_to_json(rep));
  } else {
    for (const auto& [name, content] : files) rep.artifacts[name] = {{"path", name}, {"sha256", sha256_hex(content)}};
  }
  return rep;
}

}  // namespace asymp
