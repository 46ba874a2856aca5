// hypzero: command-line front end.
//
// Precedence for every setting: command-line flag, then the --config JSON file, then the built-in default.
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence, 4 missing file.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hypzero/curve.hpp"
#include "hypzero/errors.hpp"
#include "hypzero/experiments.hpp"
#include "hypzero/hyp_poly.hpp"
#include "hypzero/potential.hpp"
#include "hypzero/roots.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace hypzero;

namespace {

constexpr int kInvalidInput = 2;
constexpr int kNonConvergence = 3;
constexpr int kMissingFile = 4;

struct Seed {
  LevelPair pair{2, 1};
  bool ray = false;
  Point z, origin, direction;
};

struct RunConfig {
  std::string config_path;
  std::string schedule_path;
  std::string preset;
  std::vector<unsigned> ns;
  int precision = 512;
  bool no_refine = false;
  std::vector<double> box;
  double margin = 0.25;
  int resolution = 400;
  std::vector<std::string> seed_specs;
  std::vector<std::string> ray_specs;
  std::vector<Seed> seeds;
  double step = 5e-3;
  std::string out = "out";
  std::vector<std::string> experiments;
  std::string restrict = "none";
  std::vector<std::string> point_specs;
  std::vector<Point> points;
  std::vector<std::string> roots_files;
  std::vector<std::string> curve_files;
  std::string regions_file;
  int digits = 40;
  double epsilon = 0;
  std::size_t null_samples = 20000;
  std::uint64_t null_seed = 1;
  std::string svg = "figure.svg";
  std::string title;
};

std::string fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<double> numbers(const std::string& spec, std::size_t want, const char* what) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw invalid_input(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (v.size() != want) throw invalid_input(std::string(what) + " expects " + std::to_string(want) + " comma-separated numbers");
  return v;
}

LevelPair pair_from(double i, double j) {
  if (i < 1 || j < 1 || i != std::floor(i) || j != std::floor(j) || i == j)
    throw invalid_input("level pair must be two distinct 1-based branch indices");
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

Point point_from(const nlohmann::json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw invalid_input(std::string(what) + " must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

// Fills every field not given on the command line from the config file.
void merge_config(RunConfig& cfg, const CLI::App& app) {
  if (cfg.config_path.empty()) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(cfg.config_path));
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input("config: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw invalid_input("config: top level must be an object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "schedule" && !given("--schedule")) cfg.schedule_path = value.get<std::string>();
      else if (key == "preset" && !given("--preset")) cfg.preset = value.get<std::string>();
      else if (key == "n" && !given("--n"))
        cfg.ns = value.is_array() ? value.get<std::vector<unsigned>>() : std::vector<unsigned>{value.get<unsigned>()};
      else if (key == "precision" && !given("--precision")) cfg.precision = value.get<int>();
      else if (key == "no_refine" && !given("--no-refine")) cfg.no_refine = value.get<bool>();
      else if (key == "box" && !given("--box")) cfg.box = value.get<std::vector<double>>();
      else if (key == "margin" && !given("--margin")) cfg.margin = value.get<double>();
      else if (key == "resolution" && !given("--resolution")) cfg.resolution = value.get<int>();
      else if (key == "step" && !given("--step")) cfg.step = value.get<double>();
      else if (key == "out" && !given("--out")) cfg.out = value.get<std::string>();
      else if (key == "experiments" && !given("--experiment")) cfg.experiments = value.get<std::vector<std::string>>();
      else if (key == "restrict" && !given("--restrict")) cfg.restrict = value.is_number() ? std::to_string(value.get<double>()) : value.get<std::string>();
      else if (key == "roots" && !given("--roots")) cfg.roots_files = value.get<std::vector<std::string>>();
      else if (key == "curves" && !given("--curve")) cfg.curve_files = value.get<std::vector<std::string>>();
      else if (key == "regions" && !given("--regions")) cfg.regions_file = value.get<std::string>();
      else if (key == "digits" && !given("--digits")) cfg.digits = value.get<int>();
      else if (key == "epsilon" && !given("--epsilon")) cfg.epsilon = value.get<double>();
      else if (key == "null_samples" && !given("--null-samples")) cfg.null_samples = value.get<std::size_t>();
      else if (key == "null_seed" && !given("--null-seed")) cfg.null_seed = value.get<std::uint64_t>();
      else if (key == "svg" && !given("--svg")) cfg.svg = value.get<std::string>();
      else if (key == "title" && !given("--title")) cfg.title = value.get<std::string>();
      else if (key == "points" && !given("--point")) {
        for (const auto& p : value) cfg.points.push_back(point_from(p, "config points entry"));
      } else if (key == "seeds" && !given("--seed") && !given("--ray")) {
        for (const auto& s : value) {
          Seed seed;
          if (!s.contains("pair") || s["pair"].size() != 2) throw invalid_input("config seed needs \"pair\": [i, j]");
          seed.pair = pair_from(s["pair"][0].get<double>(), s["pair"][1].get<double>());
          if (s.contains("z")) {
            seed.z = point_from(s["z"], "seed z");
          } else if (s.contains("origin") && s.contains("direction")) {
            seed.ray = true;
            seed.origin = point_from(s["origin"], "seed origin");
            seed.direction = point_from(s["direction"], "seed direction");
          } else {
            throw invalid_input("config seed needs \"z\" or \"origin\" and \"direction\"");
          }
          cfg.seeds.push_back(seed);
        }
      } else if (key.rfind("_", 0) != 0 && key != "schedule" && key != "preset" && key != "n" && key != "precision" &&
                 key != "no_refine" && key != "box" && key != "margin" && key != "resolution" && key != "step" &&
                 key != "out" && key != "experiments" && key != "restrict" && key != "roots" && key != "curves" &&
                 key != "regions" && key != "digits" && key != "epsilon" && key != "null_samples" &&
                 key != "null_seed" && key != "svg" && key != "title" && key != "points" && key != "seeds") {
        throw invalid_input("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input("config: " + std::string(e.what()));
  }
}

void finish_config(RunConfig& cfg) {
  for (const auto& s : cfg.seed_specs) {
    const auto v = numbers(s, 4, "--seed");
    cfg.seeds.push_back({pair_from(v[0], v[1]), false, {v[2], v[3]}, {}, {}});
  }
  for (const auto& s : cfg.ray_specs) {
    const auto v = numbers(s, 6, "--ray");
    cfg.seeds.push_back({pair_from(v[0], v[1]), true, {}, {v[2], v[3]}, {v[4], v[5]}});
  }
  for (const auto& s : cfg.point_specs) {
    const auto v = numbers(s, 2, "--point");
    cfg.points.emplace_back(v[0], v[1]);
  }
  if (!cfg.box.empty() && (cfg.box.size() != 4 || !(cfg.box[0] < cfg.box[1]) || !(cfg.box[2] < cfg.box[3])))
    throw invalid_input("box must be xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax");
  if (cfg.precision < 64) throw invalid_input("precision must be at least 64 bits");
  if (cfg.resolution < 2) throw invalid_input("resolution must be at least 2");
  if (!(cfg.step > 0)) throw invalid_input("step must be positive");
  if (cfg.margin < 0) throw invalid_input("margin must be nonnegative");
}

std::vector<ComplexRational> complex_list(const std::string& text) {
  std::vector<ComplexRational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ComplexRational::parse(item));
  if (out.empty()) throw invalid_input("preset needs at least one parameter");
  return out;
}

class Run {
 public:
  Run(std::string command, RunConfig cfg) : command_(std::move(command)), cfg_(std::move(cfg)) {
    if (!cfg_.config_path.empty()) note_input(cfg_.config_path, read_file(cfg_.config_path));
  }

  const RunConfig& cfg() const { return cfg_; }

  bool has_schedule() const { return !cfg_.schedule_path.empty() || !cfg_.preset.empty(); }

  const ParameterSchedule& schedule() {
    if (schedule_) return *schedule_;
    if (!cfg_.schedule_path.empty() && !cfg_.preset.empty()) throw invalid_input("give either --schedule or --preset, not both");
    if (!cfg_.schedule_path.empty()) {
      const std::string text = read_file(cfg_.schedule_path);
      note_input(cfg_.schedule_path, text);
      schedule_ = ParameterSchedule::parse(text);
    } else if (cfg_.preset.rfind("lemniscate:", 0) == 0) {
      schedule_ = ParameterSchedule::lemniscate_family(ComplexRational::parse(cfg_.preset.substr(11)));
    } else if (cfg_.preset.rfind("shifted:", 0) == 0) {
      schedule_ = ParameterSchedule::shifted_family(complex_list(cfg_.preset.substr(8)));
    } else if (cfg_.preset.empty()) {
      throw invalid_input("no schedule: pass --schedule FILE or --preset lemniscate:K | shifted:A2,A3,...");
    } else {
      throw invalid_input("unknown preset '" + cfg_.preset + "'");
    }
    schedule_->validate();
    return *schedule_;
  }

  std::string input(const std::string& path) {
    std::string text = read_file(path);
    note_input(path, text);
    return text;
  }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(cfg_.out);
    std::ofstream(fs::path(cfg_.out) / name, std::ios::binary) << content;
    outputs_[name] = content;
  }

  void note(const std::string& key, ordered_json value) { extra_[key] = std::move(value); }

  void write_manifest() {
    ordered_json doc;
    doc["command"] = command_;
    ordered_json eff;
    eff["schedule"] = cfg_.schedule_path;
    eff["preset"] = cfg_.preset;
    eff["n"] = cfg_.ns;
    eff["precision"] = cfg_.precision;
    eff["no_refine"] = cfg_.no_refine;
    eff["box"] = cfg_.box;
    eff["margin"] = cfg_.margin;
    eff["resolution"] = cfg_.resolution;
    eff["step"] = cfg_.step;
    ordered_json seeds = ordered_json::array();
    for (const auto& s : cfg_.seeds) {
      ordered_json j;
      j["pair"] = {s.pair.first, s.pair.second};
      if (s.ray) {
        j["origin"] = {s.origin.real(), s.origin.imag()};
        j["direction"] = {s.direction.real(), s.direction.imag()};
      } else {
        j["z"] = {s.z.real(), s.z.imag()};
      }
      seeds.push_back(j);
    }
    eff["seeds"] = seeds;
    eff["out"] = cfg_.out;
    eff["experiments"] = cfg_.experiments;
    eff["restrict"] = cfg_.restrict;
    ordered_json pts = ordered_json::array();
    for (const auto& p : cfg_.points) pts.push_back({p.real(), p.imag()});
    eff["points"] = pts;
    eff["roots"] = cfg_.roots_files;
    eff["curves"] = cfg_.curve_files;
    eff["regions"] = cfg_.regions_file;
    eff["digits"] = cfg_.digits;
    eff["epsilon"] = cfg_.epsilon;
    eff["null_samples"] = cfg_.null_samples;
    eff["null_seed"] = cfg_.null_seed;
    eff["svg"] = cfg_.svg;
    eff["title"] = cfg_.title;
    doc["effective"] = eff;
    if (schedule_) {
      doc["schedule_hash"] = schedule_->hash();
      doc["schedule_text"] = schedule_->serialize();
    }
    ordered_json inputs = ordered_json::array();
    std::string combined = eff.dump();
    for (const auto& [path, hash] : inputs_) {
      inputs.push_back({{"path", path}, {"fnv1a", hash}});
      combined += path + ":" + hash + "\n";
    }
    if (schedule_) combined += schedule_->serialize();
    doc["inputs"] = inputs;
    doc["content_hash"] = fnv1a(combined);
    ordered_json outs = ordered_json::array();
    for (const auto& [name, content] : outputs_)
      outs.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a", fnv1a(content)}});
    doc["outputs"] = outs;
    for (const auto& [k, v] : extra_.items()) doc[k] = v;
    fs::create_directories(cfg_.out);
    std::ofstream(fs::path(cfg_.out) / "manifest.json", std::ios::binary) << doc.dump(2) << '\n';
  }

 private:
  void note_input(const std::string& path, const std::string& text) {
    for (const auto& [p, h] : inputs_)
      if (p == path) return;
    inputs_.emplace_back(path, fnv1a(text));
  }

  std::string command_;
  RunConfig cfg_;
  std::optional<ParameterSchedule> schedule_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::map<std::string, std::string> outputs_;
  ordered_json extra_ = ordered_json::object();
};

std::vector<unsigned> require_ns(const RunConfig& cfg) {
  if (cfg.ns.empty()) throw invalid_input("no degree given: pass --n N[,N...]");
  return cfg.ns;
}

RootOptions root_options(const RunConfig& cfg) {
  RootOptions o;
  o.precision_bits = cfg.precision;
  o.auto_refine = !cfg.no_refine;
  return o;
}

void cmd_poly(Run& run) {
  const auto& s = run.schedule();
  for (unsigned n : require_ns(run.cfg())) run.write("poly_n" + std::to_string(n) + ".txt", export_polynomial(build_polynomial(s, n)));
}

void cmd_roots(Run& run) {
  const auto& s = run.schedule();
  ordered_json bits = ordered_json::object();
  for (unsigned n : require_ns(run.cfg())) {
    const auto m = find_roots(build_polynomial(s, n), root_options(run.cfg()));
    bits[std::to_string(n)] = m.precision_bits;
    run.write("roots_n" + std::to_string(n) + ".txt", export_roots(m, s.hash()));
  }
  run.note("precision_bits_used", bits);
}

std::string poly_text(const ExactPoly& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k)
    out += std::to_string(k) + " " + rational_to_string(p[k].re()) + " " + rational_to_string(p[k].im()) + "\n";
  return out;
}

void cmd_curve(Run& run) {
  const auto& s = run.schedule();
  const auto curve = build_curve(s);
  run.write("curve_terms.txt", curve.export_terms());
  const auto bp = branch_points(curve, s, std::max(256, run.cfg().precision));
  run.write("discriminant.txt", poly_text(bp.discriminant));
  run.write("branch_points.txt", export_branch_points(bp, run.cfg().digits));
  ordered_json info;
  info["degenerate"] = bp.degenerate;
  info["branch_point_count"] = bp.points.size();
  if (bp.degenerate) {
    info["cross_check_distance"] = bp.cross_check_distance;
    const auto rep = verify_prop3(s);
    ordered_json branches = ordered_json::array();
    for (const auto& b : rep.branches) branches.push_back({{"branch", b.label}, {"vanishes", poly::is_zero(b.residual)}});
    info["rational_branches"] = branches;
  }
  if (!bp.diagnostic.empty()) info["diagnostic"] = bp.diagnostic;
  run.note("curve", info);
}

TraceOptions trace_options(const RunConfig& cfg) {
  TraceOptions o;
  o.step = cfg.step;
  if (!cfg.box.empty()) o.box = Box{cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]};
  return o;
}

void cmd_levels(Run& run) {
  const auto sys = make_harmonic_system(run.schedule());
  const auto opts = trace_options(run.cfg());
  std::vector<LevelCurve> curves;
  if (run.cfg().seeds.empty()) {
    for (std::size_t j = 2; j <= sys.branch_count(); ++j)
      for (const Point& c : level_critical_points(sys, {j, 1}))
        for (auto& lc : trace_from_critical_point(sys, {j, 1}, c, opts)) {
          if (lc.points.size() < 2) continue;
          const Point probe = lc.points[std::min<std::size_t>(5, lc.points.size() - 1)];
          bool seen = false;
          for (const auto& kept : curves)
            seen = seen || (kept.pair == lc.pair && polyline_distance(probe, kept.points) < 2 * opts.step);
          if (!seen) curves.push_back(std::move(lc));
        }
  } else {
    for (const auto& seed : run.cfg().seeds) {
      const Point z = seed.ray ? seed_on_ray(sys, seed.pair, seed.origin, seed.direction) : seed.z;
      curves.push_back(trace_level_curve(sys, seed.pair, z, opts));
    }
  }
  ordered_json index = ordered_json::array();
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const std::string name =
        "level_" + std::to_string(c.pair.first) + "_" + std::to_string(c.pair.second) + "_" + std::to_string(k) + ".csv";
    run.write(name, export_level_curve(c));
    index.push_back({{"file", name},
                     {"points", c.points.size()},
                     {"closed", c.closed},
                     {"max_residual", c.max_residual()},
                     {"stop_reasons", c.stop_reasons}});
  }
  run.note("curves", index);
}

Box config_box(const RunConfig& cfg) { return Box{cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3]}; }

std::vector<Point> default_region_points(const HarmonicSystem& sys) {
  std::vector<Point> pts{0.0, 1.0};
  for (const auto& p : sys.branch_points) pts.push_back(p);
  return pts;
}

struct LoadedRoots {
  std::string path;
  RootFile file;
};

std::vector<LoadedRoots> load_roots(Run& run);

std::vector<Point> all_roots(Run& run) {
  std::vector<Point> pts;
  for (const auto& r : load_roots(run)) {
    const auto z = r.file.measure.as_complex();
    pts.insert(pts.end(), z.begin(), z.end());
  }
  return pts;
}

void cmd_regions(Run& run) {
  const auto sys = make_harmonic_system(run.schedule());
  Box box;
  if (!run.cfg().box.empty()) {
    box = config_box(run.cfg());
  } else {
    auto pts = all_roots(run);
    if (pts.empty()) pts = default_region_points(sys);
    box = cloud_box(pts, pts.size() > 4 ? run.cfg().margin : 0.75);
  }
  const auto grid = classify_regions(sys, box, run.cfg().resolution);
  run.write("regions.txt", export_region_raster(grid));
  run.write("singular_set.csv", export_boundary(grid));
  run.note("grid", {{"box", {box.xmin, box.xmax, box.ymin, box.ymax}},
                    {"resolution", grid.resolution},
                    {"labels", grid.distinct_labels()}});
}

std::vector<LoadedRoots> load_roots(Run& run) {
  std::vector<LoadedRoots> out;
  for (const auto& f : run.cfg().roots_files) {
    const std::string text = run.input(f);
    // a blank file stands for an empty zero set
    LoadedRoots r;
    r.path = f;
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) r.file = import_roots(text);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LoadedRoots& a, const LoadedRoots& b) { return a.file.measure.size() < b.file.measure.size(); });
  return out;
}

Restriction restriction_for(Run& run) {
  const std::string& r = run.cfg().restrict;
  if (r == "none") return Restriction::none();
  if (r == "auto") {
    const auto& s = run.schedule();
    if (s.numerator_count() != 2 || !s.is_degenerate())
      throw invalid_input("--restrict auto needs a degenerate two-branch schedule");
    const double eta = s.alphas[1].re().get_d();
    if (eta == -1.0) throw invalid_input("--restrict auto is undefined for Re alpha_2 = -1");
    return Restriction::right_of(eta / (eta + 1));
  }
  try {
    std::size_t used = 0;
    const double x = std::stod(r, &used);
    if (used != r.size()) throw std::invalid_argument(r);
    return Restriction::right_of(x);
  } catch (const std::exception&) {
    throw invalid_input("--restrict must be none, auto or a number");
  }
}

ordered_json parsed(const std::string& text) { return ordered_json::parse(text); }

void cmd_verify(Run& run) {
  const auto& cfg = run.cfg();
  if (cfg.roots_files.empty()) throw invalid_input("verify needs at least one --roots file");
  const auto roots = load_roots(run);
  std::vector<std::vector<Point>> curves;
  for (const auto& f : cfg.curve_files) curves.push_back(import_level_curve(run.input(f)).points);

  const bool two_branch = run.has_schedule() && run.schedule().numerator_count() == 2 && run.schedule().is_degenerate();
  std::vector<std::string> wanted = cfg.experiments;
  if (wanted.empty()) {
    if (!curves.empty()) wanted.push_back("distance");
    if (!curves.empty() && two_branch) wanted.push_back("convergence");
    if (run.has_schedule()) wanted.push_back("conjecture2");
  }
  if (wanted.empty()) throw invalid_input("verify: nothing to do; give --curve and/or a schedule");
  for (const auto& e : wanted) {
    if (e != "distance" && e != "convergence" && e != "conjecture2")
      throw invalid_input("unknown experiment '" + e + "' (distance, convergence, conjecture2)");
  }

  auto provenance = [&](const LoadedRoots& r) {
    ordered_json p;
    p["roots_file"] = r.path;
    p["schedule_hash"] = r.file.schedule_hash;
    p["n"] = r.file.measure.size();
    p["precision_bits"] = r.file.measure.precision_bits;
    return p;
  };

  if (std::find(wanted.begin(), wanted.end(), "distance") != wanted.end()) {
    if (curves.empty()) throw invalid_input("distance needs at least one --curve file");
    const Restriction restriction = restriction_for(run);
    for (const auto& r : roots) {
      const auto pts = r.file.measure.as_complex();
      auto doc = provenance(r);
      doc["curves"] = cfg.curve_files;
      doc["report"] = parsed(zero_curve_distance(pts, curves, restriction).to_json());
      const std::string base = "distance_n" + std::to_string(r.file.measure.size());
      run.write(base + ".json", doc.dump(2) + "\n");
      if (cfg.restrict != "none") {
        doc["report"] = parsed(zero_curve_distance(pts, curves).to_json());
        run.write(base + "_unrestricted.json", doc.dump(2) + "\n");
      }
    }
  }

  if (std::find(wanted.begin(), wanted.end(), "convergence") != wanted.end()) {
    if (curves.empty()) throw invalid_input("convergence needs a --curve file to decide inside and outside");
    std::vector<Point> test_points = cfg.points;
    if (test_points.empty()) test_points = {{2.0, 0.0}, {1.1, 0.0}};
    std::vector<std::pair<Point, Side>> tp;
    for (const auto& z : test_points) tp.emplace_back(z, side_of(z, curves.front()));
    std::vector<RootCountingMeasure> measures;
    for (const auto& r : roots) measures.push_back(r.file.measure);
    auto doc = parsed(cauchy_convergence(run.schedule(), measures, tp).to_json());
    doc["roots_files"] = cfg.roots_files;
    doc["side_curve"] = cfg.curve_files.front();
    run.write("convergence.json", doc.dump(2) + "\n");
  }

  if (std::find(wanted.begin(), wanted.end(), "conjecture2") != wanted.end()) {
    const auto& largest = roots.back();
    const auto pts = largest.file.measure.as_complex();
    if (pts.empty()) throw invalid_input("conjecture2 needs a nonempty root file");
    const Box box = cfg.box.empty() ? cloud_box(pts, cfg.margin) : config_box(cfg);
    const auto grid = classify_regions(make_harmonic_system(run.schedule()), box, cfg.resolution);
    const auto score = conjecture2_score(pts, grid, cfg.epsilon);
    const auto null = uniform_null_score(grid, score.epsilon, cfg.null_samples, cfg.null_seed);
    auto doc = provenance(largest);
    doc["grid"] = {{"box", {box.xmin, box.xmax, box.ymin, box.ymax}}, {"resolution", cfg.resolution}};
    doc["score"] = parsed(score.to_json());
    doc["null"] = {{"samples", null.samples}, {"seed", cfg.null_seed}, {"fraction", null.fraction}, {"sigma", null.sigma}};
    doc["ratio_to_null"] = null.fraction > 0 ? score.near_k / null.fraction : 0.0;
    run.write("conjecture2.json", doc.dump(2) + "\n");
  }
  run.note("experiments", wanted);
}

// ---- SVG ----

const char* kRegionFill[] = {"#ffffff", "#f2e6c9", "#c9def2", "#d4f2c9", "#f2c9e3", "#e0d4f2", "#c9f2ee", "#f2d4c9"};
const char* kRootFill[] = {"#c0392b", "#2c3e50", "#8e44ad", "#16a085"};

class Canvas {
 public:
  Canvas(double xmin, double xmax, double ymin, double ymax) : xmin_(xmin), ymax_(ymax) {
    scale_ = 760.0 / std::max(xmax - xmin, ymax - ymin);
    width_ = (xmax - xmin) * scale_ + 40;
    height_ = (ymax - ymin) * scale_ + 40;
  }

  double px(double x) const { return 20 + (x - xmin_) * scale_; }
  double py(double y) const { return 20 + (ymax_ - y) * scale_; }
  double scale() const { return scale_; }
  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double xmin_, ymax_, scale_, width_, height_;
};

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

void cmd_plot(Run& run) {
  const auto& cfg = run.cfg();
  std::vector<std::vector<Point>> root_sets;
  for (const auto& r : load_roots(run)) root_sets.push_back(r.file.measure.as_complex());
  std::vector<LevelCurve> curves;
  for (const auto& f : cfg.curve_files) curves.push_back(import_level_curve(run.input(f)));
  std::optional<RegionGrid> grid;
  if (!cfg.regions_file.empty()) grid = import_region_raster(run.input(cfg.regions_file));
  std::vector<Point> branch;
  if (run.has_schedule()) {
    const auto& s = run.schedule();
    for (const auto& p : branch_points(build_curve(s), s).points) branch.push_back(p.to_complex());
  }

  Box box;
  if (!cfg.box.empty()) {
    box = config_box(cfg);
  } else if (grid) {
    box = grid->box;
  } else {
    // frame the zeros when there are any, otherwise the curves
    std::vector<Point> all{0.0, 1.0};
    for (const auto& rs : root_sets) all.insert(all.end(), rs.begin(), rs.end());
    if (all.size() == 2)
      for (const auto& c : curves) all.insert(all.end(), c.points.begin(), c.points.end());
    all.insert(all.end(), branch.begin(), branch.end());
    box = cloud_box(all, 0.15);
  }
  const Canvas cv(box.xmin, box.xmax, box.ymin, box.ymax);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(cv.width()) << "\" height=\"" << f2(cv.height())
      << "\" viewBox=\"0 0 " << f2(cv.width()) << ' ' << f2(cv.height()) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << f2(cv.width()) << "\" height=\"" << f2(cv.height()) << "\" fill=\"#ffffff\"/>\n";
  svg << "<defs><clipPath id=\"frame\"><rect x=\"20\" y=\"20\" width=\"" << f2(cv.width() - 40) << "\" height=\""
      << f2(cv.height() - 40) << "\"/></clipPath></defs>\n";
  svg << "<g clip-path=\"url(#frame)\">\n";

  if (grid) {
    svg << "<g id=\"regions\" stroke=\"none\" shape-rendering=\"crispEdges\">\n";
    const double cw = (grid->box.xmax - grid->box.xmin) / grid->resolution;
    const double ch = (grid->box.ymax - grid->box.ymin) / grid->resolution;
    for (int r = 0; r < grid->resolution; ++r) {
      int c = 0;
      while (c < grid->resolution) {
        const int l = grid->label(r, c);
        int end = c + 1;
        while (end < grid->resolution && grid->label(r, end) == l) ++end;
        if (l > 0) {
          const double x0 = cv.px(grid->box.xmin + c * cw), x1 = cv.px(grid->box.xmin + end * cw);
          const double y1 = cv.py(grid->box.ymin + r * ch), y0 = cv.py(grid->box.ymin + (r + 1) * ch);
          svg << "<rect x=\"" << f2(x0) << "\" y=\"" << f2(y0) << "\" width=\"" << f2(x1 - x0 + 0.3) << "\" height=\""
              << f2(y1 - y0 + 0.3) << "\" fill=\"" << kRegionFill[l % 8] << "\"/>\n";
        }
        c = end;
      }
    }
    svg << "</g>\n";
  }

  svg << "<g id=\"axes\" stroke=\"#999999\" stroke-width=\"0.8\">\n";
  if (box.ymin < 0 && box.ymax > 0)
    svg << "<line x1=\"" << f2(cv.px(box.xmin)) << "\" y1=\"" << f2(cv.py(0)) << "\" x2=\"" << f2(cv.px(box.xmax))
        << "\" y2=\"" << f2(cv.py(0)) << "\"/>\n";
  if (box.xmin < 0 && box.xmax > 0)
    svg << "<line x1=\"" << f2(cv.px(0)) << "\" y1=\"" << f2(cv.py(box.ymin)) << "\" x2=\"" << f2(cv.px(0))
        << "\" y2=\"" << f2(cv.py(box.ymax)) << "\"/>\n";
  svg << "</g>\n";

  svg << "<g id=\"level-curves\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.4\">\n";
  for (const auto& c : curves) {
    svg << "<polyline points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k)
      svg << (k ? " " : "") << f2(cv.px(c.points[k].real())) << ',' << f2(cv.py(c.points[k].imag()));
    svg << "\"/>\n";
  }
  svg << "</g>\n";

  for (std::size_t s = 0; s < root_sets.size(); ++s) {
    svg << "<g id=\"zeros-" << s << "\" fill=\"" << kRootFill[s % 4] << "\">\n";
    for (const auto& z : root_sets[s])
      if (box.contains(z)) svg << "<circle cx=\"" << f2(cv.px(z.real())) << "\" cy=\"" << f2(cv.py(z.imag())) << "\" r=\"2.2\"/>\n";
    svg << "</g>\n";
  }

  svg << "<g id=\"branch-points\" fill=\"#ff8c00\" stroke=\"#000000\" stroke-width=\"1.2\">\n";
  for (const auto& p : branch)
    if (box.contains(p))
      svg << "<path d=\"M " << f2(cv.px(p.real())) << ' ' << f2(cv.py(p.imag()) - 7) << " l 7 7 l -7 7 l -7 -7 z\"/>\n";
  svg << "</g>\n";

  svg << "</g>\n";
  svg << "<rect x=\"20\" y=\"20\" width=\"" << f2(cv.width() - 40) << "\" height=\"" << f2(cv.height() - 40)
      << "\" fill=\"none\" stroke=\"#666666\" stroke-width=\"0.8\"/>\n";
  svg << "<g id=\"singular-points\" fill=\"#000000\">\n";
  for (double x : {0.0, 1.0})
    if (box.contains(x))
      svg << "<rect x=\"" << f2(cv.px(x) - 4) << "\" y=\"" << f2(cv.py(0) - 4) << "\" width=\"8\" height=\"8\"/>\n";
  svg << "</g>\n";

  std::string title = cfg.title;
  if (title.empty() && run.has_schedule()) title = "schedule " + run.schedule().hash();
  if (!title.empty())
    svg << "<text x=\"24\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  svg << "<text x=\"24\" y=\"" << f2(cv.height() - 5) << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">"
      << "[" << box.xmin << ", " << box.xmax << "] x [" << box.ymin << ", " << box.ymax << "]</text>\n";
  svg << "</svg>\n";
  run.write(cfg.svg, svg.str());
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::Reroute:
      return kNonConvergence;
    case ErrorKind::MissingFile:
      return kMissingFile;
    default:
      return kInvalidInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros of hypergeometric polynomials with linear parameter schedules"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;

  app.add_option("--config", cfg.config_path, "JSON file with default values; flags override it");
  app.add_option("--schedule", cfg.schedule_path, "schedule JSON file");
  app.add_option("--preset", cfg.preset, "lemniscate:K or shifted:A2,A3,... instead of a schedule file");
  app.add_option("--n", cfg.ns, "degree or comma-separated degrees")->delimiter(',');
  app.add_option("--precision", cfg.precision, "working precision in bits");
  app.add_flag("--no-refine", cfg.no_refine, "fail instead of doubling the precision");
  app.add_option("--box", cfg.box, "xmin,xmax,ymin,ymax")->delimiter(',');
  app.add_option("--margin", cfg.margin, "relative margin of boxes fitted to a root cloud");
  app.add_option("--resolution", cfg.resolution, "region grid cells per side");
  app.add_option("--seed", cfg.seed_specs, "level seed i,j,x,y (repeatable)");
  app.add_option("--ray", cfg.ray_specs, "level seed on a ray i,j,ox,oy,dx,dy (repeatable)");
  app.add_option("--step", cfg.step, "level tracer step");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--experiment", cfg.experiments, "distance, convergence or conjecture2 (repeatable)");
  app.add_option("--restrict", cfg.restrict, "root restriction for distances: none, auto or X for Re z > X");
  app.add_option("--point", cfg.point_specs, "convergence test point x,y (repeatable)");
  app.add_option("--roots", cfg.roots_files, "root file (repeatable)");
  app.add_option("--curve", cfg.curve_files, "level curve file (repeatable)");
  app.add_option("--regions", cfg.regions_file, "region raster file");
  app.add_option("--digits", cfg.digits, "decimal digits in branch point output");
  app.add_option("--epsilon", cfg.epsilon, "distance to K counted as near; 0 means three cell diagonals");
  app.add_option("--null-samples", cfg.null_samples, "uniform null model sample count");
  app.add_option("--null-seed", cfg.null_seed, "uniform null model seed");
  app.add_option("--svg", cfg.svg, "figure file name");
  app.add_option("--title", cfg.title, "figure title");

  const std::vector<std::pair<std::string, void (*)(Run&)>> commands = {
      {"poly", cmd_poly},       {"roots", cmd_roots},     {"curve", cmd_curve}, {"levels", cmd_levels},
      {"regions", cmd_regions}, {"verify", cmd_verify}, {"plot", cmd_plot}};
  const std::map<std::string, std::string> help = {
      {"poly", "exact coefficients, poly_n<N>.txt"},
      {"roots", "certified zeros, roots_n<N>.txt"},
      {"curve", "curve terms, discriminant and branch points"},
      {"levels", "traced level curves, level_<i>_<j>_<k>.csv"},
      {"regions", "region raster and singular set"},
      {"verify", "distance, convergence and clustering reports"},
      {"plot", "SVG figure from root, curve and raster files"}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInvalidInput;
  }

  try {
    merge_config(cfg, app);
    finish_config(cfg);
    for (const auto& [name, fn] : commands) {
      if (!app.got_subcommand(name)) continue;
      Run run(name, cfg);
      fn(run);
      run.write_manifest();
    }
  } catch (const Error& e) {
    std::cerr << "hypzero: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "hypzero: " << e.what() << '\n';
    return kInvalidInput;
  }
  return 0;
}
