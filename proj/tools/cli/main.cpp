// cutloci command-line interface: cut-locus sampling, distance queries, flows,
// verification suites and exploratory runs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "cutloci/cutengine.hpp"
#include "cutloci/equivariant.hpp"
#include "cutloci/error.hpp"
#include "cutloci/groupgeo.hpp"
#include "cutloci/serialize.hpp"
#include "cutloci_checks/suites.hpp"

namespace {

using namespace cutloci;

constexpr int kExitCheckFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidPoint:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NonFinite:
      return kExitParse;
    case ErrorCode::UnsupportedAmbient:
    case ErrorCode::UnsupportedDistance:
    case ErrorCode::UnsupportedGeodesic:
    case ErrorCode::UnsupportedRegime:
    case ErrorCode::ActionMismatch:
    case ErrorCode::NotInvariant:
      return kExitUnsupported;
    case ErrorCode::IoError:
      return kExitIo;
    default:
      return kExitCheckFailed;
  }
}

void print_error(const std::string& code, const std::string& message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  std::cerr << dump_json(j, -1) << '\n';
}

/// Writes to a temporary sibling and renames it into place.
void write_atomically(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move output into " + path);
  }
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    write_atomically(path, contents);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, origin + ": " + e.what());
  }
}

/// A point from an inline comma list or a JSON file holding an array, a
/// matrix object, or {"point": ...}.
ManifoldPoint read_point(const ManifoldId& m, const std::string& inline_coords, const std::string& file) {
  if (!inline_coords.empty() == !file.empty()) {
    throw Error(ErrorCode::ParseError, "give exactly one of --point and --input");
  }
  Vec coords;
  if (!inline_coords.empty()) {
    coords = vec_from_json(parse_json_text("[" + inline_coords + "]", "--point"));
  } else {
    Json j = parse_json_text(read_file(file), file);
    if (j.is_object() && j.contains("point")) j = j.at("point");
    try {
      if (j.is_array()) {
        coords = vec_from_json(j);
      } else if (m.kind == ManifoldKind::upq) {
        coords = ManifoldPoint::from_complex_matrix(m, complex_matrix_from_json(j)).coords;
      } else {
        coords = ManifoldPoint::from_matrix(m, real_matrix_from_json(j)).coords;
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, file + ": " + e.what());
    }
  }
  if (coords.size() != m.coord_size()) {
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(m.coord_size()) + " coordinates for " +
                                           m.to_string() + ", got " + std::to_string(coords.size()));
  }
  ManifoldPoint p{m, coords};
  validate_point(p);
  return p;
}

std::vector<double> parse_times(const std::string& text) {
  const Vec v = vec_from_json(parse_json_text("[" + text + "]", "--times"));
  return std::vector<double>(v.data(), v.data() + v.size());
}

struct Common {
  std::string manifold;
  std::string submanifold;
  std::uint64_t seed = 42;
  std::string output;
};

int cmd_sample(const Common& c, int feet, int dirs, double t_max, const std::string& format) {
  const ManifoldId m = ManifoldId::parse(c.manifold);
  const Submanifold sub = Submanifold::parse(m, c.submanifold);
  SampleConfig config;
  config.feet = feet;
  config.dirs_per_foot = dirs;
  config.seed = c.seed;
  if (!std::isnan(t_max)) config.cut.t_max = t_max;
  const CutCloud cloud = sample_cut_locus(sub, config);
  if (format == "csv") {
    emit(c.output, cut_cloud_to_csv(sub, c.seed, cloud));
  } else {
    emit(c.output, dump_json(cut_cloud_to_json(sub, c.seed, cloud)));
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t separating = 0;
  for (const CutSample& s : cloud.samples) {
    lo = std::min(lo, s.rho);
    hi = std::max(hi, s.rho);
    if (s.classification == CutClass::separating) ++separating;
  }
  if (!c.output.empty() && c.output != "-") {
    std::printf("samples %zu, unresolved %zu", cloud.samples.size(), cloud.unresolved.size());
    if (!cloud.samples.empty()) {
      std::printf(", rho in [%.17g, %.17g], separating fraction %.6f", lo, hi,
                  static_cast<double>(separating) / static_cast<double>(cloud.samples.size()));
    }
    std::printf("\n");
  }
  return 0;
}

int cmd_dist(const Common& c, const std::string& point, const std::string& input) {
  const ManifoldId m = ManifoldId::parse(c.manifold);
  const Submanifold sub = Submanifold::parse(m, c.submanifold);
  OracleOptions options;
  options.seed = c.seed;
  const MinimizerSet ms = dist_to(sub, read_point(m, point, input), options);
  Json j = minimizer_set_to_json(ms);
  j["distance_squared"] = ms.distance * ms.distance;
  emit(c.output, dump_json(j));
  return 0;
}

int cmd_flow(const Common& c, const std::string& kind, const std::string& point, const std::string& input,
             const std::string& times_text) {
  const ManifoldId m = ManifoldId::parse(c.manifold);
  const ManifoldPoint q = read_point(m, point, input);
  const std::vector<double> times = parse_times(times_text);
  Json states = Json::array();
  if (kind == "morse-bott") {
    const Submanifold sub = Submanifold::parse(m, c.submanifold);
    for (double t : times) {
      const FlowState s = morse_bott_flow(sub, q, t);
      Json e;
      e["time"] = s.time;
      e["position"] = vec_to_json(s.position.coords);
      e["distance_to_N"] = s.distance_to_N;
      states.push_back(std::move(e));
    }
  } else if (kind == "orthogonal" || kind == "geodesic-so") {
    if (!m.is_matrix_kind() || m.kind == ManifoldKind::upq) {
      throw Error(ErrorCode::UnsupportedAmbient, kind + " flows act on real matrices, not " + m.to_string());
    }
    const Mat a = q.matrix();
    const Submanifold target = kind == "orthogonal" ? Submanifold(ManifoldId::matrix_space(m.n), OrthogonalGroup{})
                                                    : Submanifold(ManifoldId::glplus(m.n), SpecialOrthogonal{});
    for (double t : times) {
      const Mat g = kind == "orthogonal" ? groupgeo::flow_to_orthogonal(a, t) : groupgeo::geodesic_to_SO(a, t);
      Json e;
      e["time"] = t;
      e["position"] = matrix_to_json(g);
      e["distance_to_N"] = dist_to(target, ManifoldPoint::from_matrix(target.ambient, g)).distance;
      states.push_back(std::move(e));
    }
  } else {
    throw Error(ErrorCode::ParseError, "unknown flow kind '" + kind + "' (morse-bott, orthogonal, geodesic-so)");
  }
  Json j;
  j["kind"] = kind;
  j["manifold"] = m.to_string();
  if (kind == "morse-bott") j["submanifold"] = c.submanifold;
  j["states"] = std::move(states);
  emit(c.output, dump_json(j));
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& params_text, const std::string& output) {
  const checks::Params params = checks::parse_params(params_text);
  const std::vector<Check> results = checks::run_suite(suite, params);
  Json j;
  j["suite"] = suite;
  j["checks"] = checks_to_json(results);
  j["pass"] = all_pass(results);
  emit(output, dump_json(j));
  return all_pass(results) ? 0 : kExitCheckFailed;
}

int cmd_explore(const Common& c, const std::string& action_text, const std::string& fermat_text, int samples,
                int grid) {
  Json j;
  j["mode"] = "equivariance";
  if (!fermat_text.empty()) {
    const checks::Params params = checks::parse_params(fermat_text);
    const auto get = [&](const char* key) {
      const auto it = params.find(key);
      if (it == params.end()) throw Error(ErrorCode::ParseError, std::string("--fermat needs ") + key);
      try {
        return std::stoi(it->second);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, std::string("bad integer for ") + key);
      }
    };
    const int n = get("n"), d = get("d");
    const FermatReport report = fermat_verify(d, n, grid, c.seed);
    j["n"] = n;
    j["d"] = d;
    j["mode"] = report.mode;
    if (report.mode == "exploratory") {
      j["note"] = "evidence only; no pass/fail verdict";
      j["cut_samples"] = report.exploration.samples;
      j["separating_points"] = report.exploration.separating_points.size();
      j["mean_distance_to_conjectured_set"] = report.exploration.mean_distance;
      j["max_distance_to_conjectured_set"] = report.exploration.max_distance;
      Json cloud = Json::array();
      for (const Vec& p : report.exploration.separating_points) cloud.push_back(vec_to_json(p));
      j["cloud"] = std::move(cloud);
    } else {
      j["checks"] = checks_to_json(report.checks);
    }
  } else {
    const ManifoldId m = ManifoldId::parse(c.manifold);
    const Submanifold sub = Submanifold::parse(m, c.submanifold);
    const GroupAction action =
        action_text.empty() ? GroupAction::trivial(m) : GroupAction::parse(m, action_text);
    const EquivarianceReport r = equivariance_check(sub, action, samples, c.seed);
    j["manifold"] = m.to_string();
    j["submanifold"] = sub.to_string();
    j["action"] = action.name;
    j["samples"] = r.samples;
    j["unresolved"] = r.unresolved;
    j["invariance_defect"] = r.invariance_defect;
    j["up_to_down"] = r.up_to_down;
    j["down_to_up"] = r.down_to_up;
    j["rho_gap"] = r.rho_gap;
    j["min_rho_down"] = r.min_rho_down;
    j["max_rho_down"] = r.max_rho_down;
  }
  emit(c.output, dump_json(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cutloci: cut loci, distance functions and flows for submanifolds of model spaces"};
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&](CLI::App* sub, bool needs_submanifold) {
    sub->add_option("--manifold", common.manifold, "Ambient manifold, e.g. sphere:3")->required();
    auto* opt = sub->add_option("--submanifold", common.submanifold, "Submanifold descriptor, e.g. equator:1");
    if (needs_submanifold) opt->required();
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--output", common.output, "Output path ('-' or empty for standard output)");
  };

  int feet = 16, dirs = 16, samples = 2000, grid = 8;
  double t_max = std::numeric_limits<double>::quiet_NaN();
  std::string format = "json", point, input, kind = "morse-bott", times = "0,0.5,1,2", suite, params, action,
              fermat_text;

  auto* sample = app.add_subcommand("sample", "Sample the cut locus of a submanifold");
  add_common(sample, true);
  sample->add_option("--feet", feet, "Number of foot points")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--dirs", dirs, "Normal directions per foot")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--t-max", t_max, "Search horizon for cut times");
  sample->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto* dist = app.add_subcommand("dist", "Distance and minimizers from a point to a submanifold");
  add_common(dist, true);
  dist->add_option("--point", point, "Comma-separated coordinates");
  dist->add_option("--input", input, "JSON file with a point array or a matrix object");

  auto* flow = app.add_subcommand("flow", "Flow trajectories at requested times");
  add_common(flow, false);
  flow->add_option("--kind", kind, "morse-bott, orthogonal or geodesic-so")->capture_default_str();
  flow->add_option("--point", point, "Comma-separated coordinates");
  flow->add_option("--input", input, "JSON file with a point array or a matrix object");
  flow->add_option("--times", times, "Comma-separated times")->capture_default_str();

  std::string verify_output;
  auto* verify = app.add_subcommand("verify", "Run a named verification suite");
  verify->add_option("--suite", suite, "matfun, flows, groupgeo, cutlocus, equivariant, fermat or all")->required();
  verify->add_option("--params", params, "Suite parameters, e.g. n=1,d=3");
  verify->add_option("--output", verify_output, "Report path (default: standard output)");

  auto* explore = app.add_subcommand("explore", "Equivariance comparisons and exploratory Fermat runs");
  explore->add_option("--manifold", common.manifold, "Ambient manifold");
  explore->add_option("--submanifold", common.submanifold, "G-invariant submanifold");
  explore->add_option("--action", action, "antipodal, hopf, lens:p:q1,...,qk, zd-diag:d or trivial");
  explore->add_option("--fermat", fermat_text, "Fermat case, e.g. n=2,d=3");
  explore->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber)->capture_default_str();
  explore->add_option("--grid", grid, "Fermat sampling grid")->check(CLI::PositiveNumber)->capture_default_str();
  explore->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  explore->add_option("--output", common.output, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("ParseError", e.what());
    return kExitParse;
  }

  try {
    if (*sample) return cmd_sample(common, feet, dirs, t_max, format);
    if (*dist) return cmd_dist(common, point, input);
    if (*flow) return cmd_flow(common, kind, point, input, times);
    if (*verify) return cmd_verify(suite, params, verify_output);
    if (*explore) {
      if (fermat_text.empty() && (common.manifold.empty() || common.submanifold.empty())) {
        throw Error(ErrorCode::ParseError, "explore needs --fermat, or --manifold and --submanifold");
      }
      return cmd_explore(common, action, fermat_text, samples, grid);
    }
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return kExitCheckFailed;
  }
  return 0;
}
