#include "hypflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hypflow/errors.hpp"

namespace hypflow {

using io::format_number;
using io::json;

namespace {

const std::vector<std::string>& margin_names() {
  namespace bn = bound_names;
  static const std::vector<std::string> names{
      bn::kStepUpper,     bn::kStepLower,    bn::kStepLowerWeak, bn::kDecrease,      bn::kContraction,
      bn::kDisplacementUpper, bn::kDisplacementLower, bn::kSlopeRatio, bn::kRayDistance, bn::kTelescoped,
      bn::kDivergence,    bn::kSandwichLower, bn::kSandwichUpper};
  return names;
}

json resolve_document(const json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) return io::load_json(base_dir / j.get<std::string>());
  return j;
}

}  // namespace

std::string to_string(DeltaPolicy::Kind kind) {
  switch (kind) {
    case DeltaPolicy::Kind::Default:
      return "default";
    case DeltaPolicy::Kind::Fixed:
      return "fixed";
    case DeltaPolicy::Kind::Estimate:
      return "estimate";
  }
  return "unknown";
}

ExperimentConfig experiment_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.name = doc.value("name", std::string("experiment"));
    if (!doc.contains("space")) throw ConfigError("experiment config: missing \"space\"");
    if (!doc.contains("function")) throw ConfigError("experiment config: missing \"function\"");
    cfg.space_doc = resolve_document(doc.at("space"), base_dir);
    cfg.space = io::space_from_json(cfg.space_doc);
    cfg.function.emplace(io::function_from_json(cfg.space, resolve_document(doc.at("function"), base_dir)));

    if (!doc.contains("flow")) throw ConfigError("experiment config: missing \"flow\"");
    const json& flow = doc.at("flow");
    cfg.flow.tau = flow.at("tau").get<double>();
    const auto K = flow.at("K").get<long long>();
    if (!(cfg.flow.tau > 0.0) || !std::isfinite(cfg.flow.tau)) throw ConfigError("flow.tau must be positive");
    if (K < 1) throw ConfigError("flow.K must be at least 1");
    cfg.flow.K = static_cast<std::size_t>(K);
    cfg.flow.x0 = flow.contains("x0") ? io::point_from_json(*cfg.space, flow.at("x0")) : io::default_base(*cfg.space);
    cfg.flow.seed = flow.value("seed", std::uint64_t{0});

    if (doc.contains("delta") && !(doc.at("delta").is_string() && doc.at("delta") == "default")) {
      const json& d = doc.at("delta");
      if (d.contains("fixed")) {
        cfg.delta.kind = DeltaPolicy::Kind::Fixed;
        cfg.delta.value = d.at("fixed").get<double>();
        if (!(cfg.delta.value >= 0.0)) throw ConfigError("delta.fixed must be nonnegative");
      } else if (d.contains("estimate")) {
        cfg.delta.kind = DeltaPolicy::Kind::Estimate;
        const json& e = d.at("estimate");
        cfg.delta.sample = e.is_object() ? io::sample_from_json(json{{"sample", e}}, cfg.space->kind())
                                         : SampleSpec::default_for(cfg.space->kind());
        if (d.value("exhaustive", false)) {
          cfg.delta.method = DeltaMethod::exhaustive();
        } else {
          cfg.delta.method = DeltaMethod::sampled(cfg.flow.seed, d.value("quadruples", std::uint64_t{1'000'000}));
        }
      } else {
        throw ConfigError("delta must be \"default\", {\"fixed\": v} or {\"estimate\": sample}");
      }
    }

    cfg.output_dir = doc.value("output_dir", std::string("out/") + cfg.name);
    if (doc.contains("tolerances")) {
      const json& t = doc.at("tolerances");
      cfg.tol = t.value("bound", cfg.tol);
      cfg.flow.prox.planar_stop = t.value("prox_stop", cfg.flow.prox.planar_stop);
      cfg.flow.prox.tree_tolerance = t.value("tree", cfg.flow.prox.tree_tolerance);
      cfg.flow.prox.max_iterations = t.value("max_iterations", cfg.flow.prox.max_iterations);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  const json doc = io::load_json(path);
  auto cfg = experiment_from_json(doc, path.parent_path());
  if (!doc.contains("name")) {
    cfg.name = path.stem().string();
    if (!doc.contains("output_dir")) cfg.output_dir = "out/" + cfg.name;
  }
  return cfg;
}

double resolve_delta(const ExperimentConfig& cfg) {
  switch (cfg.delta.kind) {
    case DeltaPolicy::Kind::Default:
      return cfg.space->documented_delta();
    case DeltaPolicy::Kind::Fixed:
      return cfg.delta.value;
    case DeltaPolicy::Kind::Estimate:
      return estimate_delta(*cfg.space, cfg.delta.sample, cfg.delta.method).delta_hat;
  }
  return cfg.space->documented_delta();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const ConvexFunction& f = *cfg.function;
  ExperimentResult res;
  res.delta_used = resolve_delta(cfg);
  res.slopes = slope_report(f, cfg.flow.x0);
  res.trajectory = run_ppa(f, cfg.flow);
  VerifyOptions vo;
  vo.tol = cfg.tol;
  vo.delta = res.delta_used;
  res.verification = verify(res.trajectory, f, res.slopes, vo);
  if (res.trajectory.points.size() >= 3) res.limit = detect_boundary_limit(res.trajectory, *cfg.space);
  return res;
}

std::vector<std::string> trajectory_columns(const ExperimentConfig& cfg) {
  std::vector<std::string> cols{"k"};
  if (cfg.space->kind() == SpaceKind::Tree) {
    cols.insert(cols.end(), {"edge", "offset"});
  } else {
    cols.insert(cols.end(), {"u", "v"});
  }
  cols.insert(cols.end(), {"d_x0_xk", "f_xk", "step_length", "residual", "t_k", "gromov_xi_t_xk",
                           "gromov_xi_2t_xk", "divergence_rhs"});
  for (const auto& n : margin_names()) cols.push_back("margin_" + n);
  return cols;
}

void write_trajectory_csv(const ExperimentConfig& cfg, const ExperimentResult& res, std::ostream& out) {
  const auto cols = trajectory_columns(cfg);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  const auto& traj = res.trajectory;
  const auto& report = res.verification.report;
  const double nan = std::nan("");
  for (const auto& rec : res.verification.records) {
    const std::size_t k = rec.k;
    out << k;
    const Point& p = traj.points[k];
    if (const auto* t = std::get_if<TreePoint>(&p)) {
      out << "," << t->edge << "," << format_number(t->offset);
    } else {
      const auto& q = std::get<PlanePoint>(p);
      out << "," << format_number(q.u) << "," << format_number(q.v);
    }
    const ProxStep* step = k > 0 ? &traj.steps[k - 1] : nullptr;
    for (double v : {rec.d_x0_xk, rec.f_xk, step ? step->step_length : nan, step ? step->residual : nan, rec.t_k,
                     rec.gromov_xi_t, rec.gromov_xi_2t, rec.divergence_rhs}) {
      out << "," << format_number(v);
    }
    for (const auto& n : margin_names()) {
      const BoundEntry* e = report.find(n, k);
      out << "," << format_number(e && e->status != BoundStatus::Inapplicable ? e->margin : nan);
    }
    out << "\n";
  }
}

json summary_json(const ExperimentConfig& cfg, const ExperimentResult& res) {
  const Space& space = *cfg.space;
  const auto& ver = res.verification;
  json s;
  s["name"] = cfg.name;
  s["space"] = to_string(space.kind());
  s["function"] = cfg.function->tag();
  s["tau"] = format_number(cfg.flow.tau);
  s["K"] = cfg.flow.K;
  s["seed"] = cfg.flow.seed;
  s["lipschitz"] = format_number(cfg.function->lipschitz());
  s["alpha_hat"] = format_number(res.slopes.alpha_hat);
  s["alpha_used"] = format_number(ver.alpha);
  s["v_star"] = res.slopes.v_star ? io::direction_to_json(space, *res.slopes.v_star) : json(nullptr);
  json slopes = json::array();
  for (const auto& ds : res.slopes.slopes) {
    slopes.push_back({{"direction", io::direction_to_json(space, ds.direction)},
                      {"value", format_number(ds.value)},
                      {"measured", format_number(ds.measured)}});
  }
  s["slopes"] = slopes;
  s["delta_policy"] = to_string(cfg.delta.kind);
  s["delta_used"] = format_number(res.delta_used);
  if (ver.threshold) {
    s["tau_threshold"] = {{"exact", format_number(ver.threshold->exact)},
                          {"sufficient", format_number(ver.threshold->sufficient)}};
  } else {
    s["tau_threshold"] = nullptr;
  }
  s["divergence_below_threshold"] = ver.below_threshold;
  json bounds = json::object();
  for (const auto& n : ver.report.names()) {
    const auto c = ver.report.counts(n);
    bounds[n] = {{"pass", c.pass}, {"fail", c.fail}, {"inapplicable", c.inapplicable}};
  }
  s["bounds"] = bounds;
  const auto total = ver.report.counts();
  s["totals"] = {{"pass", total.pass}, {"fail", total.fail}, {"inapplicable", total.inapplicable}};
  if (res.limit) {
    s["boundary_limit"] = {
        {"direction", res.limit->direction ? io::direction_to_json(space, *res.limit->direction) : json(nullptr)},
        {"early", format_number(res.limit->early)},
        {"late", format_number(res.limit->late)},
        {"note", res.limit->note}};
  } else {
    s["boundary_limit"] = nullptr;
  }
  s["final_point"] = io::point_to_json(space, res.trajectory.points.back());
  s["status"] = ver.report.all_pass() ? "pass" : "fail";
  return s;
}

void write_plot_script(std::ostream& out) {
  out << "# gnuplot -c plot.gp  (run inside the output directory)\n"
         "set datafile separator ','\n"
         "set datafile missing 'nan'\n"
         "set terminal pngcairo size 900,600\n"
         "set output 'gromov.png'\n"
         "set key left top\n"
         "set xlabel 'k'\n"
         "set ylabel 'Gromov product at x_0'\n"
         "plot 'trajectory.csv' using 'k':'gromov_xi_t_xk' with linespoints title '(xi(t_k) | x_k)', \\\n"
         "     '' using 'k':'divergence_rhs' with lines title 'divergence lower bound'\n";
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(cfg, res, csv);
  }
  {
    std::ofstream js(dir / "summary.json");
    js << summary_json(cfg, res).dump(2) << "\n";
  }
  {
    std::ofstream gp(dir / "plot.gp");
    write_plot_script(gp);
  }
}

// ---------------------------------------------------------------------------
// Commands

namespace {

int run_one(const std::string& path, const RunOptions& options, bool many, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_experiment(path);
  } catch (const std::exception& e) {
    err << path << ": " << e.what() << "\n";
    return 2;
  }
  if (options.seed_override) {
    cfg.flow.seed = *options.seed_override;
    if (cfg.delta.method.kind == DeltaMethod::Kind::Sampled) cfg.delta.method.seed = *options.seed_override;
  }
  std::filesystem::path dir = cfg.output_dir;
  if (options.out_dir) {
    dir = *options.out_dir;
    if (many) dir /= cfg.name;
  }

  ExperimentResult res;
  try {
    res = run_experiment(cfg);
  } catch (const ConvexityError& e) {
    err << cfg.name << ": convexity violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << cfg.name << ": " << e.what() << "\n";
    return 2;
  }
  try {
    write_outputs(cfg, res, dir);
  } catch (const std::exception& e) {
    err << cfg.name << ": cannot write outputs to " << dir << ": " << e.what() << "\n";
    return 2;
  }

  const auto& ver = res.verification;
  const auto c = ver.report.counts();
  if (ver.below_threshold) {
    err << cfg.name << ": warning: tau = " << format_number(cfg.flow.tau) << " is at or below the threshold "
        << format_number(ver.threshold->exact) << "; divergence entries are inapplicable\n";
  }
  std::size_t shown = 0;
  for (const auto& e : ver.report.entries()) {
    if (e.status != BoundStatus::Fail) continue;
    if (shown++ < 10) {
      err << cfg.name << ": FAIL " << e.name << " k=" << e.k << " lhs=" << format_number(e.lhs)
          << " rhs=" << format_number(e.rhs) << " margin=" << format_number(e.margin) << "\n";
    }
  }
  out << cfg.name << ": " << (ver.report.all_pass() ? "pass" : "FAIL") << " (" << c.pass << " pass, " << c.fail
      << " fail, " << c.inapplicable << " inapplicable) -> " << dir.string() << "\n";
  return ver.report.all_pass() ? 0 : 1;
}

}  // namespace

int cmd_run(const std::vector<std::string>& config_paths, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  if (config_paths.empty()) {
    err << "run: no config given\n";
    return 2;
  }
  const bool many = config_paths.size() > 1;
  std::vector<int> codes(config_paths.size(), 0);
  std::vector<std::ostringstream> outs(config_paths.size());
  std::vector<std::ostringstream> errs(config_paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config_paths.size(); i = next++) {
      codes[i] = run_one(config_paths[i], options, many, outs[i], errs[i]);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(config_paths.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (std::size_t i = 0; i < config_paths.size(); ++i) {
    out << outs[i].str();
    err << errs[i].str();
    code = std::max(code, codes[i]);
  }
  return code;
}

int cmd_delta(const std::string& space_path, bool exhaustive, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
  try {
    const json doc = io::load_json(space_path);
    const SpacePtr space = io::space_from_json(doc);
    const SampleSpec sample = io::sample_from_json(doc, space->kind());
    const DeltaMethod method =
        exhaustive ? DeltaMethod::exhaustive()
                   : DeltaMethod::sampled(sample.seed, doc.value("quadruples", std::uint64_t{1'000'000}));
    const auto points = sample_points(*space, sample);
    const auto est = estimate_delta(*space, points, method);

    json j;
    j["space"] = to_string(space->kind());
    j["points"] = points.size();
    j["method"] = exhaustive ? "exhaustive" : "sampled";
    if (!exhaustive) j["seed"] = method.seed;
    j["quadruple_count"] = est.quadruple_count;
    j["delta_hat"] = format_number(est.delta_hat);
    j["note"] = "largest observed four-point defect; a lower bound on the hyperbolicity constant";
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / "delta.json") << j.dump(2) << "\n";
    out << "delta_hat = " << format_number(est.delta_hat) << " over " << est.quadruple_count << " quadruples of "
        << points.size() << " points (" << j["method"].get<std::string>() << ")\n";
    return 0;
  } catch (const std::exception& e) {
    err << "delta: " << e.what() << "\n";
    return 2;
  }
}

int cmd_slopes(const std::string& space_path, const std::string& function_path, std::ostream& out,
               std::ostream& err) {
  SpacePtr space;
  std::optional<ConvexFunction> f;
  try {
    space = io::space_from_json(io::load_json(space_path));
    f.emplace(io::function_from_json(space, io::load_json(function_path)));
  } catch (const std::exception& e) {
    err << "slopes: " << e.what() << "\n";
    return 2;
  }
  try {
    const Point base = io::default_base(*space);
    const auto report = slope_report(*f, base);
    out << "function " << f->tag() << ", L = " << format_number(f->lipschitz()) << "\n";
    for (const auto& ds : report.slopes) {
      out << "  " << io::direction_to_json(*space, ds.direction).dump() << "  slope " << format_number(ds.value)
          << "  (quotient estimate " << format_number(ds.measured) << ")\n";
    }
    out << "alpha_hat = " << format_number(report.alpha_hat) << "\n";
    if (report.v_star) {
      out << "v_star = " << io::direction_to_json(*space, *report.v_star).dump() << "\n";
    } else {
      out << "no negative direction\n";
    }
    return 0;
  } catch (const ConvexityError& e) {
    err << "slopes: convexity violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "slopes: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hypflow
