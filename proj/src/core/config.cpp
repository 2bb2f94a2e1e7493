#include "core/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/solver.hpp"
#include "core/version.hpp"

namespace mutfront {

using nlohmann::json;

const char* mode_name(ExperimentMode m) noexcept {
  switch (m) {
    case ExperimentMode::run: return "run";
    case ExperimentMode::compare: return "compare";
    case ExperimentMode::certify_fast: return "certify-fast";
    case ExperimentMode::sweep: return "sweep";
    case ExperimentMode::convergence: return "convergence";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_key(const std::string& path, const std::string& key) {
  raise(Errc::parse_error, "unknown config key \"" + (path.empty() ? key : path + "." + key) + "\"");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) {
      if (it.key() == a) { ok = true; break; }
    }
    if (!ok) bad_key(path, it.key());
  }
}

const json* get(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) raise(Errc::parse_error, where + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) raise(Errc::parse_error, where + " must be an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) raise(Errc::parse_error, where + " must be a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) raise(Errc::parse_error, where + " must be a string");
  return j.get<std::string>();
}

std::vector<double> as_number_array(const json& j, const std::string& where) {
  if (!j.is_array()) raise(Errc::parse_error, where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(as_number(e, where + " entry"));
  return out;
}

void parse_params(const json& j, ModelParams& p) {
  check_keys(j, "params",
             {"d1", "d2", "a1", "a2", "b1", "b2", "c1", "c2", "mu", "b", "tau1", "tau2"});
  auto f = [&](const char* k, double& slot) {
    if (const json* v = get(j, k)) slot = as_number(*v, std::string("params.") + k);
  };
  f("d1", p.d1); f("d2", p.d2);
  f("a1", p.a1); f("a2", p.a2);
  f("b1", p.b1); f("b2", p.b2);
  f("c1", p.c1); f("c2", p.c2);
  f("mu", p.mu); f("b", p.b);
  f("tau1", p.tau1); f("tau2", p.tau2);
}

UProfileSpec parse_u_profile(const json& j, const std::string& path) {
  UProfileSpec u;
  check_keys(j, path, {"type", "amplitude", "modes", "mode_scale", "seed", "x", "value"});
  std::string type = "cosine";
  if (const json* v = get(j, "type")) type = as_string(*v, path + ".type");
  if (type == "cosine") {
    u.kind = UProfileSpec::Kind::cosine;
  } else if (type == "parabola") {
    u.kind = UProfileSpec::Kind::parabola;
  } else if (type == "perturbed_cosine") {
    u.kind = UProfileSpec::Kind::perturbed_cosine;
  } else if (type == "tabulated") {
    u.kind = UProfileSpec::Kind::tabulated;
  } else {
    raise(Errc::parse_error, path + ".type \"" + type + "\" is not a u profile");
  }
  if (const json* v = get(j, "amplitude")) u.amplitude = as_number(*v, path + ".amplitude");
  if (const json* v = get(j, "modes")) u.modes = as_int(*v, path + ".modes");
  if (const json* v = get(j, "mode_scale")) u.mode_scale = as_number(*v, path + ".mode_scale");
  if (const json* v = get(j, "seed")) {
    if (!v->is_number_integer()) raise(Errc::parse_error, path + ".seed must be an integer");
    u.seed = v->get<std::uint64_t>();
  }
  if (const json* v = get(j, "x")) u.xs = as_number_array(*v, path + ".x");
  if (const json* v = get(j, "value")) u.values = as_number_array(*v, path + ".value");
  return u;
}

VProfileSpec parse_v_profile(const json& j, const std::string& path) {
  VProfileSpec v;
  check_keys(j, path,
             {"type", "level", "amplitude", "center", "width", "x", "value", "far_field"});
  std::string type = "constant";
  if (const json* e = get(j, "type")) type = as_string(*e, path + ".type");
  if (type == "constant") {
    v.kind = VProfileSpec::Kind::constant;
  } else if (type == "gaussian") {
    v.kind = VProfileSpec::Kind::gaussian;
  } else if (type == "tabulated") {
    v.kind = VProfileSpec::Kind::tabulated;
  } else {
    raise(Errc::parse_error, path + ".type \"" + type + "\" is not a v profile");
  }
  if (const json* e = get(j, "level")) v.level = as_number(*e, path + ".level");
  if (const json* e = get(j, "amplitude")) v.amplitude = as_number(*e, path + ".amplitude");
  if (const json* e = get(j, "center")) v.center = as_number(*e, path + ".center");
  if (const json* e = get(j, "width")) v.width = as_number(*e, path + ".width");
  if (const json* e = get(j, "x")) v.xs = as_number_array(*e, path + ".x");
  if (const json* e = get(j, "value")) v.values = as_number_array(*e, path + ".value");
  if (const json* e = get(j, "far_field")) {
    v.far_field = as_number(*e, path + ".far_field");
    v.far_field_set = true;
  }
  return v;
}

void parse_disc(const json& j, Discretization& d) {
  check_keys(j, "disc",
             {"n_u", "n_v", "L", "dt", "t_end", "blowup_threshold", "cfl_safety",
              "output_stride", "max_dt_retries"});
  if (const json* v = get(j, "n_u")) d.n_u = as_int(*v, "disc.n_u");
  if (const json* v = get(j, "n_v")) d.n_v = as_int(*v, "disc.n_v");
  if (const json* v = get(j, "L")) d.L = as_number(*v, "disc.L");
  if (const json* v = get(j, "dt")) d.dt = as_number(*v, "disc.dt");
  if (const json* v = get(j, "t_end")) d.t_end = as_number(*v, "disc.t_end");
  if (const json* v = get(j, "blowup_threshold")) {
    d.blowup_threshold = as_number(*v, "disc.blowup_threshold");
  }
  if (const json* v = get(j, "cfl_safety")) d.cfl_safety = as_number(*v, "disc.cfl_safety");
  if (const json* v = get(j, "output_stride")) d.output_stride = as_int(*v, "disc.output_stride");
  if (const json* v = get(j, "max_dt_retries")) {
    d.max_dt_retries = as_int(*v, "disc.max_dt_retries");
  }
}

void parse_classifier(const json& j, ClassifierConfig& c) {
  check_keys(j, "classifier",
             {"velocity_fraction", "tail_fraction", "r2_min", "slow_front_factor"});
  if (const json* v = get(j, "velocity_fraction")) {
    c.velocity_fraction = as_number(*v, "classifier.velocity_fraction");
  }
  if (const json* v = get(j, "tail_fraction")) {
    c.tail_fraction = as_number(*v, "classifier.tail_fraction");
  }
  if (const json* v = get(j, "r2_min")) c.r2_min = as_number(*v, "classifier.r2_min");
  if (const json* v = get(j, "slow_front_factor")) {
    c.slow_front_factor = as_number(*v, "classifier.slow_front_factor");
  }
}

bool is_param_axis(const std::string& name) {
  static const char* names[] = {"d1", "d2", "a1", "a2", "b1", "b2",
                                "c1", "c2", "mu", "b",  "tau1", "tau2"};
  for (const char* n : names) {
    if (name == n) return true;
  }
  return false;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) raise(Errc::parse_error, "config root must be an object");

  check_keys(root, "",
             {"schema_version", "mode", "params", "initial", "disc", "classifier",
              "compare", "certify", "sweep", "convergence", "snapshot", "output"});

  const json* sv = get(root, "schema_version");
  if (!sv) raise(Errc::parse_error, "config requires schema_version");
  if (!sv->is_number_integer() || sv->get<int>() != kConfigSchemaVersion) {
    raise(Errc::schema_mismatch,
          "unsupported schema_version (this build reads version " +
              std::to_string(kConfigSchemaVersion) + ")");
  }

  ExperimentConfig cfg;
  if (const json* v = get(root, "mode")) {
    const std::string m = as_string(*v, "mode");
    if (m == "run") cfg.mode = ExperimentMode::run;
    else if (m == "compare") cfg.mode = ExperimentMode::compare;
    else if (m == "certify-fast") cfg.mode = ExperimentMode::certify_fast;
    else if (m == "sweep") cfg.mode = ExperimentMode::sweep;
    else if (m == "convergence") cfg.mode = ExperimentMode::convergence;
    else raise(Errc::parse_error, "mode \"" + m + "\" is not recognized");
  }

  if (const json* v = get(root, "params")) parse_params(*v, cfg.params);

  if (const json* v = get(root, "initial")) {
    check_keys(*v, "initial", {"u0", "v0"});
    if (const json* u = get(*v, "u0")) cfg.u0 = parse_u_profile(*u, "initial.u0");
    if (const json* w = get(*v, "v0")) cfg.v0 = parse_v_profile(*w, "initial.v0");
  }

  if (const json* v = get(root, "disc")) parse_disc(*v, cfg.disc);
  if (const json* v = get(root, "classifier")) parse_classifier(*v, cfg.classifier);

  if (const json* v = get(root, "compare")) {
    check_keys(*v, "compare", {"u0", "v0"});
    cfg.has_compare = true;
    cfg.u0_b = cfg.u0;
    cfg.v0_b = cfg.v0;
    if (const json* u = get(*v, "u0")) cfg.u0_b = parse_u_profile(*u, "compare.u0");
    if (const json* w = get(*v, "v0")) cfg.v0_b = parse_v_profile(*w, "compare.v0");
  }

  if (const json* v = get(root, "certify")) {
    check_keys(*v, "certify", {"k", "allow_any_regime"});
    if (const json* kk = get(*v, "k")) cfg.certify_k = as_number(*kk, "certify.k");
    if (const json* any = get(*v, "allow_any_regime")) {
      cfg.certify_allow_any_regime = as_bool(*any, "certify.allow_any_regime");
    }
  }

  if (const json* v = get(root, "sweep")) {
    check_keys(*v, "sweep", {"axes"});
    const json* axes = get(*v, "axes");
    if (!axes || !axes->is_array()) {
      raise(Errc::parse_error, "sweep.axes must be an array");
    }
    for (std::size_t i = 0; i < axes->size(); ++i) {
      const json& a = (*axes)[i];
      const std::string path = "sweep.axes[" + std::to_string(i) + "]";
      if (!a.is_object()) raise(Errc::parse_error, path + " must be an object");
      check_keys(a, path, {"param", "min", "max", "count"});
      SweepAxis ax;
      const json* nm = get(a, "param");
      if (!nm) raise(Errc::parse_error, path + " requires param");
      ax.name = as_string(*nm, path + ".param");
      const json* mn = get(a, "min");
      const json* mx = get(a, "max");
      const json* ct = get(a, "count");
      if (!mn || !mx || !ct) raise(Errc::parse_error, path + " requires min, max, count");
      ax.min = as_number(*mn, path + ".min");
      ax.max = as_number(*mx, path + ".max");
      ax.count = as_int(*ct, path + ".count");
      cfg.axes.push_back(std::move(ax));
    }
  }

  if (const json* v = get(root, "convergence")) {
    check_keys(*v, "convergence", {"levels"});
    if (const json* lv = get(*v, "levels")) {
      if (!lv->is_array()) raise(Errc::parse_error, "convergence.levels must be an array");
      for (std::size_t i = 0; i < lv->size(); ++i) {
        const json& l = (*lv)[i];
        const std::string path = "convergence.levels[" + std::to_string(i) + "]";
        if (!l.is_object()) raise(Errc::parse_error, path + " must be an object");
        check_keys(l, path, {"n_u", "n_v", "dt"});
        ConvergenceLevel cl;
        const json* nu = get(l, "n_u");
        const json* nv = get(l, "n_v");
        const json* dt = get(l, "dt");
        if (!nu || !nv || !dt) raise(Errc::parse_error, path + " requires n_u, n_v, dt");
        cl.n_u = as_int(*nu, path + ".n_u");
        cl.n_v = as_int(*nv, path + ".n_v");
        cl.dt = as_number(*dt, path + ".dt");
        cfg.levels.push_back(cl);
      }
    }
  }

  if (const json* v = get(root, "snapshot")) {
    check_keys(*v, "snapshot", {"at_t", "write_final"});
    if (const json* at = get(*v, "at_t")) cfg.snapshot_at = as_number(*at, "snapshot.at_t");
    if (const json* wf = get(*v, "write_final")) {
      cfg.snapshot_final = as_bool(*wf, "snapshot.write_final");
    }
  }

  if (const json* v = get(root, "output")) {
    check_keys(*v, "output", {"dir"});
    if (const json* dir = get(*v, "dir")) cfg.out_dir = as_string(*dir, "output.dir");
  }

  finalize_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(Errc::io_error, "failed reading config file " + path);
  return parse_config_text(ss.str());
}

void finalize_config(ExperimentConfig& cfg) {
  const ValidatedParams vp = ValidatedParams::validate(cfg.params);

  if (cfg.disc.L == 0.0) {
    cfg.disc.L = recommended_domain(vp, cfg.disc.t_end);
  }
  validate_discretization(cfg.disc, vp);

  switch (cfg.mode) {
    case ExperimentMode::run:
      break;
    case ExperimentMode::compare:
      if (!cfg.has_compare) {
        raise(Errc::validation_error, "compare mode requires a compare section");
      }
      break;
    case ExperimentMode::certify_fast: {
      if (!(cfg.certify_k > 1.0)) {
        raise(Errc::validation_error, "certify.k must exceed 1");
      }
      const RegimeDiscriminant rd = regime_discriminant(vp);
      if (rd.label != MutualismRegime::strong && !cfg.certify_allow_any_regime) {
        raise(Errc::validation_error,
              "certify-fast expects strong interaction (b1 c2 < b2 c1); set "
              "certify.allow_any_regime to proceed anyway");
      }
      break;
    }
    case ExperimentMode::sweep: {
      if (cfg.axes.empty() || cfg.axes.size() > 2) {
        raise(Errc::validation_error, "sweep needs one or two axes");
      }
      for (const SweepAxis& ax : cfg.axes) {
        if (!is_param_axis(ax.name) && ax.name != "u0_amplitude") {
          raise(Errc::validation_error,
                "sweep axis \"" + ax.name + "\" is not a model parameter or u0_amplitude");
        }
        if (ax.count < 1) raise(Errc::validation_error, "sweep axis count must be >= 1");
        if (!(ax.min <= ax.max)) raise(Errc::validation_error, "sweep axis needs min <= max");
        if (ax.count == 1 && ax.min != ax.max) {
          raise(Errc::validation_error, "a single-point axis needs min == max");
        }
      }
      break;
    }
    case ExperimentMode::convergence: {
      if (cfg.levels.empty()) {
        // Coupled refinement: each level doubles the resolution and quarters
        // dt, so both the O(dx^2) and O(dt) error components shrink 4x.
        cfg.levels = {{51, 51, 1.6e-3}, {101, 101, 4e-4}, {201, 201, 1e-4},
                      {401, 401, 2.5e-5}};
      }
      if (cfg.levels.size() < 2) {
        raise(Errc::validation_error, "convergence needs at least two levels");
      }
      for (const ConvergenceLevel& l : cfg.levels) {
        if (l.n_u < 5 || l.n_v < 5 || !(l.dt > 0)) {
          raise(Errc::validation_error, "convergence level needs n_u, n_v >= 5 and dt > 0");
        }
      }
      break;
    }
  }

  // Build the initial data once here so malformed profiles surface at config
  // time, not mid-experiment.
  (void)InitialData::make(cfg.u0, cfg.v0, vp);
  if (cfg.has_compare) (void)InitialData::make(cfg.u0_b, cfg.v0_b, vp);
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "thm33") {
    // Weak interaction, growth twice the habitat threshold: fronts spread.
    cfg.params = ModelParams{1.0, 1.0, M_PI * M_PI / 2.0, 1.0, 2.0, 1.0,
                             1.0, 2.0, 1.0, 1.0, 0.1, 0.1};
    cfg.u0 = UProfileSpec{};  // cosine, amplitude 1
    cfg.v0.kind = VProfileSpec::Kind::constant;
    cfg.v0.level = 0.5;
    cfg.disc.t_end = 10.0;
  } else if (name == "thm41") {
    // Strong interaction with growth above both thresholds: blowup.
    cfg.params = ModelParams{1.0, 1.0, M_PI * M_PI / 2.0, M_PI * M_PI / 2.0,
                             1.0, 2.0, 2.0, 1.0, 1.0, 1.0, 0.1, 0.1};
    cfg.u0 = UProfileSpec{};
    cfg.v0.kind = VProfileSpec::Kind::constant;
    cfg.v0.level = 0.5;
    cfg.disc.t_end = 10.0;
  } else if (name == "thm43") {
    // Strong interaction, habitat at half the certificate bound, data at half
    // the certificate ceiling: certified decay.
    ModelParams p;
    p.d1 = p.d2 = 1.0;
    p.a1 = p.a2 = 1.0;
    p.b1 = 0.5;
    p.b2 = 1.0;
    p.c1 = p.c2 = 1.0;
    p.mu = 1.0;
    p.tau1 = p.tau2 = 0.1;
    const double k = 2.0;
    const double growth = p.a1 + k * p.a2 * p.c1 / p.c2;
    const double b0 = (M_PI / (2.0 * k)) * std::sqrt(p.d1 / (8.0 * growth));
    p.b = 0.5 * b0;
    cfg.params = p;
    cfg.mode = ExperimentMode::certify_fast;
    cfg.certify_k = k;
    {
      // Half the certificate ceiling; the ceiling itself depends on p.
      const ValidatedParams vp = ValidatedParams::validate(p);
      const SupersolutionSpec ss = fast_supersolution(vp, k);
      cfg.u0.amplitude = 0.5 * ss.delta;
    }
    cfg.v0.kind = VProfileSpec::Kind::constant;
    cfg.v0.level = p.a2 / p.c2;
    cfg.disc.t_end = 5.0;
  } else {
    raise(Errc::invalid_argument,
          "preset \"" + name + "\" unknown; choose thm33, thm41, or thm43");
  }
  finalize_config(cfg);
  return cfg;
}

}  // namespace mutfront
