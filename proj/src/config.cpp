#include "adamo/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "adamo/metrics.hpp"

namespace adamo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v +
                      "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v +
                      "' as an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + v +
                      "' as an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': cannot parse '" + v +
                    "' as a boolean");
}

// key=value pairs in application order
std::vector<std::pair<std::string, std::string>> parse_lines(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      }
      continue;  // sections are cosmetic grouping only
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return pairs;
}

struct Applier {
  ExperimentConfig cfg;
  bool eta_rho_explicit = false;
  bool lr_seen = false;
  double lr_value = 0.0;

  void apply(const std::string& key, const std::string& val) {
    using std::string;
    auto& c = cfg;
    if (key == "task") {
      c.task = task_kind_from_string(val);
    } else if (key == "optimizer") {
      c.optimizer = opt_kind_from_string(val);
    } else if (key == "epochs") {
      c.epochs = parse_long(key, val);
    } else if (key == "batch_size") {
      c.batch_size = parse_long(key, val);
    } else if (key == "seed") {
      c.seed = parse_u64(key, val);
    } else if (key == "eval_every") {
      c.eval_every = parse_long(key, val);
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else if (key == "lr") {
      lr_seen = true;
      lr_value = parse_double(key, val);
      c.opt.eta_theta = lr_value;
    } else if (key == "eta_theta") {
      c.opt.eta_theta = parse_double(key, val);
    } else if (key == "eta_rho") {
      c.opt.eta_rho = parse_double(key, val);
      eta_rho_explicit = true;
    } else if (key == "lambda" || key == "weight_decay") {
      c.opt.lambda = parse_double(key, val);
    } else if (key == "beta1_theta") {
      c.opt.beta1_theta = parse_double(key, val);
    } else if (key == "beta2_theta") {
      c.opt.beta2_theta = parse_double(key, val);
    } else if (key == "beta1_rho") {
      c.opt.beta1_rho = parse_double(key, val);
    } else if (key == "beta_tau") {
      c.opt.beta_tau = parse_double(key, val);
    } else if (key == "tau_target") {
      c.opt.tau_target = parse_double(key, val);
    } else if (key == "eps") {
      c.opt.eps = parse_double(key, val);
    } else if (key == "alpha") {
      c.opt.alpha = parse_double(key, val);
    } else if (key == "dim_threshold") {
      c.opt.dim_threshold = parse_long(key, val);
    } else if (key == "decay_mode") {
      c.opt.decay_mode = decay_mode_from_string(val);
    } else if (key == "enable_curvature") {
      c.opt.enable_curvature = parse_bool(key, val);
    } else if (key == "enable_projection") {
      c.opt.enable_projection = parse_bool(key, val);
    } else if (key == "enable_dimension") {
      c.opt.enable_dimension = parse_bool(key, val);
    } else if (key == "adamp_delta") {
      c.opt.adamp_delta = parse_double(key, val);
    } else if (key == "adamp_wd_ratio") {
      c.opt.adamp_wd_ratio = parse_double(key, val);
    } else if (key == "radial_lr_cap") {
      c.opt.radial_lr_cap = parse_double(key, val);
    } else if (key == "eps_norm") {
      c.opt.eps_norm = parse_double(key, val);
    } else if (key == "p") {
      c.p = int(parse_long(key, val));
    } else if (key == "split_fraction") {
      c.split_fraction = parse_double(key, val);
    } else if (key == "hidden") {
      c.hidden = int(parse_long(key, val));
    } else if (key == "n_points") {
      c.n_points = int(parse_long(key, val));
    } else if (key == "noise") {
      c.noise = parse_double(key, val);
    } else if (key == "quad_dim") {
      c.quad_dim = int(parse_long(key, val));
    } else if (key == "quad_scale") {
      c.quad_scale = parse_double(key, val);
    } else if (key == "grok_threshold") {
      c.grok_threshold = parse_double(key, val);
    } else if (key == "divergence_threshold") {
      c.divergence_threshold = parse_double(key, val);
    } else if (key == "export_data") {
      c.export_data = parse_bool(key, val);
    } else if (key == "save_checkpoint") {
      c.save_checkpoint = parse_bool(key, val);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  ExperimentConfig finish() {
    if (lr_seen && !eta_rho_explicit) cfg.opt.eta_rho = lr_value;
    cfg.validate();
    return cfg;
  }
};

}  // namespace

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "grokking") return TaskKind::kGrokking;
  if (s == "toy2d") return TaskKind::kToy2d;
  if (s == "quadratic") return TaskKind::kQuadratic;
  throw ConfigError("unknown task '" + s + "'");
}

const char* to_string(TaskKind t) {
  switch (t) {
    case TaskKind::kGrokking:
      return "grokking";
    case TaskKind::kToy2d:
      return "toy2d";
    case TaskKind::kQuadratic:
      return "quadratic";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(epochs >= 0, "epochs must be nonnegative");
  require(batch_size >= 1, "batch_size must be at least 1");
  require(eval_every >= 1, "eval_every must be at least 1");
  require(p >= 2, "p must be at least 2");
  require(split_fraction > 0.0 && split_fraction < 1.0,
          "split_fraction must be in (0,1)");
  require(hidden >= 1, "hidden must be at least 1");
  require(n_points >= 4, "n_points must be at least 4");
  require(noise >= 0.0, "noise must be nonnegative");
  require(quad_dim >= 1, "quad_dim must be at least 1");
  require(grok_threshold > 0.0 && grok_threshold < 1.0,
          "grok_threshold must be in (0,1)");
  require(divergence_threshold > 0.0, "divergence_threshold must be positive");
  require(!out_dir.empty(), "out_dir must not be empty");
  opt.validate();
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream o;
  o << "task = " << to_string(task) << "\n";
  o << "optimizer = " << to_string(optimizer) << "\n";
  o << "epochs = " << epochs << "\n";
  o << "batch_size = " << batch_size << "\n";
  o << "seed = " << seed << "\n";
  o << "eval_every = " << eval_every << "\n";
  o << "out_dir = " << out_dir << "\n";
  o << "eta_theta = " << format_double(opt.eta_theta) << "\n";
  o << "eta_rho = " << format_double(opt.eta_rho) << "\n";
  o << "lambda = " << format_double(opt.lambda) << "\n";
  o << "beta1_theta = " << format_double(opt.beta1_theta) << "\n";
  o << "beta2_theta = " << format_double(opt.beta2_theta) << "\n";
  o << "beta1_rho = " << format_double(opt.beta1_rho) << "\n";
  o << "beta_tau = " << format_double(opt.beta_tau) << "\n";
  o << "tau_target = " << format_double(opt.tau_target) << "\n";
  o << "eps = " << format_double(opt.eps) << "\n";
  o << "alpha = " << format_double(opt.alpha) << "\n";
  o << "dim_threshold = " << opt.dim_threshold << "\n";
  o << "decay_mode = " << to_string(opt.decay_mode) << "\n";
  o << "enable_curvature = " << (opt.enable_curvature ? "true" : "false") << "\n";
  o << "enable_projection = " << (opt.enable_projection ? "true" : "false") << "\n";
  o << "enable_dimension = " << (opt.enable_dimension ? "true" : "false") << "\n";
  o << "adamp_delta = " << format_double(opt.adamp_delta) << "\n";
  o << "adamp_wd_ratio = " << format_double(opt.adamp_wd_ratio) << "\n";
  o << "radial_lr_cap = " << format_double(opt.radial_lr_cap) << "\n";
  o << "eps_norm = " << format_double(opt.eps_norm) << "\n";
  o << "p = " << p << "\n";
  o << "split_fraction = " << format_double(split_fraction) << "\n";
  o << "hidden = " << hidden << "\n";
  o << "n_points = " << n_points << "\n";
  o << "noise = " << format_double(noise) << "\n";
  o << "quad_dim = " << quad_dim << "\n";
  o << "quad_scale = " << format_double(quad_scale) << "\n";
  o << "grok_threshold = " << format_double(grok_threshold) << "\n";
  o << "divergence_threshold = " << format_double(divergence_threshold) << "\n";
  o << "export_data = " << (export_data ? "true" : "false") << "\n";
  o << "save_checkpoint = " << (save_checkpoint ? "true" : "false") << "\n";
  return o.str();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["task"] = to_string(task);
  j["optimizer"] = to_string(optimizer);
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["seed"] = seed;
  j["eval_every"] = eval_every;
  j["out_dir"] = out_dir;
  j["eta_theta"] = opt.eta_theta;
  j["eta_rho"] = opt.eta_rho;
  j["lambda"] = opt.lambda;
  j["beta1_theta"] = opt.beta1_theta;
  j["beta2_theta"] = opt.beta2_theta;
  j["beta1_rho"] = opt.beta1_rho;
  j["beta_tau"] = opt.beta_tau;
  j["tau_target"] = opt.tau_target;
  j["eps"] = opt.eps;
  j["alpha"] = opt.alpha;
  j["dim_threshold"] = opt.dim_threshold;
  j["decay_mode"] = to_string(opt.decay_mode);
  j["enable_curvature"] = opt.enable_curvature;
  j["enable_projection"] = opt.enable_projection;
  j["enable_dimension"] = opt.enable_dimension;
  j["adamp_delta"] = opt.adamp_delta;
  j["adamp_wd_ratio"] = opt.adamp_wd_ratio;
  j["radial_lr_cap"] = opt.radial_lr_cap;
  j["eps_norm"] = opt.eps_norm;
  j["p"] = p;
  j["split_fraction"] = split_fraction;
  j["hidden"] = hidden;
  j["n_points"] = n_points;
  j["noise"] = noise;
  j["quad_dim"] = quad_dim;
  j["quad_scale"] = quad_scale;
  j["grok_threshold"] = grok_threshold;
  j["divergence_threshold"] = divergence_threshold;
  j["export_data"] = export_data;
  j["save_checkpoint"] = save_checkpoint;
  return j;
}

ExperimentConfig ExperimentConfig::from_text(
    const std::string& text, const std::vector<std::string>& overrides) {
  Applier ap;
  for (const auto& [k, v] : parse_lines(text)) ap.apply(k, v);
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + ov + "' is not key=value");
    }
    ap.apply(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  return ap.finish();
}

ExperimentConfig ExperimentConfig::from_file(
    const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), overrides);
}

}  // namespace adamo
