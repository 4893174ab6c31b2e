#include "momentous/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace momentous {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) throw ConfigError("unknown field '" + where + k + "'");
  }
}

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double read_number(const json& obj, const std::string& where, const char* key, double fallback) {
  const json* v = member(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError("field '" + where + key + "' must be a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError("field '" + where + key + "' must be finite");
  return d;
}

std::optional<double> read_optional(const json& obj, const std::string& where, const char* key) {
  if (!member(obj, key)) return std::nullopt;
  return read_number(obj, where, key, 0.0);
}

int read_int(const json& obj, const std::string& where, const char* key, int fallback) {
  const json* v = member(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError("field '" + where + key + "' must be an integer");
  return v->get<int>();
}

bool read_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  const json* v = member(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError("field '" + where + key + "' must be true or false");
  return v->get<bool>();
}

std::string read_string(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
  const json* v = member(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError("field '" + where + key + "' must be a string");
  return v->get<std::string>();
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  const json* v = member(root, key);
  if (!v) return empty;
  if (!v->is_object()) throw ConfigError("field '" + std::string(key) + "' must be an object");
  return *v;
}

GridSpec read_grid(const json& obj, const std::string& where, GridSpec fallback) {
  reject_unknown(obj, where, {"min", "max", "count"});
  GridSpec g;
  g.min = read_number(obj, where, "min", fallback.min);
  g.max = read_number(obj, where, "max", fallback.max);
  g.count = read_int(obj, where, "count", fallback.count);
  return g;
}

nlohmann::ordered_json grid_json(const GridSpec& g) { return {{"min", g.min}, {"max", g.max}, {"count", g.count}}; }

double linspace(double a, double b, int count, int i) {
  if (count <= 1) return a;
  return a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

double SweepSpec::value(int i) const { return linspace(start, stop, count, i); }
double GridSpec::value(int i) const { return linspace(min, max, count, i); }

double RunConfig::effective_margin() const { return margin.value_or(default_margin(model.potential.width())); }

double RunConfig::initial_momentum() const {
  if (packet.p0) return *packet.p0;
  const double e = *packet.energy;
  const double kinetic = e - model.potential.evaluate(packet.q0);
  if (kinetic < 0.0) {
    throw ConfigError("field 'packet.energy' is below V(q0) at q0=" + std::to_string(packet.q0));
  }
  return std::sqrt(2.0 * model.mass * kinetic);
}

double RunConfig::classification_energy() const {
  if (packet.energy) return *packet.energy;
  const double p0 = *packet.p0;
  return p0 * p0 / (2.0 * model.mass) + model.potential.evaluate(packet.q0);
}

GaussianPacket RunConfig::gaussian_packet() const {
  return GaussianPacket{packet.q0, initial_momentum(), packet.sigma0, model.hbar};
}

void RunConfig::validate() const {
  if (!(model.mass > 0.0)) throw ConfigError("field 'model.mass' must be positive");
  if (!(model.hbar > 0.0)) throw ConfigError("field 'model.hbar' must be positive");
  if (model.order != 0 && model.order != 2 && model.order != 3) throw ConfigError("field 'model.order' must be 0, 2 or 3");
  if (!(packet.sigma0 > 0.0)) throw ConfigError("field 'packet.sigma0' must be positive");
  if (packet.p0.has_value() == packet.energy.has_value()) {
    throw ConfigError("exactly one of 'packet.p0' and 'packet.energy' must be given");
  }
  if (packet.energy && !(*packet.energy > 0.0)) throw ConfigError("field 'packet.energy' must be positive");
  if (!(integrator.rtol > 0.0)) throw ConfigError("field 'integrator.rtol' must be positive");
  if (!(integrator.atol > 0.0)) throw ConfigError("field 'integrator.atol' must be positive");
  if (!(integrator.t_max > 0.0)) throw ConfigError("field 'integrator.t_max' must be positive");
  if (!(integrator.max_step > 0.0)) throw ConfigError("field 'integrator.max_step' must be positive");
  if (!(integrator.sample_dt > 0.0)) throw ConfigError("field 'integrator.sample_dt' must be positive");
  if (integrator.max_steps == 0) throw ConfigError("field 'integrator.max_steps' must be positive");
  if (margin && !(*margin >= 0.0)) throw ConfigError("field 'classify.margin' must be non-negative");
  if (sweep) {
    if (sweep->parameter != "q0" && sweep->parameter != "p0" && sweep->parameter != "sigma0") {
      throw ConfigError("field 'sweep.parameter' must be one of q0, p0, sigma0");
    }
    if (sweep->count < 1) throw ConfigError("field 'sweep.count' must be >= 1");
    if (sweep->parameter == "sigma0" && !(std::min(sweep->start, sweep->stop) > 0.0)) {
      throw ConfigError("field 'sweep.start' and 'sweep.stop' must be positive for sigma0");
    }
  }
  if (surface) {
    if (surface->q.count < 1) throw ConfigError("field 'surface.q.count' must be >= 1");
    if (surface->t.count < 1) throw ConfigError("field 'surface.t.count' must be >= 1");
    if (surface->t.min < 0.0 || surface->t.max < surface->t.min) {
      throw ConfigError("field 'surface.t' must satisfy 0 <= min <= max");
    }
  }
  if (output_format != "csv") throw ConfigError("field 'output.format' must be 'csv'");
}

bool operator==(const IntegratorConfig& a, const IntegratorConfig& b) {
  return a.rtol == b.rtol && a.atol == b.atol && a.t_max == b.t_max && a.max_step == b.max_step &&
         a.escape_radius == b.escape_radius && a.sample_dt == b.sample_dt && a.max_steps == b.max_steps &&
         a.stop_on_constraint_violation == b.stop_on_constraint_violation &&
         a.extra_sample_times == b.extra_sample_times && a.watch_levels == b.watch_levels;
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.mass == b.mass && a.hbar == b.hbar && a.potential == b.potential && a.order == b.order &&
         a.veff_third_order_term == b.veff_third_order_term;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.model == b.model && a.packet == b.packet && a.integrator == b.integrator && a.effective_margin() == b.effective_margin() &&
         a.sweep == b.sweep && a.surface == b.surface && a.output_path == b.output_path &&
         a.output_format == b.output_format;
}

RunConfig parse_config(const json& root) {
  if (!root.is_object()) throw ConfigError("configuration must be an object");
  reject_unknown(root, "", {"model", "packet", "integrator", "classify", "sweep", "surface", "output"});
  RunConfig cfg;

  const json& m = section(root, "model");
  reject_unknown(m, "model.", {"mass", "hbar", "order", "veff_third_order_term", "potential"});
  cfg.model.mass = read_number(m, "model.", "mass", cfg.model.mass);
  cfg.model.hbar = read_number(m, "model.", "hbar", cfg.model.hbar);
  cfg.model.order = read_int(m, "model.", "order", cfg.model.order);
  cfg.model.veff_third_order_term = read_bool(m, "model.", "veff_third_order_term", cfg.model.veff_third_order_term);
  const json& pot = section(m, "potential");
  reject_unknown(pot, "model.potential.", {"alpha", "a", "n"});
  try {
    cfg.model.potential = BarrierPotential(read_number(pot, "model.potential.", "alpha", 1.0),
                                           read_number(pot, "model.potential.", "a", 1.0),
                                           read_int(pot, "model.potential.", "n", 4));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("field 'model.potential': ") + e.what());
  }

  const json& p = section(root, "packet");
  reject_unknown(p, "packet.", {"q0", "p0", "energy", "sigma0", "third_moment_convention"});
  cfg.packet.q0 = read_number(p, "packet.", "q0", cfg.packet.q0);
  cfg.packet.p0 = read_optional(p, "packet.", "p0");
  cfg.packet.energy = read_optional(p, "packet.", "energy");
  if (!cfg.packet.p0 && !cfg.packet.energy) cfg.packet.energy = 0.98;
  cfg.packet.sigma0 = read_number(p, "packet.", "sigma0", cfg.packet.sigma0);
  const std::string conv = read_string(p, "packet.", "third_moment_convention", "paper");
  if (conv == "paper") {
    cfg.packet.third_moment_convention = ThirdMomentConvention::Paper;
  } else if (conv == "zero") {
    cfg.packet.third_moment_convention = ThirdMomentConvention::Zero;
  } else {
    throw ConfigError("field 'packet.third_moment_convention' must be 'paper' or 'zero'");
  }

  const json& in = section(root, "integrator");
  reject_unknown(in, "integrator.", {"rtol", "atol", "t_max", "max_step", "escape_radius", "sample_dt", "max_steps",
                                         "stop_on_constraint_violation"});
  cfg.integrator.rtol = read_number(in, "integrator.", "rtol", cfg.integrator.rtol);
  cfg.integrator.atol = read_number(in, "integrator.", "atol", cfg.integrator.atol);
  cfg.integrator.t_max = read_number(in, "integrator.", "t_max", cfg.integrator.t_max);
  cfg.integrator.max_step = read_number(in, "integrator.", "max_step", cfg.integrator.max_step);
  cfg.integrator.escape_radius =
      read_number(in, "integrator.", "escape_radius", 10.0 * cfg.model.potential.width());
  cfg.integrator.sample_dt = read_number(in, "integrator.", "sample_dt", cfg.integrator.sample_dt);
  const int max_steps = read_int(in, "integrator.", "max_steps", static_cast<int>(cfg.integrator.max_steps));
  if (max_steps <= 0) throw ConfigError("field 'integrator.max_steps' must be positive");
  cfg.integrator.max_steps = static_cast<std::size_t>(max_steps);
  cfg.integrator.stop_on_constraint_violation = read_bool(in, "integrator.", "stop_on_constraint_violation",
                                                          cfg.integrator.stop_on_constraint_violation);

  const json& c = section(root, "classify");
  reject_unknown(c, "classify.", {"margin"});
  cfg.margin = read_optional(c, "classify.", "margin");

  if (const json* s = member(root, "sweep")) {
    if (!s->is_object()) throw ConfigError("field 'sweep' must be an object");
    reject_unknown(*s, "sweep.", {"parameter", "start", "stop", "count"});
    SweepSpec sw;
    sw.parameter = read_string(*s, "sweep.", "parameter", sw.parameter);
    sw.start = read_number(*s, "sweep.", "start", sw.start);
    sw.stop = read_number(*s, "sweep.", "stop", sw.start);
    sw.count = read_int(*s, "sweep.", "count", sw.count);
    cfg.sweep = sw;
  }
  if (const json* s = member(root, "surface")) {
    if (!s->is_object()) throw ConfigError("field 'surface' must be an object");
    reject_unknown(*s, "surface.", {"q", "t"});
    SurfaceSpec sf;
    sf.q = read_grid(section(*s, "q"), "surface.q.", sf.q);
    sf.t = read_grid(section(*s, "t"), "surface.t.", sf.t);
    cfg.surface = sf;
  }

  const json& o = section(root, "output");
  reject_unknown(o, "output.", {"path", "format"});
  cfg.output_path = read_string(o, "output.", "path", cfg.output_path);
  cfg.output_format = read_string(o, "output.", "format", cfg.output_format);

  cfg.validate();
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["model"] = {{"mass", cfg.model.mass},
                {"hbar", cfg.model.hbar},
                {"order", cfg.model.order},
                {"veff_third_order_term", cfg.model.veff_third_order_term},
                {"potential",
                 {{"alpha", cfg.model.potential.alpha()},
                  {"a", cfg.model.potential.width()},
                  {"n", cfg.model.potential.exponent()}}}};
  nlohmann::ordered_json packet;
  packet["q0"] = cfg.packet.q0;
  if (cfg.packet.p0) packet["p0"] = *cfg.packet.p0;
  if (cfg.packet.energy) packet["energy"] = *cfg.packet.energy;
  packet["sigma0"] = cfg.packet.sigma0;
  packet["third_moment_convention"] =
      cfg.packet.third_moment_convention == ThirdMomentConvention::Paper ? "paper" : "zero";
  j["packet"] = packet;
  j["integrator"] = {{"rtol", cfg.integrator.rtol},
                     {"atol", cfg.integrator.atol},
                     {"t_max", cfg.integrator.t_max},
                     {"max_step", cfg.integrator.max_step},
                     {"escape_radius", cfg.integrator.escape_radius},
                     {"sample_dt", cfg.integrator.sample_dt},
                     {"max_steps", cfg.integrator.max_steps},
                     {"stop_on_constraint_violation", cfg.integrator.stop_on_constraint_violation}};
  j["classify"] = {{"margin", cfg.effective_margin()}};
  if (cfg.sweep) {
    j["sweep"] = {{"parameter", cfg.sweep->parameter},
                  {"start", cfg.sweep->start},
                  {"stop", cfg.sweep->stop},
                  {"count", cfg.sweep->count}};
  }
  if (cfg.surface) j["surface"] = {{"q", grid_json(cfg.surface->q)}, {"t", grid_json(cfg.surface->t)}};
  j["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
  return j;
}

}  // namespace momentous
