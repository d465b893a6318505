#include "billiard/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "billiard/error.hpp"
#include "billiard/io.hpp"

namespace billiard {

using nlohmann::json;

namespace {

json window_json(const SpectrumWindow& w) { return {{"k_min", w.k_min}, {"k_max", w.k_max}, {"modes", w.modes}}; }

json to_tree(const RunConfig& c) {
  json j;
  const auto& g = c.geometry;
  j["geometry"] = {{"kind", g.kind},
                   {"alpha", g.darmstadt.alpha},
                   {"beta", g.darmstadt.beta},
                   {"gamma", g.darmstadt.gamma},
                   {"lambda", g.darmstadt.lambda},
                   {"height", g.height},
                   {"length", g.length},
                   {"path", g.path},
                   {"grid_size", g.grid_size}};
  const auto& p = c.perturbation;
  j["perturbation"] = {{"kind", p.kind},     {"amplitude", p.amplitude}, {"cycles", p.cycles},
                       {"blend", p.blend},       {"eta", p.eta},       {"pieces", p.pieces},       {"distribution", p.distribution},
                       {"seed", p.seed}};
  j["basis"] = {{"m_max", c.basis.m_max}, {"n_max", c.basis.n_max}, {"k_keep", c.basis.k_keep}};
  const auto& s = c.sweep;
  j["sweep"] = {{"k_min", s.k_min},
                {"k_max", s.k_max},
                {"points", s.points},
                {"phase", s.phase},
                {"skip_tolerance", s.skip_tolerance}};
  const auto& sp = c.spectrum;
  json windows = json::array();
  for (const auto& w : sp.windows) windows.push_back(window_json(w));
  j["spectrum"] = {{"windows", windows},
                   {"t11", window_json(sp.t11)},
                   {"dk", sp.dk},
                   {"zero_pad", sp.zero_pad},
                   {"hann", sp.hann},
                   {"max_length", sp.max_length},
                   {"peak_threshold", sp.peak_threshold}};
  const auto& b = c.barrier;
  j["barrier"] = {{"v0", b.v0}, {"m_trunc", b.m_trunc}, {"e_min", b.e_min}, {"e_max", b.e_max}, {"points", b.points}};
  const auto& t = c.two_body;
  j["two_body"] = {{"potential", t.potential}, {"form", t.form},     {"strength", t.strength},
                   {"range", t.range},         {"order", t.order}, {"u_order", t.u_order},   {"states", t.states},
                   {"check_convergence", t.check_convergence}};
  j["output_dir"] = c.output_dir;
  j["cache"] = c.cache;
  j["threads"] = c.threads;
  return j;
}

// Reads object members into the matching fields of `target`, rejecting keys
// the default tree does not have and values of a different JSON type.
void merge_strict(json& target, const json& source, const std::string& where) {
  if (!source.is_object()) throw InvalidInput("config: '" + where + "' must be an object");
  for (auto it = source.begin(); it != source.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!target.contains(it.key())) throw InvalidInput("config: unknown key '" + key + "'");
    json& slot = target[it.key()];
    const json& value = it.value();
    if (slot.is_object()) {
      merge_strict(slot, value, key);
    } else if (slot.is_number()) {
      if (!value.is_number()) throw InvalidInput("config: '" + key + "' must be a number");
      if ((slot.is_number_integer() || slot.is_number_unsigned()) && value.is_number_float()) {
        throw InvalidInput("config: '" + key + "' must be an integer");
      }
      if (slot.is_number_unsigned() && value.is_number_integer() && value.get<long long>() < 0) {
        throw InvalidInput("config: '" + key + "' must be non-negative");
      }
      slot = value;
    } else if (slot.type() != value.type()) {
      throw InvalidInput("config: '" + key + "' has the wrong type");
    } else {
      slot = value;
    }
  }
}

SpectrumWindow window_from(const json& j, const std::string& where) {
  json base = window_json(SpectrumWindow{});
  merge_strict(base, j, where);
  return {base["k_min"].get<double>(), base["k_max"].get<double>(), base["modes"].get<int>()};
}

RunConfig from_tree(const json& j) {
  RunConfig c;
  const auto& g = j["geometry"];
  c.geometry.kind = g["kind"];
  c.geometry.darmstadt = {g["alpha"], g["beta"], g["gamma"], g["lambda"]};
  c.geometry.height = g["height"];
  c.geometry.length = g["length"];
  c.geometry.path = g["path"];
  c.geometry.grid_size = g["grid_size"];
  const auto& p = j["perturbation"];
  c.perturbation = {p["kind"], p["amplitude"], p["cycles"], p["blend"], p["eta"], p["pieces"], p["distribution"], p["seed"]};
  c.basis.m_max = j["basis"]["m_max"];
  c.basis.n_max = j["basis"]["n_max"];
  c.basis.k_keep = j["basis"]["k_keep"];
  const auto& s = j["sweep"];
  c.sweep = {s["k_min"], s["k_max"], s["points"], s["phase"], s["skip_tolerance"]};
  const auto& sp = j["spectrum"];
  c.spectrum.windows.clear();
  for (std::size_t i = 0; i < sp["windows"].size(); ++i) {
    c.spectrum.windows.push_back(window_from(sp["windows"][i], "spectrum.windows[" + std::to_string(i) + "]"));
  }
  c.spectrum.t11 = window_from(sp["t11"], "spectrum.t11");
  c.spectrum.dk = sp["dk"];
  c.spectrum.zero_pad = sp["zero_pad"];
  c.spectrum.hann = sp["hann"];
  c.spectrum.max_length = sp["max_length"];
  c.spectrum.peak_threshold = sp["peak_threshold"];
  const auto& b = j["barrier"];
  c.barrier = {b["v0"], b["m_trunc"], b["e_min"], b["e_max"], b["points"]};
  const auto& t = j["two_body"];
  c.two_body = {t["potential"], t["form"], t["strength"], t["range"], t["order"], t["u_order"], t["states"],
                t["check_convergence"]};
  c.output_dir = j["output_dir"];
  c.cache = j["cache"];
  c.threads = j["threads"];
  return c;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput("config: " + message);
}

}  // namespace

void RunConfig::validate() const {
  require(geometry.kind == "darmstadt" || geometry.kind == "rectangle" || geometry.kind == "csv",
          "geometry.kind must be darmstadt, rectangle or csv");
  if (geometry.kind == "darmstadt") geometry.darmstadt.validate();
  if (geometry.kind == "rectangle") require(geometry.height > 0.0 && geometry.length > 0.0, "rectangle sides must be positive");
  if (geometry.kind == "csv") require(!geometry.path.empty(), "geometry.path is required for csv geometry");
  require(is_power_of_two(geometry.grid_size) && geometry.grid_size >= 2 * basis.m_max,
          "geometry.grid_size must be a power of two >= 2 m_max");
  require(perturbation.kind == "none" || perturbation.kind == "wiggle" || perturbation.kind == "disorder",
          "perturbation.kind must be none, wiggle or disorder");
  require(perturbation.distribution == "uniform" || perturbation.distribution == "gaussian",
          "perturbation.distribution must be uniform or gaussian");
  require(perturbation.blend > 0.0 && perturbation.blend < 0.45, "perturbation.blend must lie in (0, 0.45)");
  require(perturbation.eta >= 0.0 && perturbation.pieces >= 2 && perturbation.cycles >= 1,
          "perturbation needs eta >= 0, pieces >= 2, cycles >= 1");
  basis.validate();
  require(sweep.k_min > 0.0 && sweep.k_max > sweep.k_min && sweep.points >= 2, "sweep needs 0 < k_min < k_max, points >= 2");
  require(sweep.k_max < basis.n_max, "sweep.k_max must stay below n_max lead channels");
  require(sweep.phase == "interface" || sweep.phase == "global", "sweep.phase must be interface or global");
  require(sweep.skip_tolerance > 0.0, "sweep.skip_tolerance must be positive");
  for (const auto& w : spectrum.windows) {
    require(w.k_min > 0.0 && w.k_max > w.k_min && w.modes >= 1, "spectrum windows need 0 < k_min < k_max, modes >= 1");
    require(w.modes <= static_cast<int>(w.k_min + 1e-9), "spectrum window opens fewer channels than its modes");
  }
  require(spectrum.t11.k_min > 0.0 && spectrum.t11.k_max > spectrum.t11.k_min, "spectrum.t11 window is empty");
  require(spectrum.dk > 0.0 && spectrum.zero_pad >= 1 && spectrum.max_length > 0.0, "spectrum dk, zero_pad, max_length");
  require(spectrum.peak_threshold >= 0.0 && spectrum.peak_threshold < 1.0, "spectrum.peak_threshold in [0, 1)");
  require(barrier.v0 >= 0.0 && barrier.m_trunc >= 1 && barrier.e_min > 0.0 && barrier.e_max > barrier.e_min &&
              barrier.points >= 2,
          "barrier needs v0 >= 0, m_trunc >= 1, 0 < e_min < e_max, points >= 2");
  require(two_body.potential == "gaussian" || two_body.potential == "contact" || two_body.potential == "constant",
          "two_body.potential must be gaussian, contact or constant");
  require(two_body.form == "euclidean" || two_body.form == "separate", "two_body.form must be euclidean or separate");
  require(two_body.order >= 8 && (two_body.u_order == 0 || two_body.u_order >= 8) && two_body.states >= 1 &&
              two_body.states <= basis.k_keep,
          "two_body needs order >= 8, u_order 0 or >= 8 and 1 <= states <= k_keep");
  require(two_body.range > 0.0, "two_body.range must be positive");
  require(!output_dir.empty(), "output_dir must not be empty");
}

std::string RunConfig::to_json() const { return to_tree(*this).dump(2); }

RunConfig RunConfig::from_json(std::string_view text) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  json tree = to_tree(RunConfig{});
  // Window arrays are free-length; check each element separately below.
  if (parsed.is_object() && parsed.contains("spectrum") && parsed["spectrum"].is_object() &&
      parsed["spectrum"].contains("windows")) {
    if (!parsed["spectrum"]["windows"].is_array()) throw InvalidInput("config: 'spectrum.windows' must be an array");
    tree["spectrum"]["windows"] = parsed["spectrum"]["windows"];
    parsed["spectrum"].erase("windows");
  }
  merge_strict(tree, parsed, "");
  try {
    return from_tree(tree);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw InvalidInput("override must look like key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  // Build a nested object {a: {b: value}} and merge it strictly.
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos;) {
    parts.push_back(rest.substr(0, pos));
    rest = rest.substr(pos + 1);
  }
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  json tree = to_tree(*this);
  if (parts.size() == 2 && parts[0] == "spectrum" && parts[1] == "windows") {
    if (!value.is_array()) throw InvalidInput("config: 'spectrum.windows' must be an array");
    tree["spectrum"]["windows"] = value;
  } else {
    merge_strict(tree, patch, "");
  }
  *this = from_tree(tree);
}

std::string RunConfig::hash() const { return hex64(fnv1a64(to_tree(*this).dump())); }

}  // namespace billiard
