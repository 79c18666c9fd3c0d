#include "phasegbs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "phasegbs/io.hpp"
#include "phasegbs/quadrature.hpp"
#include "phasegbs/rng.hpp"

namespace phasegbs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t get_unsigned(const json& j, const std::string& key) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
    throw InputError("config key '" + key + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& key) {
  if (!j.is_number()) throw InputError("config key '" + key + "' must be a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw InputError("config key '" + key + "' must be a string");
  return j.get<std::string>();
}

std::string_view kind_name(TransmissionSource::Kind k) {
  using K = TransmissionSource::Kind;
  switch (k) {
    case K::identity: return "identity";
    case K::file: return "file";
    case K::random_unitary: return "random_unitary";
    case K::entanglement_chain: return "entanglement_chain";
    case K::scaled: return "scaled";
  }
  return "?";
}

TransmissionSource parse_transmission(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError("config key '" + where + "' must be an object");
  using K = TransmissionSource::Kind;
  TransmissionSource t;
  if (!j.contains("kind")) throw InputError("config key '" + where + ".kind' is required");
  const std::string kind = get_string(j.at("kind"), where + ".kind");
  if (kind == "identity") t.kind = K::identity;
  else if (kind == "file") t.kind = K::file;
  else if (kind == "random_unitary") t.kind = K::random_unitary;
  else if (kind == "entanglement_chain") t.kind = K::entanglement_chain;
  else if (kind == "scaled") t.kind = K::scaled;
  else throw InputError("config key '" + where + ".kind' has unknown value '" + kind + "'");

  for (const auto& [key, value] : j.items()) {
    const std::string name = where + "." + key;
    if (key == "kind") continue;
    if (key == "path" && t.kind == K::file) {
      t.path = get_string(value, name);
    } else if (key == "seed" && t.kind == K::random_unitary) {
      if (!value.is_null()) t.seed = get_unsigned(value, name);
    } else if (key == "factor" && t.kind == K::scaled) {
      t.factor = get_double(value, name);
    } else if (key == "inner" && t.kind == K::scaled) {
      t.inner = {parse_transmission(value, name)};
    } else {
      throw InputError("config key '" + name + "' is not valid for kind '" + kind + "'");
    }
  }
  return t;
}

ordered_json emit_transmission(const TransmissionSource& t) {
  using K = TransmissionSource::Kind;
  ordered_json j;
  j["kind"] = std::string(kind_name(t.kind));
  switch (t.kind) {
    case K::file: j["path"] = t.path; break;
    case K::random_unitary: j["seed"] = t.seed ? ordered_json(*t.seed) : ordered_json(nullptr); break;
    case K::scaled:
      j["factor"] = t.factor;
      if (!t.inner.empty()) j["inner"] = emit_transmission(t.inner.front());
      break;
    default: break;
  }
  return j;
}

void validate_transmission(const TransmissionSource& t, const std::string& where) {
  using K = TransmissionSource::Kind;
  if (t.kind == K::file && t.path.empty()) {
    throw InputError("config key '" + where + ".path' is required for kind 'file'");
  }
  if (t.kind == K::scaled) {
    if (!(std::isfinite(t.factor) && t.factor > 0.0)) {
      throw InputError("config key '" + where + ".factor' must be positive");
    }
    if (t.inner.size() != 1) {
      throw InputError("config key '" + where + ".inner' is required for kind 'scaled'");
    }
    validate_transmission(t.inner.front(), where + ".inner");
  } else if (!t.inner.empty()) {
    throw InputError("config key '" + where + ".inner' is only valid for kind 'scaled'");
  }
}

TransmissionMatrix build_transmission(const TransmissionSource& t, std::size_t modes,
                                      std::uint64_t master) {
  using K = TransmissionSource::Kind;
  switch (t.kind) {
    case K::identity: return TransmissionMatrix::identity(modes);
    case K::file: {
      auto m = load_transmission_matrix(t.path);
      if (m.cols() != modes) {
        throw InputError(t.path + ": matrix has " + std::to_string(m.cols()) +
                         " columns but mode_count is " + std::to_string(modes));
      }
      return m;
    }
    case K::random_unitary:
      return random_unitary(modes, t.seed ? *t.seed
                                          : derive_stream_seed(master, StreamDomain::random_unitary, 0));
    case K::entanglement_chain: return build_entanglement_unitary(modes);
    case K::scaled:
      return scale_transmission(build_transmission(t.inner.front(), modes, master), t.factor);
  }
  throw InputError("unknown transmission kind");
}

}  // namespace

std::string_view task_name(Task task) {
  switch (task) {
    case Task::simulate: return "simulate";
    case Task::compare: return "compare";
    case Task::entangle: return "entangle";
    case Task::oracle: return "oracle";
    case Task::selftest: return "selftest";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::simulate, Task::compare, Task::entangle, Task::oracle, Task::selftest}) {
    if (task_name(t) == name) return t;
  }
  throw InputError("unknown task '" + std::string(name) + "'");
}

RunConfig RunConfig::defaults(Task task) {
  RunConfig c;
  c.task = task;
  if (task == Task::entangle) {
    c.mode_count = 100;
    c.squeezing = 3.0;
    c.ordering = 0.5;
    c.transmission.kind = TransmissionSource::Kind::entanglement_chain;
  }
  return c;
}

RunConfig parse_config(std::string_view text, std::optional<Task> task) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");

  Task resolved = Task::simulate;
  if (j.contains("task")) resolved = parse_task(get_string(j.at("task"), "task"));
  if (task) resolved = *task;
  RunConfig c = RunConfig::defaults(resolved);

  for (const auto& [key, value] : j.items()) {
    if (key == "task") continue;
    else if (key == "mode_count") c.mode_count = get_unsigned(value, key);
    else if (key == "squeezing") c.squeezing = get_double(value, key);
    else if (key == "squeezed_modes") {
      if (value.is_null()) c.squeezed_modes.reset();
      else c.squeezed_modes = get_unsigned(value, key);
    }
    else if (key == "squeezing_file") c.squeezing_file = get_string(value, key);
    else if (key == "decoherence") c.decoherence = get_double(value, key);
    else if (key == "ordering") c.ordering = get_double(value, key);
    else if (key == "transmission") c.transmission = parse_transmission(value, key);
    else if (key == "group_sizes") {
      if (!value.is_array()) throw InputError("config key 'group_sizes' must be an array");
      c.group_sizes.clear();
      for (const auto& v : value) c.group_sizes.push_back(get_unsigned(v, key));
    } else if (key == "groups") {
      if (!value.is_array()) throw InputError("config key 'groups' must be an array of arrays");
      c.groups.clear();
      for (const auto& g : value) {
        if (!g.is_array()) throw InputError("config key 'groups' must be an array of arrays");
        std::vector<std::size_t> group;
        for (const auto& v : g) group.push_back(get_unsigned(v, key));
        c.groups.push_back(std::move(group));
      }
    }
    else if (key == "samples") c.samples = get_unsigned(value, key);
    else if (key == "subensembles") c.subensembles = get_unsigned(value, key);
    else if (key == "seed") c.seed = get_unsigned(value, key);
    else if (key == "patterns") c.patterns = get_string(value, key);
    else if (key == "out") c.out = get_string(value, key);
    else if (key == "min_count") c.min_count = get_double(value, key);
    else if (key == "probability_cutoff") c.probability_cutoff = get_double(value, key);
    else if (key == "oracle_method") c.oracle_method = get_string(value, key);
    else if (key == "photon_cutoff") c.photon_cutoff = get_unsigned(value, key);
    else if (key == "threads") c.threads = get_unsigned(value, key);
    else throw InputError("unknown config key '" + key + "'");
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Task> task) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), task);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string emit_config(const RunConfig& c, int indent) {
  ordered_json j;
  j["task"] = std::string(task_name(c.task));
  j["mode_count"] = c.mode_count;
  j["squeezing"] = c.squeezing;
  j["squeezed_modes"] = c.squeezed_modes ? ordered_json(*c.squeezed_modes) : ordered_json(nullptr);
  j["squeezing_file"] = c.squeezing_file;
  j["decoherence"] = c.decoherence;
  j["ordering"] = c.ordering;
  j["transmission"] = emit_transmission(c.transmission);
  j["group_sizes"] = c.group_sizes;
  j["groups"] = c.groups;
  j["samples"] = c.samples;
  j["subensembles"] = c.subensembles;
  j["seed"] = c.seed;
  j["patterns"] = c.patterns;
  j["out"] = c.out;
  j["min_count"] = c.min_count;
  j["probability_cutoff"] = c.probability_cutoff;
  j["oracle_method"] = c.oracle_method;
  j["photon_cutoff"] = c.photon_cutoff;
  j["threads"] = c.threads;
  return j.dump(indent);
}

void validate_config(const RunConfig& c) {
  if (c.mode_count == 0) throw InputError("config key 'mode_count' must be at least 1");
  if (c.squeezed_modes && *c.squeezed_modes > c.mode_count) {
    throw InputError("config key 'squeezed_modes' exceeds mode_count");
  }
  if (!std::isfinite(c.squeezing)) throw InputError("config key 'squeezing' must be finite");
  if (!(c.decoherence >= 0.0 && c.decoherence <= 1.0)) {
    throw InputError("config key 'decoherence' must lie in [0, 1]");
  }
  if (c.ordering != 0.0 && c.ordering != 0.5 && c.ordering != 1.0) {
    throw InputError("config key 'ordering' must be 0, 0.5 or 1");
  }
  if ((c.task == Task::simulate || c.task == Task::compare) && c.ordering != 0.0) {
    throw InputError("config key 'ordering' must be 0 for click statistics");
  }
  validate_transmission(c.transmission, "transmission");
  if (!c.group_sizes.empty() && !c.groups.empty()) {
    throw InputError("config keys 'group_sizes' and 'groups' are mutually exclusive");
  }
  std::size_t total = 0;
  for (std::size_t s : c.group_sizes) {
    if (s == 0) throw InputError("config key 'group_sizes' entries must be positive");
    total += s;
  }
  if (total > c.mode_count) throw InputError("config key 'group_sizes' sums past mode_count");
  std::set<std::size_t> seen;
  for (const auto& g : c.groups) {
    if (g.empty()) throw InputError("config key 'groups' contains an empty group");
    for (std::size_t i : g) {
      if (i >= c.mode_count) throw InputError("config key 'groups' has mode index out of range");
      if (!seen.insert(i).second) throw InputError("config key 'groups' repeats mode " + std::to_string(i));
    }
  }
  if (c.subensembles == 0) throw InputError("config key 'subensembles' must be at least 1");
  if (c.samples == 0 || c.samples % c.subensembles != 0) {
    throw InputError("config key 'samples' must be a positive multiple of 'subensembles'");
  }
  if (!(c.min_count >= 0.0)) throw InputError("config key 'min_count' must be non-negative");
  if (!(c.probability_cutoff >= 0.0)) {
    throw InputError("config key 'probability_cutoff' must be non-negative");
  }
  if (c.oracle_method != "gaussian" && c.oracle_method != "fock") {
    throw InputError("config key 'oracle_method' must be 'gaussian' or 'fock'");
  }
  if (c.photon_cutoff == 0) throw InputError("config key 'photon_cutoff' must be positive");
}

SqueezerSpec resolve_squeezers(const RunConfig& c) {
  SqueezerSpec spec;
  if (!c.squeezing_file.empty()) {
    spec.squeezing = load_squeezing_vector(c.squeezing_file);
    if (spec.squeezing.size() > c.mode_count) {
      throw InputError(c.squeezing_file + ": more squeezing values than mode_count");
    }
    spec.squeezing.resize(c.mode_count, 0.0);
    spec.decoherence = c.decoherence;
  } else if (c.task == Task::entangle) {
    spec = epr_chain_input_spec(c.mode_count, c.squeezing);
    spec.decoherence = c.decoherence;
  } else {
    spec = SqueezerSpec::uniform(c.mode_count, c.squeezed_modes.value_or(c.mode_count),
                                 c.squeezing, c.decoherence);
  }
  spec.validate();
  return spec;
}

TransmissionMatrix resolve_transmission(const RunConfig& c) {
  return build_transmission(c.transmission, c.mode_count, c.seed);
}

GroupPartition resolve_partition(const RunConfig& c, std::size_t output_modes) {
  if (!c.groups.empty()) return GroupPartition(c.groups, output_modes);
  if (!c.group_sizes.empty()) return GroupPartition::sequential(c.group_sizes, output_modes);
  return GroupPartition::single(output_modes);
}

EnsembleLayout resolve_layout(const RunConfig& c) {
  EnsembleLayout layout{c.subensembles, c.samples / c.subensembles};
  layout.validate();
  return layout;
}

}  // namespace phasegbs
