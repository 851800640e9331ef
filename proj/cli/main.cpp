// Copyright 2026 The Perchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// perchctl: scenario-driven front end for the perching simulator.
//
// Exit codes: 0 on success (mission PERCHED or AIRBORNE), 1 on usage or
// I/O errors, 2 when a simulated mission fails (SLIPPED, TIMEOUT, ABORTED
// or an unstable integration) or any sweep case fails.
//
// PERCHCTL_OUT_DIR, when set, prefixes relative output paths.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "perchsim.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMissionFailed = 2;

struct ScenarioDeleter {
  void operator()(ps_scenario* sc) const { ps_scenario_free(sc); }
};
using ScenarioPtr = std::unique_ptr<ps_scenario, ScenarioDeleter>;

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  ps_string_free(s);
  return out;
}

bool check(ps_status status, const char* what) {
  if (status == PS_OK) return true;
  std::cerr << "error: " << what << ": " << ps_last_error() << "\n";
  return false;
}

void apply_dotted(json& doc, const std::string& dotted, const json& value) {
  std::string key = dotted;
  for (auto& ch : key) {
    if (ch == '.') ch = '/';
  }
  doc[json::json_pointer("/" + key)] = value;
}

// Scenario document from --config plus --set overrides (dotted keys,
// e.g. --set branch.diameter=0.05).
bool load_document(const std::string& config_path,
                   const std::vector<std::string>& overrides, json* doc) {
  *doc = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open " << config_path << "\n";
      return false;
    }
    try {
      in >> *doc;
    } catch (const json::exception& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return false;
    }
    if (!doc->is_object()) {
      std::cerr << "error: " << config_path
                << ": top level must be an object\n";
      return false;
    }
  }
  for (const std::string& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return false;
    }
    json parsed;
    try {
      parsed = json::parse(kv.substr(eq + 1));
    } catch (const json::exception&) {
      parsed = kv.substr(eq + 1);  // bare strings (strategy names) pass through
    }
    apply_dotted(*doc, kv.substr(0, eq), parsed);
  }
  return true;
}

ScenarioPtr scenario_from_document(const json& doc) {
  ps_scenario* raw = nullptr;
  if (!check(ps_scenario_from_json(doc.dump().c_str(), &raw),
             "invalid scenario")) {
    return nullptr;
  }
  return ScenarioPtr(raw);
}

std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-" || path.front() == '/') return path;
  const char* dir = std::getenv("PERCHCTL_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + path;
}

bool write_or_print(const std::string& text, const std::string& path) {
  std::string resolved = resolve_output(path);
  if (resolved.empty() || resolved == "-") {
    std::cout << text;
    return true;
  }
  std::filesystem::path parent = std::filesystem::path(resolved).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  std::ofstream out(resolved);
  if (!out) {
    std::cerr << "error: cannot write " << resolved << "\n";
    return false;
  }
  out << text;
  return true;
}

const char* outcome_name(int code) {
  switch (code) {
    case PS_OUTCOME_PERCHED: return "PERCHED";
    case PS_OUTCOME_AIRBORNE: return "AIRBORNE";
    case PS_OUTCOME_SLIPPED: return "SLIPPED";
    case PS_OUTCOME_TIMEOUT: return "TIMEOUT";
    case PS_OUTCOME_ABORTED: return "ABORTED";
  }
  return "UNKNOWN";
}

int cmd_simulate(const json& doc, const std::string& format,
                 const std::string& out_path, const std::string& csv_path) {
  ScenarioPtr sc = scenario_from_document(doc);
  if (!sc) return kExitUsage;
  int outcome = PS_OUTCOME_ABORTED;
  char* trace_json = nullptr;
  char* trace_csv = nullptr;
  ps_status status = ps_simulate(sc.get(), &outcome, &trace_json,
                                 csv_path.empty() ? nullptr : &trace_csv);
  if (status != PS_OK) {
    std::cerr << "error: simulation failed: " << ps_last_error() << "\n";
    return status == PS_ERR_SIMULATION ? kExitMissionFailed : kExitUsage;
  }
  std::string body = take_string(trace_json);
  if (!csv_path.empty() &&
      !write_or_print(take_string(trace_csv), csv_path)) {
    return kExitUsage;
  }
  if (format == "csv") {
    json j = json::parse(body);
    std::ostringstream line;
    line << "outcome,final_loops,drone_total_mah,pod_total_mah\n"
         << outcome_name(outcome) << ',' << j["final_loops"].get<int>() << ','
         << j["drone_total_mah"].get<double>() << ','
         << j["pod_total_mah"].get<double>() << '\n';
    if (!write_or_print(line.str(), out_path)) return kExitUsage;
  } else {
    if (!write_or_print(body, out_path)) return kExitUsage;
  }
  bool success =
      outcome == PS_OUTCOME_PERCHED || outcome == PS_OUTCOME_AIRBORNE;
  return success ? kExitOk : kExitMissionFailed;
}

int cmd_counterweight(const json& doc, int loops_from, int loops_to,
                      const std::vector<double>& angles_deg, double ratio,
                      const std::string& format, const std::string& out_path) {
  ScenarioPtr sc = scenario_from_document(doc);
  if (!sc) return kExitUsage;
  if (loops_from < 1 || loops_to < loops_from) {
    std::cerr << "error: need 1 <= --loops-from <= --loops-to\n";
    return kExitUsage;
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "loops,angle_deg,min_ratio,feasible_at_" << ratio << "\n";
  for (int loops = loops_from; loops <= loops_to; ++loops) {
    for (double deg : angles_deg) {
      double incline = deg * 3.14159265358979323846 / 180.0;
      double min_ratio = 0.0;
      if (!check(ps_min_counterweight_ratio(sc.get(), loops, incline,
                                            &min_ratio),
                 "counterweight")) {
        return kExitUsage;
      }
      // min_ratio saturates at 1.0 in the axial-slide regime, so the
      // threshold comparison covers the hard rule too.
      bool feasible = ratio >= min_ratio;
      rows.push_back({{"loops", loops},
                      {"angle_deg", deg},
                      {"min_ratio", min_ratio},
                      {"feasible", feasible}});
      csv << loops << ',' << deg << ',' << min_ratio << ','
          << (feasible ? 1 : 0) << '\n';
    }
  }
  std::string text =
      format == "csv"
          ? csv.str()
          : json{{"counterweight_ratio", ratio}, {"rows", rows}}.dump(2) + "\n";
  return write_or_print(text, out_path) ? kExitOk : kExitUsage;
}

int cmd_breakeven(json doc, bool paper_calibrated, double maneuver_joules,
                  double mission_time, const std::string& format,
                  const std::string& out_path) {
  if (paper_calibrated) {
    double exponent = 0.0;
    if (!check(ps_calibrated_mass_exponent(&exponent), "breakeven")) {
      return kExitUsage;
    }
    apply_dotted(doc, "power.mass_exponent", exponent);
  }
  ScenarioPtr sc = scenario_from_document(doc);
  if (!sc) return kExitUsage;
  double fraction = 0.0;
  if (!check(ps_break_even_idle_fraction(sc.get(), maneuver_joules,
                                         mission_time, &fraction),
             "breakeven")) {
    return kExitUsage;
  }
  std::string text;
  if (format == "csv") {
    std::ostringstream out;
    out << "maneuver_joules,mission_time,idle_fraction\n"
        << maneuver_joules << ',' << mission_time << ',' << fraction << '\n';
    text = out.str();
  } else {
    text = json{{"maneuver_joules", maneuver_joules},
                {"mission_time", mission_time},
                {"idle_fraction", fraction}}.dump(2) + "\n";
  }
  return write_or_print(text, out_path) ? kExitOk : kExitUsage;
}

int cmd_critdist(const json& doc, double from, double to, int steps,
                 const std::string& format, const std::string& out_path) {
  if (steps < 1 || to < from || from < 0.0) {
    std::cerr << "error: need --from >= 0, --to >= --from, --steps >= 1\n";
    return kExitUsage;
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "branch_diameter,drone_critical_m,pod_critical_m\n";
  for (int i = 0; i < steps; ++i) {
    double diameter =
        steps == 1 ? from : from + (to - from) * i / (steps - 1);
    json case_doc = doc;
    apply_dotted(case_doc, "branch.diameter", diameter);
    ScenarioPtr sc = scenario_from_document(case_doc);
    if (!sc) return kExitUsage;
    double drone = 0.0, pod = 0.0;
    if (!check(ps_critical_distance(sc.get(), 0, &drone), "critdist") ||
        !check(ps_critical_distance(sc.get(), 1, &pod), "critdist")) {
      return kExitUsage;
    }
    rows.push_back({{"branch_diameter", diameter},
                    {"drone_m", drone},
                    {"pod_m", pod}});
    csv << diameter << ',' << drone << ',' << pod << '\n';
  }
  std::string text = format == "csv" ? csv.str()
                                     : json{{"rows", rows}}.dump(2) + "\n";
  return write_or_print(text, out_path) ? kExitOk : kExitUsage;
}

struct SweepResult {
  json record;
  bool failed = false;
};

// Sweep file: {"parameter": "vehicles.pod_mass", "values": [...],
//              "parallelism": 4}
int cmd_sweep(const json& base, const std::string& sweep_path, int threads,
              const std::string& out_path) {
  std::ifstream in(sweep_path);
  if (!in) {
    std::cerr << "error: cannot open " << sweep_path << "\n";
    return kExitUsage;
  }
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    std::cerr << "error: " << sweep_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  if (!spec.is_object() || !spec.contains("parameter") ||
      !spec.contains("values") || !spec["values"].is_array() ||
      spec["values"].empty()) {
    std::cerr << "error: sweep file needs {\"parameter\": dotted.key, "
                 "\"values\": [...]}\n";
    return kExitUsage;
  }
  std::string parameter = spec["parameter"].get<std::string>();
  const json& values = spec["values"];
  if (threads <= 0 && spec.contains("parallelism")) {
    threads = spec["parallelism"].get<int>();
  }

  std::vector<SweepResult> results(values.size());
  std::mutex index_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(index_mutex);
        if (next >= values.size()) return;
        i = next++;
      }
      json record;
      record["index"] = static_cast<int>(i);
      record["value"] = values[i];
      json doc = base;
      apply_dotted(doc, parameter, values[i]);
      ps_scenario* raw = nullptr;
      if (ps_scenario_from_json(doc.dump().c_str(), &raw) != PS_OK) {
        record["error"] = ps_last_error();
        results[i] = {std::move(record), true};
        continue;
      }
      ScenarioPtr sc(raw);
      int outcome = PS_OUTCOME_ABORTED;
      char* trace_json = nullptr;
      if (ps_simulate(sc.get(), &outcome, &trace_json, nullptr) != PS_OK) {
        record["error"] = ps_last_error();
        results[i] = {std::move(record), true};
        continue;
      }
      json trace = json::parse(take_string(trace_json));
      record["outcome"] = outcome_name(outcome);
      record["final_loops"] = trace["final_loops"];
      record["drone_total_mah"] = trace["drone_total_mah"];
      record["pod_total_mah"] = trace["pod_total_mah"];
      bool ok =
          outcome == PS_OUTCOME_PERCHED || outcome == PS_OUTCOME_AIRBORNE;
      results[i] = {std::move(record), !ok};
    }
  };

  int n_threads = threads > 0 ? threads
                              : static_cast<int>(
                                    std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  json cases = json::array();
  json failed_indices = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    cases.push_back(results[i].record);
    if (results[i].failed) failed_indices.push_back(static_cast<int>(i));
  }
  json report{{"parameter", parameter},
              {"cases", cases},
              {"total", static_cast<int>(results.size())},
              {"failed_indices", failed_indices}};
  if (!write_or_print(report.dump(2) + "\n", out_path)) return kExitUsage;
  return failed_indices.empty() ? kExitOk : kExitMissionFailed;
}

int cmd_schema(const std::string& out_path) {
  char* text = nullptr;
  if (!check(ps_schema_json(&text), "schema")) return kExitUsage;
  return write_or_print(take_string(text), out_path) ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensile perching simulator and analytical toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, csv_path, strategy, format = "json";
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Scenario JSON file");
    cmd->add_option("-s,--set", overrides,
                    "Override a scenario field (dotted.key=value)");
    cmd->add_option("-o,--output", out_path, "Output file ('-' for stdout)");
    cmd->add_option("-f,--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* sim = app.add_subcommand("simulate", "Run the scenario's strategy");
  add_common(sim);
  sim->add_option("--strategy", strategy, "Strategy override")
      ->check(CLI::IsMember({"duo_perch", "solo_perch",
                             "duo_disentangle_winding",
                             "duo_disentangle_propeller", "solo_disentangle"}));
  sim->add_option("--trace-csv", csv_path, "Write the state trace CSV here");

  CLI::App* cw = app.add_subcommand(
      "counterweight", "Minimum counterweight ratio per loop count and angle");
  add_common(cw);
  int loops_from = 1, loops_to = 4;
  std::vector<double> angles_deg;
  double ratio = 0.308;
  cw->add_option("--loops-from", loops_from, "Smallest loop count");
  cw->add_option("--loops-to", loops_to, "Largest loop count");
  cw->add_option("--angles-deg", angles_deg,
                 "Branch incline angles in degrees (default 0 15 30)");
  cw->add_option("--ratio", ratio,
                 "Counterweight ratio tested in the feasibility column");

  CLI::App* be =
      app.add_subcommand("breakeven", "Break-even idle-time fraction");
  add_common(be);
  double maneuver_joules = 0.0, mission_time = 3600.0;
  std::string preset;
  be->add_option("--preset", preset, "Power-model preset")
      ->check(CLI::IsMember({"paper-calibrated", "momentum-theory"}));
  be->add_option("--maneuver-joules", maneuver_joules,
                 "Perch plus disentangle energy, J");
  be->add_option("--mission-time", mission_time, "Mission duration, s")
      ->check(CLI::PositiveNumber);

  CLI::App* cd = app.add_subcommand(
      "critdist", "Closest safe branch approach over a diameter range");
  add_common(cd);
  double from = -1.0, to = -1.0;
  int steps = 1;
  cd->add_option("--from", from, "Smallest branch diameter, m");
  cd->add_option("--to", to, "Largest branch diameter, m");
  cd->add_option("--steps", steps, "Number of rows");

  CLI::App* sw = app.add_subcommand(
      "sweep", "Run a batch of scenarios over one swept parameter");
  sw->add_option("-c,--config", config_path, "Scenario JSON file");
  sw->add_option("-s,--set", overrides,
                 "Override a scenario field (dotted.key=value)");
  sw->add_option("-o,--output", out_path, "Output file ('-' for stdout)");
  std::string sweep_path;
  int threads = 0;
  sw->add_option("cases", sweep_path,
                 "JSON file: {parameter, values, parallelism}")
      ->required();
  sw->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");

  CLI::App* sch =
      app.add_subcommand("schema", "Print the scenario JSON schema");
  sch->add_option("-o,--output", out_path, "Output file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  json doc;
  if (!sch->parsed() && !load_document(config_path, overrides, &doc)) {
    return kExitUsage;
  }

  if (sim->parsed()) {
    if (!strategy.empty()) apply_dotted(doc, "strategy", strategy);
    return cmd_simulate(doc, format, out_path, csv_path);
  }
  if (cw->parsed()) {
    if (angles_deg.empty()) angles_deg = {0.0, 15.0, 30.0};
    return cmd_counterweight(doc, loops_from, loops_to, angles_deg, ratio,
                             format, out_path);
  }
  if (be->parsed()) {
    return cmd_breakeven(doc, preset == "paper-calibrated", maneuver_joules,
                         mission_time, format, out_path);
  }
  if (cd->parsed()) {
    if (from < 0.0 && to < 0.0) {
      // Single row at the scenario's own diameter.
      ScenarioPtr sc = scenario_from_document(doc);
      if (!sc) return kExitUsage;
      char* text = nullptr;
      if (ps_scenario_to_json(sc.get(), &text) != PS_OK) return kExitUsage;
      json full = json::parse(take_string(text));
      from = to = full["branch"]["diameter"].get<double>();
      steps = 1;
    }
    return cmd_critdist(doc, from, to, steps, format, out_path);
  }
  if (sw->parsed()) {
    return cmd_sweep(doc, sweep_path, threads, out_path);
  }
  if (sch->parsed()) {
    return cmd_schema(out_path);
  }
  return kExitUsage;
}
