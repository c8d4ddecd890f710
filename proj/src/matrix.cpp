#include "delaudit/matrix.hpp"

#include <future>
#include <map>
#include <vector>

#include <json.hpp>

#include "delaudit/audit_runner.hpp"
#include "delaudit/fixtures.hpp"

namespace delaudit {

namespace {

using nlohmann::json;

struct Cell {
  std::string controller;
  std::string definition;
  std::vector<json> configs;  // pass iff every config passes
  bool expected = true;       // reference verdict for control/confidentiality
};

json controller_json(const char* name, double eps, int T, int B, int w) {
  json j;
  j["name"] = name;
  j["eps"] = eps;
  j["T"] = T;
  j["B"] = B;
  j["w"] = w;
  return j;
}

json control_cfg(const json& controller, const std::string& fixture,
                 const std::string& simulator, double eps, double delta,
                 bool add_deficit, uint64_t seed) {
  json j;
  j["definition"] = "control";
  j["controller"] = controller;
  j["fixture"] = fixture;
  j["simulator"] = simulator;
  j["eps"] = eps;
  j["delta"] = delta;
  j["add_tail_deficit"] = add_deficit;
  j["mode"] = "exact";
  j["seed"] = seed;
  return j;
}

json conf_cfg(const json& controller, const std::string& fixture, double eps, double delta,
              bool add_deficit, uint64_t seed) {
  json j;
  j["definition"] = "confidentiality";
  j["controller"] = controller;
  j["fixture"] = fixture;
  j["eps"] = eps;
  j["delta"] = delta;
  j["add_tail_deficit"] = add_deficit;
  j["mode"] = "exact";
  j["seed"] = seed;
  return j;
}

json ahi_cfg(const json& impl, const json& adversary, const std::string& variant, double eps,
             double delta, uint64_t seed) {
  json j;
  j["definition"] = "ahi";
  j["impl"] = impl;
  j["adversary"] = adversary;
  j["variant"] = variant;
  j["eps"] = eps;
  j["delta"] = delta;
  j["mode"] = "exact";
  j["seed"] = seed;
  return j;
}

std::vector<Cell> build_cells(uint64_t seed) {
  std::vector<Cell> cells;
  json cloud = {{"name", "cloud_storage"}};
  json bulletin = {{"name", "bulletin_board"}};
  json batch = controller_json("batch_noisy_count", 1.0, 2, 16, 10);
  json directory = controller_json("directory_stats", 1.0, 2, 12, 10);

  auto fixtures = [&](const std::string& family) { return fixtures_for_family(family); };

  // Deletion-as-control: all four touchstones comply.
  Cell c;
  c.controller = "cloud_storage";
  c.definition = "control";
  for (const auto& fx : fixtures("cloud")) {
    c.configs.push_back(control_cfg(cloud, fx, "identity", 0, 0, false, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "bulletin_board";
  c.definition = "control";
  for (const auto& fx : fixtures("bulletin")) {
    c.configs.push_back(control_cfg(bulletin, fx, "identity", 0, 0, false, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "batch_noisy_count";
  c.definition = "control";
  for (const auto& fx : fixtures("batch")) {
    c.configs.push_back(control_cfg(batch, fx, "batch", 1.0, 0.0, true, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "directory_stats";
  c.definition = "control";
  for (const auto& fx : fixtures("directory")) {
    c.configs.push_back(control_cfg(directory, fx, "paired", 1.0, 0.001, true, seed));
  }
  cells.push_back(c);

  // Deletion-as-confidentiality: the social functionalities cannot comply.
  c = Cell{};
  c.controller = "cloud_storage";
  c.definition = "confidentiality";
  for (const auto& fx : fixtures("cloud")) {
    c.configs.push_back(conf_cfg(cloud, fx, 0, 0, false, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "bulletin_board";
  c.definition = "confidentiality";
  c.expected = false;
  for (const auto& fx : fixtures("bulletin")) {
    c.configs.push_back(conf_cfg(bulletin, fx, 0.0, 0.01, false, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "batch_noisy_count";
  c.definition = "confidentiality";
  for (const auto& fx : fixtures("batch")) {
    c.configs.push_back(conf_cfg(batch, fx, 1.0, 0.01, true, seed));
  }
  cells.push_back(c);

  c = Cell{};
  c.controller = "directory_stats";
  c.definition = "confidentiality";
  c.expected = false;
  for (const auto& fx : fixtures("directory")) {
    c.configs.push_back(conf_cfg(directory, fx, 0.0, 0.05, false, seed));
  }
  cells.push_back(c);

  // Adaptive history independence of the backing structures. The batch and
  // directory controllers retain mechanism influence past deletion.
  c = Cell{};
  c.controller = "cloud_storage";
  c.definition = "ahi";
  c.configs.push_back(ahi_cfg({{"name", "sorted_list_dict"}},
                              {{"name", "shuffler"}, {"ops", 9}, {"seed", 5}}, "identical", 0,
                              0, seed));
  cells.push_back(c);

  c = Cell{};
  c.controller = "bulletin_board";
  c.definition = "ahi";
  c.configs.push_back(ahi_cfg({{"name", "bulletin_list"}},
                              {{"name", "shuffler"}, {"ops", 6}, {"seed", 3}}, "identical", 0,
                              0, seed));
  cells.push_back(c);

  c = Cell{};
  c.controller = "batch_noisy_count";
  c.definition = "ahi";
  c.expected = false;
  c.configs.push_back(ahi_cfg({{"name", "batch_count"}, {"eps", 0.5}, {"B", 32}, {"w", 12}},
                              {{"name", "batch_separation"}, {"ops", 8}}, "identical", 2.0,
                              0.5, seed));
  cells.push_back(c);

  c = Cell{};
  c.controller = "directory_stats";
  c.definition = "ahi";
  c.expected = false;
  c.configs.push_back(
      ahi_cfg({{"name", "directory_counter"}, {"T", 2}, {"eps", 1.0}, {"B", 16}, {"w", 10}},
              {{"name", "directory_separation"}, {"ops", 12}}, "identical", 2.0, 0.2, seed));
  cells.push_back(c);

  return cells;
}

}  // namespace

MatrixResult run_matrix(uint64_t seed, int jobs) {
  auto cells = build_cells(seed);

  // Independent cells may run in parallel; assembly order is fixed.
  std::vector<std::future<std::pair<bool, std::vector<bool>>>> futures;
  auto run_cell = [](const Cell& cell) {
    std::vector<bool> per_fixture;
    bool pass = true;
    for (const auto& cfg : cell.configs) {
      bool ok = run_audit_config(cfg.dump()).passed;
      per_fixture.push_back(ok);
      pass = pass && ok;
    }
    return std::make_pair(pass, per_fixture);
  };

  size_t parallel = jobs < 1 ? 1 : static_cast<size_t>(jobs);
  std::vector<std::pair<bool, std::vector<bool>>> results(cells.size());
  for (size_t start = 0; start < cells.size(); start += parallel) {
    size_t end = std::min(cells.size(), start + parallel);
    futures.clear();
    for (size_t i = start; i < end; ++i) {
      futures.push_back(std::async(std::launch::async, run_cell, cells[i]));
    }
    for (size_t i = start; i < end; ++i) results[i] = futures[i - start].get();
  }

  json out;
  out["seed"] = seed;
  json arr = json::array();
  bool reference_ok = true;
  std::string csv = "controller,control,confidentiality,ahi\n";
  std::map<std::string, std::map<std::string, bool>> grid;
  for (size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    bool pass = results[i].first;
    grid[cell.controller][cell.definition] = pass;
    json c;
    c["controller"] = cell.controller;
    c["definition"] = cell.definition;
    c["passed"] = pass;
    c["expected"] = cell.expected;
    json fx = json::array();
    for (bool b : results[i].second) fx.push_back(b);
    c["fixture_verdicts"] = fx;
    arr.push_back(c);
    if (cell.definition != "ahi" && pass != cell.expected) reference_ok = false;
  }
  for (const char* name :
       {"cloud_storage", "bulletin_board", "batch_noisy_count", "directory_stats"}) {
    csv += std::string(name) + "," + (grid[name]["control"] ? "pass" : "fail") + "," +
           (grid[name]["confidentiality"] ? "pass" : "fail") + "," +
           (grid[name]["ahi"] ? "pass" : "fail") + "\n";
  }
  out["cells"] = arr;
  out["columns_match_reference"] = reference_ok;

  MatrixResult result;
  result.columns_match_reference = reference_ok;
  result.json = out.dump(2) + "\n";
  result.csv = csv;
  return result;
}

}  // namespace delaudit
