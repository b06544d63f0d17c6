#include "rabi_ccd/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rabi_ccd/version.hpp"

namespace rabi_ccd {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* model_name(PresetModel m) {
  switch (m) {
    case PresetModel::rabi: return "rabi";
    case PresetModel::dirac: return "dirac";
    case PresetModel::qubit: return "qubit";
    case PresetModel::ou_demo: return "ou-demo";
  }
  return "?";
}

const char* initial_name(InitialStateLabel s) {
  switch (s) {
    case InitialStateLabel::tls_up: return "tls_up";
    case InitialStateLabel::tls_down: return "tls_down";
    case InitialStateLabel::perp_up: return "perp_up";
  }
  return "?";
}

nlohmann::json meta_json(const ResultTable& t) {
  const ExperimentSpec& s = t.spec;
  nlohmann::json j;
  j["version"] = kVersion;
  j["preset"] = s.name;
  j["model"] = model_name(s.model);
  j["layer"] = s.layer;
  j["rabi_targets"] = {{"R", s.rabi_targets.R},
                       {"g", s.rabi_targets.g},
                       {"omega_tilde", s.rabi_targets.omega_tilde}};
  j["dirac_targets"] = {{"r", s.dirac_targets.r}, {"c_d", s.dirac_targets.c_d}};
  j["hardware"] = {{"nu", s.hardware.nu},
                   {"eta12", s.hardware.eta12},
                   {"eta_ab", s.hardware.eta_ab},
                   {"omega_strong", s.hardware.omega_strong}};
  j["noise"] = {{"tau_m", s.noise.tau_m},
                {"T2", s.noise.T2},
                {"tau_omega", s.noise.tau_omega},
                {"p", s.noise.p},
                {"correlated_sidebands", s.noise.correlated_sidebands},
                {"noiseless", s.noise.noiseless}};
  j["initial"] = initial_name(s.initial);
  j["qubit_drives"] = s.qubit_drives;
  j["quench"] = s.quench;
  j["tau_q_units"] = s.tau_q_units;
  j["tau_q_grid"] = s.tau_q_grid;
  j["ou"] = {{"tau", s.ou.tau}, {"c", s.ou.c}, {"x0", s.ou.x0}};
  j["dt"] = s.dt;
  j["t_final"] = s.t_final;
  j["n_out"] = s.n_out;
  j["n_fock"] = s.n_fock;
  j["adaptive_fock"] = s.adaptive_fock;
  j["max_fock"] = s.max_fock;
  j["method"] = s.method == StepMethod::series ? "series" : "eigendecomposition";
  j["n_traj"] = s.n_traj;
  j["master_seed"] = s.master_seed;
  j["child_seeds"] = t.child_seeds;
  j["n_fock_used"] = t.n_fock_used;
  j["max_tail"] = t.max_tail;
  j["max_norm_error"] = t.max_norm_error;
  std::vector<std::string> names;
  for (const ResultColumn& c : t.columns) names.push_back(c.name);
  j["columns"] = names;
  return j;
}

}  // namespace

void write_csv(const ResultTable& table, const std::string& path) {
  for (const ResultColumn& c : table.columns) {
    if (static_cast<std::size_t>(c.mean.size()) != table.axis.size() ||
        static_cast<std::size_t>(c.se.size()) != table.axis.size()) {
      throw std::invalid_argument("write_csv: column length mismatch");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << table.axis_name;
  for (const ResultColumn& c : table.columns) {
    out << ",mean_" << c.name << ",stderr_" << c.name;
  }
  out << "\n";
  for (std::size_t i = 0; i < table.axis.size(); ++i) {
    out << fmt17(table.axis[i]);
    for (const ResultColumn& c : table.columns) {
      out << "," << fmt17(c.mean(static_cast<long>(i)))
          << "," << fmt17(c.se(static_cast<long>(i)));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
  out.close();

  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw std::runtime_error("write_csv: cannot open sidecar for " + path);
  meta << meta_json(table).dump(2) << "\n";
  if (!meta) throw std::runtime_error("write_csv: sidecar write failed for " + path);
}

double parse_frequency(const std::string& text) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s.empty()) throw std::invalid_argument("empty frequency");
  std::size_t pos = 0;
  double value = 0.0;
  if (s.rfind("2pi*", 0) == 0) {
    const std::string rest = s.substr(4);
    value = 2.0 * M_PI * 1e3 * std::stod(rest, &pos);
    if (pos != rest.size()) throw std::invalid_argument("bad frequency '" + text + "'");
  } else {
    value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad frequency '" + text + "'");
  }
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite frequency");
  return value;
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvData data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      data.header = cells;
      first = false;
    } else {
      std::vector<double> row;
      row.reserve(cells.size());
      for (const std::string& c : cells) row.push_back(std::stod(c));
      data.rows.push_back(std::move(row));
    }
  }
  return data;
}

}  // namespace rabi_ccd
