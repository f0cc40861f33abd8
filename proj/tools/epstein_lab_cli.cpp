// Copyright 2026 The epstein-lab authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// epstein-lab command line: lattice sampling, enumeration, Epstein zeta and
// height evaluation, Poisson functionals, stable laws and the experiments.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "epstein_lab/enumeration.hpp"
#include "epstein_lab/epstein.hpp"
#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"
#include "epstein_lab/lattice.hpp"
#include "epstein_lab/poisson.hpp"
#include "epstein_lab/stable.hpp"

namespace el = epstein_lab;
namespace hn = epstein_lab::harness;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* app, Common& c, const std::string& default_format = "csv") {
  c.format = default_format;
  app->add_option("--seed", c.seed, "Master seed (EPSTEIN_LAB_SEED overrides)")->capture_default_str();
  app->add_option("--out", c.out, "Output file (default: stdout)");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}))
      ->capture_default_str();
}

std::uint64_t effective_seed(const Common& c) {
  if (const char* env = std::getenv("EPSTEIN_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw el::ConfigError(std::string("EPSTEIN_LAB_SEED is not an unsigned integer: ") + env);
    }
  }
  return c.seed;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

// Lattice from --lattice, or a fresh Hecke sample from (n, p, seed).
struct LatticeSource {
  std::string file;
  int n = 8;
  std::uint64_t p = 2147483647;
  bool dual = false;
};

void add_lattice_source(CLI::App* app, LatticeSource& s) {
  app->add_option("--lattice", s.file, "Lattice file; otherwise a Hecke sample is drawn");
  app->add_option("--n", s.n, "Dimension of the Hecke sample")->capture_default_str();
  app->add_option("--p", s.p, "Prime index of the Hecke sample")->capture_default_str();
  app->add_flag("--dual", s.dual, "Use the dual lattice");
}

el::Lattice load(const LatticeSource& s, std::uint64_t seed) {
  el::Lattice lat = s.file.empty() ? el::hecke_batch(s.n, s.p, seed, 1).front() : el::read_lattice(s.file);
  return s.dual ? el::dual(lat) : lat;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + hn::csv_field(header[i]);
  out += "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + hn::format_double(r[i]);
    out += "\r\n";
  }
  return out;
}

std::string json_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

std::string table(const Common& c, const std::vector<std::string>& header,
                  const std::vector<std::vector<double>>& rows) {
  return c.format == "json" ? json_table(header, rows) : csv_table(header, rows);
}

el::TailPolicy parse_policy(const std::string& s) {
  if (s == "certified") return el::TailPolicy::kCertified;
  if (s == "statistical") return el::TailPolicy::kStatistical;
  return el::TailPolicy::kAuto;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epstein-lab: value distribution of Epstein zeta functions of random lattices"};
  app.require_subcommand(1);

  // sample-lattice
  Common c_sample;
  int sample_n = 8, sample_count = 1;
  std::uint64_t sample_p = 2147483647;
  std::string cache_dir;
  auto* sample = app.add_subcommand("sample-lattice", "Draw Hecke lattices of covolume 1");
  add_common(sample, c_sample, "text");
  sample->add_option("--n", sample_n, "Dimension")->capture_default_str();
  sample->add_option("--p", sample_p, "Prime index")->capture_default_str();
  sample->add_option("--count", sample_count, "Number of lattices")->capture_default_str();
  sample->add_option("--cache-dir", cache_dir, "Lattice cache directory");

  // enumerate
  Common c_enum;
  LatticeSource src_enum;
  double vmax = 100;
  auto* enumerate = app.add_subcommand("enumerate", "Normalized volumes V_n |v_j|^n up to vmax");
  add_common(enumerate, c_enum);
  add_lattice_source(enumerate, src_enum);
  enumerate->add_option("--vmax", vmax, "Largest normalized volume")->capture_default_str();

  // epstein
  Common c_ep;
  LatticeSource src_ep;
  std::vector<double> s_values, c_values;
  double ep_tol = 1e-8;
  std::string policy = "auto";
  auto* epstein = app.add_subcommand("epstein", "E_n(L, s) with tail bounds");
  add_common(epstein, c_ep);
  add_lattice_source(epstein, src_ep);
  epstein->add_option("--s", s_values, "Values of s (s > -1, s != n/2)");
  epstein->add_option("--c", c_values, "Values of c for V_n^{-2c} E_n(L, cn)");
  epstein->add_option("--tol", ep_tol, "Absolute tolerance")->capture_default_str();
  epstein->add_option("--policy", policy, "Tail policy")
      ->check(CLI::IsMember({"auto", "certified", "statistical"}))
      ->capture_default_str();

  // height
  Common c_h;
  LatticeSource src_h;
  double h_tol = 1e-8;
  auto* height = app.add_subcommand("height", "Height h_n(L) and the normalized statistic");
  add_common(height, c_h);
  add_lattice_source(height, src_h);
  height->add_option("--tol", h_tol, "Absolute tolerance on h_n")->capture_default_str();

  // poisson-sim
  Common c_ps;
  std::string kind = "H";
  double ps_c = 0.35, ps_A = 1e4, ps_delta = 1.0;
  std::size_t ps_trials = 1000;
  bool serial = false;
  auto* psim = app.add_subcommand("poisson-sim", "Samples of H(c), H(c, delta), Z_0 or the rescaled H");
  add_common(psim, c_ps);
  psim->add_option("--kind", kind, "Functional")
      ->check(CLI::IsMember({"H", "H_delta", "Z0", "gaussian"}))
      ->capture_default_str();
  psim->add_option("--c", ps_c, "c in (1/4, 1/2)")->capture_default_str();
  psim->add_option("--A", ps_A, "Simulation horizon")->capture_default_str();
  psim->add_option("--delta", ps_delta, "Cut for H_delta")->capture_default_str();
  psim->add_option("--trials", ps_trials, "Number of samples")->capture_default_str();
  psim->add_flag("--serial", serial, "Disable OpenMP");

  // stable
  Common c_st;
  std::string law = "H";
  double st_c = 0.35;
  std::vector<double> st_params, st_x;
  std::size_t st_samples = 0;
  auto* stab = app.add_subcommand("stable", "Stable law cdf/pdf or samples");
  add_common(stab, c_st);
  stab->add_option("--law", law, "H (uses --c), H_hat, scaled_H, Z0 or custom (uses --params)")
      ->check(CLI::IsMember({"H", "H_hat", "scaled_H", "Z0", "custom"}))
      ->capture_default_str();
  stab->add_option("--c", st_c, "c in (1/4, 1/2)")->capture_default_str();
  stab->add_option("--params", st_params, "alpha sigma beta mu")->expected(4);
  stab->add_option("--x", st_x, "Points for cdf/pdf");
  stab->add_option("--samples", st_samples, "Draw this many samples instead");

  // experiment
  Common c_ex;
  std::string ex_name, ex_config, ex_cache;
  bool ex_serial = false, ex_quiet = false;
  auto* ex = app.add_subcommand("experiment", "Run a named experiment");
  ex->footer("Experiments and defaults:\n" + hn::describe_experiments() +
             "Config: JSON with keys {n, p, trials, A, c_grid, grid_step, tol}, either flat or keyed by "
             "experiment name.");
  add_common(ex, c_ex);
  ex->add_option("name", ex_name, "Experiment name")->required()->check(CLI::IsMember(hn::experiment_names()));
  ex->add_option("--config", ex_config, "JSON config file");
  ex->add_option("--cache-dir", ex_cache, "Lattice cache directory");
  ex->add_flag("--serial", ex_serial, "Disable OpenMP");
  ex->add_flag("--quiet", ex_quiet, "No progress on stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      const auto lats = el::hecke_batch(sample_n, sample_p, effective_seed(c_sample), sample_count, cache_dir);
      std::string text;
      if (c_sample.format == "text") {
        for (const auto& l : lats) text += el::format_lattice(l);
      } else if (c_sample.format == "json") {
        json arr = json::array();
        for (const auto& l : lats) {
          const auto& prov = *l.provenance();
          json basis = json::array();
          for (int i = 0; i < l.dim(); ++i) {
            json row = json::array();
            for (int j = 0; j < l.dim(); ++j) row.push_back(l.basis()(i, j));
            basis.push_back(row);
          }
          arr.push_back({{"n", l.dim()}, {"p", prov.p}, {"seed", prov.seed}, {"trial", prov.trial},
                         {"hecke", prov.hecke}, {"basis", basis}});
        }
        text = arr.dump(2) + "\n";
      } else {
        std::vector<std::vector<double>> rows;
        for (std::size_t t = 0; t < lats.size(); ++t) {
          for (int i = 0; i < lats[t].dim(); ++i) {
            std::vector<double> r{static_cast<double>(t), static_cast<double>(i)};
            for (int j = 0; j < lats[t].dim(); ++j) r.push_back(lats[t].basis()(i, j));
            rows.push_back(r);
          }
        }
        std::vector<std::string> header{"trial", "row"};
        for (int j = 0; j < sample_n; ++j) header.push_back("b" + std::to_string(j));
        text = csv_table(header, rows);
      }
      emit(c_sample, text);
    } else if (*enumerate) {
      const auto lat = load(src_enum, effective_seed(c_enum));
      const auto vl = el::vector_lengths(lat, vmax);
      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < vl.volumes.size(); ++j)
        rows.push_back({static_cast<double>(j + 1), vl.volumes[j], vl.sq_lengths[j]});
      emit(c_enum, table(c_enum, {"j", "volume_Vj", "sq_length"}, rows));
    } else if (*epstein) {
      const auto lat = load(src_ep, effective_seed(c_ep));
      el::EpsteinOptions opt;
      opt.policy = parse_policy(policy);
      el::EpsteinEvaluator ev(lat, opt);
      std::vector<std::vector<double>> rows;
      for (double s : s_values) {
        const auto z = ev.E(s, ep_tol);
        rows.push_back({s, z.value, z.tail_bound, z.cutoff_volume, z.certified ? 1.0 : 0.0});
      }
      for (double c : c_values) {
        const double v = ev.E_normalized(c, ep_tol);
        rows.push_back({c * lat.dim(), v, ep_tol, 0.0, 0.0});
      }
      if (s_values.empty() && c_values.empty()) throw el::ConfigError("epstein: give --s or --c");
      std::vector<std::string> header{"s", "value", "tail_bound", "cutoff_volume", "certified"};
      if (!c_values.empty() && s_values.empty()) header[1] = "normalized_value";
      emit(c_ep, table(c_ep, header, rows));
    } else if (*height) {
      const auto lat = load(src_h, effective_seed(c_h));
      el::EpsteinEvaluator ev(lat);
      const double h = ev.height(h_tol);
      const int n = lat.dim();
      const double stat = n * (h - el::height_limit_constant()) + std::log(static_cast<double>(n));
      emit(c_h, table(c_h, {"n", "height", "statistic", "tol"}, {{static_cast<double>(n), h, stat, h_tol}}));
    } else if (*psim) {
      const auto exec = serial ? el::Execution::kSerial : el::Execution::kParallel;
      const auto xs = el::run_trials(
          ps_trials, effective_seed(c_ps),
          [&](std::size_t, el::Rng& rng) {
            if (kind == "H") return el::poisson::H_sample(ps_c, ps_A, rng);
            if (kind == "H_delta") return el::poisson::H_delta_sample(ps_c, ps_delta, ps_A, rng);
            if (kind == "Z0") return el::poisson::Z0_sample(ps_A, rng);
            return el::poisson::gaussian_rescaled_sample(ps_c, ps_A, rng);
          },
          exec);
      std::vector<std::vector<double>> rows;
      for (std::size_t t = 0; t < xs.size(); ++t) rows.push_back({static_cast<double>(t), xs[t]});
      emit(c_ps, table(c_ps, {"trial", "value"}, rows));
    } else if (*stab) {
      el::stable::StableParams p;
      if (law == "H") p = el::stable::params_for_H(st_c);
      else if (law == "H_hat") p = el::stable::params_for_H_hat(st_c);
      else if (law == "scaled_H") p = el::stable::params_for_scaled_H(st_c);
      else if (law == "Z0") p = el::stable::params_for_Z0();
      else if (st_params.size() == 4) p = el::stable::StableParams::make(st_params[0], st_params[1], st_params[2], st_params[3]);
      else throw el::ConfigError("stable: --law custom needs --params alpha sigma beta mu");
      std::vector<std::vector<double>> rows;
      if (st_samples > 0) {
        const auto xs = el::run_trials(st_samples, effective_seed(c_st),
                                       [&](std::size_t, el::Rng& rng) { return el::stable::sample(p, rng); });
        for (std::size_t t = 0; t < xs.size(); ++t) rows.push_back({static_cast<double>(t), xs[t]});
        emit(c_st, table(c_st, {"trial", "value"}, rows));
      } else {
        for (double x : st_x) rows.push_back({x, el::stable::cdf(p, x), el::stable::pdf(p, x)});
        emit(c_st, table(c_st, {"x", "cdf", "pdf"}, rows));
      }
    } else if (*ex) {
      hn::ExperimentConfig cfg;
      if (!ex_config.empty()) {
        std::ifstream f(ex_config);
        if (!f) throw el::ConfigError("cannot open config " + ex_config);
        std::stringstream buf;
        buf << f.rdbuf();
        cfg = hn::parse_config_for(buf.str(), ex_name);
      }
      hn::RunOptions ro;
      ro.master_seed = effective_seed(c_ex);
      ro.execution = ex_serial ? el::Execution::kSerial : el::Execution::kParallel;
      ro.cache_dir = ex_cache;
      if (!ex_quiet) ro.log = [](const std::string& m) { std::cerr << m << '\n'; };
      const auto report = hn::run_experiment(ex_name, cfg, ro);
      emit(c_ex, c_ex.format == "json" ? hn::to_json(report) : hn::to_csv(report));
      return report.all_pass() ? 0 : 3;
    }
  } catch (const el::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
