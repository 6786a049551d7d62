#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gibbslab/gibbs.hpp"
#include "gibbslab/report.hpp"

namespace gibbslab {

inline const std::set<std::string> kKnownChecks = {
    "gibbs-structure", "entropy-properties", "dynamics-properties", "mixing",
    "qf",              "step1",              "step2",               "lemma-cre",
    "mlsi",            "conditional-mlsi",   "assemble",            "mixing-time"};

struct PotentialSpec {
  std::string preset;  // empty when explicit terms are given
  Json params;         // preset parameters, strict per preset
  // explicit term list
  int k = 0;
  std::vector<PotentialTerm> terms;
  bool explicit_terms = false;
};

struct GeometrySpec {
  int k = 1, l = 1, n_blocks = 1;
};

struct SamplingSpec {
  int n_random = 100;       // samples for estimators
  int n_states = 100;       // states for slack checks
  int optimizer_steps = 30;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct ExperimentConfig {
  PotentialSpec potential;
  double beta = 0;
  int n_sites = 0;  // 0: derive from geometry
  int local_dim = 2;
  std::optional<GeometrySpec> geometry;
  std::vector<std::string> checks;
  SamplingSpec sampling;
  Tolerances tolerances;
  std::vector<double> evolve_times;
  std::string evolve_initial = "haar_floor";
  std::vector<int> scan_l_values;
  int scan_k = 1, scan_n_blocks = 1;
  std::string out_dir = "out";
  std::int64_t dense_cap = kDefaultDenseCap;
  std::int64_t dim_cap = kDefaultDimCap;
};

// Strict parse: unknown keys anywhere are rejected with their path.
ExperimentConfig parse_config(const Json& doc);
ExperimentConfig load_config(const std::string& path);

// Materialize the potential on a concrete chain.
LocalPotential build_potential(const PotentialSpec& spec, const Lattice& lat,
                               std::uint64_t fallback_seed);

// Full defaults echo, so reports are self-describing.
Json config_json(const ExperimentConfig& cfg);

}  // namespace gibbslab
