#include "gibbslab/config.hpp"

#include <fstream>

namespace gibbslab {

namespace {

void require_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("config: " + path + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + path + "." + key + "'");
  }
}

double get_num(const Json& obj, const char* key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

int get_int(const Json& obj, const char* key, int fallback) {
  return obj.contains(key) ? obj.at(key).get<int>() : fallback;
}

PotentialSpec parse_potential(const Json& p) {
  require_keys(p, "potential", {"preset", "params", "terms", "k"});
  PotentialSpec spec;
  if (p.contains("preset")) {
    spec.preset = p.at("preset").get<std::string>();
    static const std::set<std::string> known = {"ising_zz", "classical_random_field",
                                                "defect_chain", "xx_chain"};
    if (!known.count(spec.preset)) throw ConfigError("config: unknown preset '" + spec.preset + "'");
    spec.params = p.contains("params") ? p.at("params") : Json::object();
    static const std::map<std::string, std::set<std::string>> allowed_params = {
        {"ising_zz", {"coupling", "field"}},
        {"classical_random_field", {"seed", "j_scale", "h_scale"}},
        {"defect_chain", {"defect_site", "defect_strength", "decay", "base"}},
        {"xx_chain", {"coupling"}}};
    require_keys(spec.params, "potential.params", allowed_params.at(spec.preset));
    if (p.contains("terms")) throw ConfigError("config: give either preset or terms, not both");
    return spec;
  }
  if (!p.contains("terms") || !p.contains("k"))
    throw ConfigError("config: potential needs a preset, or explicit terms plus k");
  spec.explicit_terms = true;
  spec.k = p.at("k").get<int>();
  for (const auto& t : p.at("terms")) {
    require_keys(t, "potential.terms[]", {"center", "support", "matrix"});
    PotentialTerm term;
    term.center = t.at("center").get<int>();
    std::vector<int> sites = t.at("support").get<std::vector<int>>();
    const auto& rows = t.at("matrix");
    Matrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size())
        throw ConfigError("config: potential term matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const auto& cell = rows[i][j];
        m(i, j) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
    term.op = ChainOp{Region(sites), std::move(m)};
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const Json& doc) {
  require_keys(doc, "", {"potential", "beta", "n_sites", "local_dim", "geometry", "checks",
                         "sampling", "tolerances", "evolve", "scan", "output", "dense_cap",
                         "dim_cap"});
  ExperimentConfig cfg;
  if (!doc.contains("potential")) throw ConfigError("config: missing 'potential'");
  cfg.potential = parse_potential(doc.at("potential"));
  if (!doc.contains("beta")) throw ConfigError("config: missing 'beta'");
  cfg.beta = doc.at("beta").get<double>();
  if (cfg.beta < 0) throw ConfigError("config: beta must be >= 0");
  cfg.n_sites = get_int(doc, "n_sites", 0);
  cfg.local_dim = get_int(doc, "local_dim", 2);

  if (doc.contains("geometry")) {
    require_keys(doc.at("geometry"), "geometry", {"k", "l", "n_blocks"});
    GeometrySpec g;
    g.k = get_int(doc.at("geometry"), "k", 1);
    g.l = get_int(doc.at("geometry"), "l", 1);
    g.n_blocks = get_int(doc.at("geometry"), "n_blocks", 1);
    cfg.geometry = g;
    int derived = standard_splitting(g.k, g.l, g.n_blocks).n_sites;
    if (cfg.n_sites == 0) cfg.n_sites = derived;
    else if (cfg.n_sites != derived)
      throw ConfigError("config: n_sites disagrees with the geometry (" +
                        std::to_string(derived) + " expected)");
  }
  if (cfg.n_sites == 0) throw ConfigError("config: give n_sites or a geometry");

  if (doc.contains("checks")) {
    for (const auto& c : doc.at("checks")) {
      std::string name = c.get<std::string>();
      if (!kKnownChecks.count(name)) throw ConfigError("config: unknown check '" + name + "'");
      cfg.checks.push_back(name);
    }
  }

  if (doc.contains("sampling")) {
    const Json& s = doc.at("sampling");
    require_keys(s, "sampling", {"n_random", "n_states", "optimizer_steps", "seed"});
    cfg.sampling.n_random = get_int(s, "n_random", cfg.sampling.n_random);
    cfg.sampling.n_states = get_int(s, "n_states", cfg.sampling.n_states);
    cfg.sampling.optimizer_steps = get_int(s, "optimizer_steps", cfg.sampling.optimizer_steps);
    if (s.contains("seed")) {
      cfg.sampling.seed = s.at("seed").get<std::uint64_t>();
      cfg.sampling.seed_set = true;
    }
  }
  static const std::set<std::string> sampling_checks = {
      "entropy-properties", "dynamics-properties", "qf",       "step1",
      "step2",              "lemma-cre",           "mlsi",     "conditional-mlsi",
      "assemble",           "mixing-time"};
  for (const std::string& c : cfg.checks) {
    if (sampling_checks.count(c) && !cfg.sampling.seed_set)
      throw ConfigError("config: check '" + c + "' samples states; a seed is mandatory");
  }

  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    require_keys(t, "tolerances",
                 {"herm", "psd", "trace", "lin", "eig", "comm", "ssa", "cre", "qmc", "ep",
                  "eps_floor"});
    cfg.tolerances.herm = get_num(t, "herm", cfg.tolerances.herm);
    cfg.tolerances.psd = get_num(t, "psd", cfg.tolerances.psd);
    cfg.tolerances.trace = get_num(t, "trace", cfg.tolerances.trace);
    cfg.tolerances.lin = get_num(t, "lin", cfg.tolerances.lin);
    cfg.tolerances.eig = get_num(t, "eig", cfg.tolerances.eig);
    cfg.tolerances.comm = get_num(t, "comm", cfg.tolerances.comm);
    cfg.tolerances.ssa = get_num(t, "ssa", cfg.tolerances.ssa);
    cfg.tolerances.cre = get_num(t, "cre", cfg.tolerances.cre);
    cfg.tolerances.qmc = get_num(t, "qmc", cfg.tolerances.qmc);
    cfg.tolerances.ep = get_num(t, "ep", cfg.tolerances.ep);
    cfg.tolerances.eps_floor = get_num(t, "eps_floor", cfg.tolerances.eps_floor);
  }

  if (doc.contains("evolve")) {
    const Json& e = doc.at("evolve");
    require_keys(e, "evolve", {"times", "initial"});
    if (e.contains("times")) cfg.evolve_times = e.at("times").get<std::vector<double>>();
    if (e.contains("initial")) {
      cfg.evolve_initial = e.at("initial").get<std::string>();
      static const std::set<std::string> kinds = {"haar_floor", "hilbert_schmidt", "bures",
                                                  "diagonal"};
      if (!kinds.count(cfg.evolve_initial))
        throw ConfigError("config: unknown evolve.initial '" + cfg.evolve_initial + "'");
    }
  }

  if (doc.contains("scan")) {
    const Json& s = doc.at("scan");
    require_keys(s, "scan", {"l_values", "k", "n_blocks"});
    if (s.contains("l_values")) cfg.scan_l_values = s.at("l_values").get<std::vector<int>>();
    cfg.scan_k = get_int(s, "k", 1);
    cfg.scan_n_blocks = get_int(s, "n_blocks", 1);
  }

  if (doc.contains("output")) {
    require_keys(doc.at("output"), "output", {"dir"});
    if (doc.at("output").contains("dir")) cfg.out_dir = doc.at("output").at("dir").get<std::string>();
  }
  if (doc.contains("dense_cap")) cfg.dense_cap = doc.at("dense_cap").get<std::int64_t>();
  if (doc.contains("dim_cap")) cfg.dim_cap = doc.at("dim_cap").get<std::int64_t>();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return parse_config(doc);
}

LocalPotential build_potential(const PotentialSpec& spec, const Lattice& lat,
                               std::uint64_t fallback_seed) {
  if (spec.explicit_terms) return make_potential(lat, spec.k, spec.terms);
  const Json& p = spec.params;
  if (spec.preset == "ising_zz")
    return preset_ising_zz(lat, get_num(p, "coupling", 1.0), get_num(p, "field", 0.3));
  if (spec.preset == "classical_random_field") {
    std::uint64_t seed =
        p.contains("seed") ? p.at("seed").get<std::uint64_t>() : fallback_seed;
    return preset_classical_random_field(lat, seed, get_num(p, "j_scale", 1.0),
                                         get_num(p, "h_scale", 0.5));
  }
  if (spec.preset == "defect_chain")
    return preset_defect_chain(lat, get_int(p, "defect_site", -1),
                               get_num(p, "defect_strength", 2.0), get_num(p, "decay", 0.6),
                               get_num(p, "base", 0.8));
  if (spec.preset == "xx_chain") return preset_xx_chain(lat, get_num(p, "coupling", 0.7));
  throw ConfigError("config: unknown preset '" + spec.preset + "'");
}

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  if (cfg.potential.explicit_terms) {
    j["potential"] = {{"k", cfg.potential.k}, {"terms", cfg.potential.terms.size()}};
  } else {
    j["potential"] = {{"preset", cfg.potential.preset}, {"params", cfg.potential.params}};
  }
  j["beta"] = cfg.beta;
  j["n_sites"] = cfg.n_sites;
  j["local_dim"] = cfg.local_dim;
  if (cfg.geometry)
    j["geometry"] = {{"k", cfg.geometry->k}, {"l", cfg.geometry->l},
                     {"n_blocks", cfg.geometry->n_blocks}};
  j["checks"] = cfg.checks;
  j["sampling"] = {{"n_random", cfg.sampling.n_random},
                   {"n_states", cfg.sampling.n_states},
                   {"optimizer_steps", cfg.sampling.optimizer_steps},
                   {"seed", cfg.sampling.seed}};
  j["tolerances"] = {{"herm", cfg.tolerances.herm},   {"psd", cfg.tolerances.psd},
                     {"trace", cfg.tolerances.trace}, {"lin", cfg.tolerances.lin},
                     {"eig", cfg.tolerances.eig},     {"comm", cfg.tolerances.comm},
                     {"ssa", cfg.tolerances.ssa},     {"cre", cfg.tolerances.cre},
                     {"qmc", cfg.tolerances.qmc},     {"ep", cfg.tolerances.ep},
                     {"eps_floor", cfg.tolerances.eps_floor}};
  if (!cfg.evolve_times.empty())
    j["evolve"] = {{"times", cfg.evolve_times}, {"initial", cfg.evolve_initial}};
  if (!cfg.scan_l_values.empty())
    j["scan"] = {{"l_values", cfg.scan_l_values}, {"k", cfg.scan_k},
                 {"n_blocks", cfg.scan_n_blocks}};
  j["dense_cap"] = cfg.dense_cap;
  j["dim_cap"] = cfg.dim_cap;
  return j;
}

}  // namespace gibbslab
