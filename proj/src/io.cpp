#include "bv/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bv/constructions.hpp"

namespace bv {

using nlohmann::json;

namespace {

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("diagram file: expected an integer or integer string");
}

json int_to_json(const Int& x) {
  if (x.fits_slong_p()) return json(x.get_si());
  return json(x.get_str());
}

}  // namespace

BratteliDiagram diagram_from_json(const json& j) {
  if (!j.contains("hat") || !j.contains("levels"))
    throw std::invalid_argument("diagram file: missing 'hat' or 'levels'");

  std::vector<Int> hat;
  for (const auto& h : j.at("hat")) hat.push_back(int_from_json(h));

  std::vector<OrderedLevel> levels;
  std::size_t prev = hat.size();
  for (const auto& jl : j.at("levels")) {
    OrderedLevel lv;
    lv.source_count = static_cast<std::uint32_t>(prev);
    lv.target_count = static_cast<std::uint32_t>(jl.size());
    lv.orders.resize(lv.target_count);
    for (auto it = jl.begin(); it != jl.end(); ++it) {
      std::size_t v = std::stoul(it.key());
      if (v >= lv.target_count)
        throw std::invalid_argument("diagram file: non-contiguous target vertex keys");
      for (const auto& src : it.value())
        lv.orders[v].push_back(static_cast<std::uint8_t>(src.get<unsigned>()));
    }
    prev = lv.target_count;
    levels.push_back(std::move(lv));
  }

  std::optional<DiagramFamily> family;
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    std::string name = g.at("family").get<std::string>();
    bool periodic = g.value("periodic", true);
    std::size_t depth = levels.size() + 1;
    if (name == "sturmian") {
      std::vector<Int> prefix, cycle;
      for (const auto& a : g.at("cf")) cycle.push_back(int_from_json(a));
      if (g.contains("cf_prefix"))
        for (const auto& a : g.at("cf_prefix")) prefix.push_back(int_from_json(a));
      AngleSpec cf = AngleSpec::continued_fraction(prefix, cycle);
      return sturmian(cf, depth);
    }
    if (name == "odometer") {
      std::vector<Int> q;
      for (const auto& a : g.at("q")) q.push_back(int_from_json(a));
      return odometer(q, periodic, depth);
    }
    if (name == "toeplitz") {
      std::vector<Int> q;
      for (const auto& a : g.at("q")) q.push_back(int_from_json(a));
      auto vertices = g.at("vertices").get<std::uint32_t>();
      return toeplitz_canonical(vertices, q, periodic, depth);
    }
    if (name == "stationary") {
      if (levels.empty()) throw std::invalid_argument("diagram file: stationary without levels");
      return stationary(levels.front(), depth);
    }
    throw std::invalid_argument("diagram file: unknown generator family " + name);
  }

  return BratteliDiagram(std::move(hat), std::move(levels), family);
}

json diagram_to_json(const BratteliDiagram& d) {
  json j;
  j["hat"] = json::array();
  for (const auto& h : d.hat()) j["hat"].push_back(int_to_json(h));
  j["levels"] = json::array();
  for (std::size_t n = 2; n <= d.depth(); ++n) {
    const auto& lv = d.level(n);
    json jl = json::object();
    for (std::uint32_t v = 0; v < lv.target_count; ++v) {
      json order = json::array();
      for (auto s : lv.orders[v]) order.push_back(static_cast<unsigned>(s));
      jl[std::to_string(v)] = std::move(order);
    }
    j["levels"].push_back(std::move(jl));
  }
  if (d.family()) {
    const auto& f = *d.family();
    json g;
    g["family"] = f.name;
    g["periodic"] = f.periodic;
    if (f.name == "sturmian") {
      g["cf"] = json::array();
      for (const auto& a : f.cf_cycle) g["cf"].push_back(int_to_json(a));
      if (!f.cf_prefix.empty()) {
        g["cf_prefix"] = json::array();
        for (const auto& a : f.cf_prefix) g["cf_prefix"].push_back(int_to_json(a));
      }
    } else if (!f.edge_counts.empty()) {
      g["q"] = json::array();
      for (const auto& a : f.edge_counts) g["q"].push_back(int_to_json(a));
      if (f.name == "toeplitz") g["vertices"] = d.vertex_count(d.depth());
    }
    j["generator"] = std::move(g);
  }
  return j;
}

BratteliDiagram load_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open diagram file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("diagram file " + path + ": " + e.what());
  }
  return diagram_from_json(j);
}

void save_diagram(const BratteliDiagram& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write diagram file: " + path);
  out << diagram_to_json(d).dump(1) << "\n";
}

std::vector<OrderEdit> edits_from_json(const json& j) {
  std::vector<OrderEdit> edits;
  for (const auto& je : j) {
    OrderEdit e;
    e.level = je.at("level").get<std::size_t>();
    e.vertex = je.at("vertex").get<std::uint32_t>();
    for (const auto& s : je.at("order"))
      e.new_order.push_back(static_cast<std::uint8_t>(s.get<unsigned>()));
    edits.push_back(std::move(e));
  }
  return edits;
}

std::vector<OrderEdit> load_edits(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edit file: " + path);
  json j;
  in >> j;
  return edits_from_json(j);
}

json interval_to_json(const Interval& x) {
  json j;
  j["lo"] = rat_to_string(x.lo);
  j["hi"] = rat_to_string(x.hi);
  j["approx"] = rat_to_decimal(x.mid(), 12);
  return j;
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["outcome"] = outcome_name(v.outcome);
  j["depth"] = v.depth;
  j["thresholds"] = {{"theta_div", rat_to_string(v.theta_div)},
                     {"fail_count", v.fail_count},
                     {"burn_in", v.burn_in}};
  if (!v.grid.empty()) j["grid"] = v.grid;
  if (v.tail_bound) j["tail_bound"] = rat_to_string(*v.tail_bound);
  if (!v.witnesses.empty()) j["witnesses"] = v.witnesses;
  if (!v.note.empty()) j["note"] = v.note;
  j["series"] = json::array();
  for (const auto& t : v.series) {
    json jt = interval_to_json(t.value);
    jt["n"] = t.level;
    jt["exact"] = t.exact;
    j["series"].push_back(std::move(jt));
  }
  return j;
}

json properness_to_json(const PropernessReport& r) {
  json j;
  j["h1_ok"] = r.h1_ok;
  j["simple_ok"] = r.simple_ok;
  j["max_source_ok"] = r.max_source_ok;
  j["h4_ok"] = r.h4_ok;
  j["unique_max"] = r.unique_max;
  j["unique_min"] = r.unique_min;
  j["proper"] = r.proper();
  if (!r.h2_failures.empty()) j["h2_failures"] = r.h2_failures;
  if (!r.h3_failures.empty()) j["h3_failures"] = r.h3_failures;
  if (r.unique_max) j["max_witness_gap"] = r.max_witness_gap;
  if (r.unique_min) j["min_witness_gap"] = r.min_witness_gap;
  return j;
}

json measures_to_json(const BratteliDiagram& d, const std::vector<MeasureEnclosure>& measures) {
  json j = json::array();
  for (const auto& mu : measures) {
    json jm;
    jm["clusters"] = mu.ergodic_hint;
    jm["extreme_points"] = json::array();
    for (auto v : mu.extreme_points) jm["extreme_points"].push_back(v + 1);  // 1-based reports
    jm["mu"] = json::array();
    for (std::size_t n = 1; n <= mu.audited_depth; ++n) {
      json jl = json::array();
      for (const auto& e : mu.at_level(n)) jl.push_back(interval_to_json(e));
      jm["mu"].push_back(std::move(jl));
    }
    j.push_back(std::move(jm));
  }
  return j;
}

json clean_to_json(const CleanReport& r) {
  json j;
  j["cutoff"] = rat_to_string(r.cutoff);
  j["delta0"] = interval_to_json(r.delta0);
  j["exact_rank"] = r.exact_rank;
  j["i_mu"] = json::array();
  for (auto v : r.i_mu) j["i_mu"].push_back(v + 1);  // 1-based reports
  return j;
}

json candidates_to_json(const std::vector<Candidate>& cs) {
  json j = json::array();
  for (const auto& c : cs) {
    json jc;
    jc["alpha"] = interval_to_json(c.alpha);
    if (c.spec) jc["spec"] = c.spec->to_string();
    jc["seed_level"] = c.seed_level;
    json nu = json::array();
    for (const auto& x : c.nu_seed) nu.push_back(int_to_json(x));
    jc["nu_seed"] = std::move(nu);
    jc["certified"] = c.certified;
    json eta = json::array();
    for (const auto& e : c.eta_trace) eta.push_back(rat_to_string(e.hi));
    jc["eta_sup_trace"] = std::move(eta);
    j.push_back(std::move(jc));
  }
  return j;
}

std::string series_csv(const Verdict& v) {
  std::ostringstream os;
  os << "n,term_lo,term_hi\n";
  for (const auto& t : v.series)
    os << t.level << "," << rat_to_string(t.value.lo) << "," << rat_to_string(t.value.hi) << "\n";
  return os.str();
}

std::string masses_csv(const BratteliDiagram& d, const MeasureEnclosure& mu) {
  std::ostringstream os;
  os << "level,vertex,lo,hi\n";
  for (std::size_t n = 1; n <= mu.audited_depth; ++n) {
    auto masses = tower_mass(d, mu, n);
    for (std::size_t v = 0; v < masses.size(); ++v)
      os << n << "," << (v + 1) << "," << rat_to_string(masses[v].lo) << ","
         << rat_to_string(masses[v].hi) << "\n";
  }
  return os.str();
}

}  // namespace bv
