// Python bindings: diagrams are opaque handles; reports come back as JSON text and are
// parsed into dicts by the bvdiag package wrapper.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "bv/constructions.hpp"
#include "bv/io.hpp"
#include "bv/measure.hpp"
#include "bv/spectral.hpp"
#include "bv/transform.hpp"

namespace py = pybind11;
using namespace bv;
using nlohmann::json;

namespace {

AngleSpec angle_of(const std::string& text) { return AngleSpec::parse(text); }

std::pair<BratteliDiagram, MeasureEnclosure> audited(const BratteliDiagram& d0,
                                                     std::size_t depth, std::size_t margin) {
  std::size_t want = depth + margin;
  BratteliDiagram d = d0.can_deepen() && d0.depth() < want ? d0.deepened(want) : d0;
  auto ms = invariant_measures(d, std::min(want, d.depth()), make_rat(1, 1000));
  if (ms.size() != 1) throw std::runtime_error("diagram is not uniquely ergodic at this depth");
  return {std::move(d), std::move(ms[0])};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ordered Bratteli-Vershik diagrams: exact eigenvalue tests";

  py::class_<BratteliDiagram>(m, "Diagram")
      .def_property_readonly("depth", &BratteliDiagram::depth)
      .def("vertex_count", &BratteliDiagram::vertex_count, py::arg("level"))
      .def(
          "heights",
          [](const BratteliDiagram& d, std::size_t n) {
            std::vector<std::string> out;
            for (const auto& h : d.heights(n)) out.push_back(h.get_str());
            return out;
          },
          py::arg("level"))
      .def(
          "incidence",
          [](const BratteliDiagram& d, std::size_t n) {
            const IntMatrix& M = d.incidence_matrix(n);
            std::vector<std::vector<long>> out(M.rows(), std::vector<long>(M.cols()));
            for (std::size_t i = 0; i < M.rows(); ++i)
              for (std::size_t j = 0; j < M.cols(); ++j) out[i][j] = M(i, j).get_si();
            return out;
          },
          py::arg("level"))
      .def("deepened", &BratteliDiagram::deepened, py::arg("depth"))
      .def("to_json", [](const BratteliDiagram& d) { return diagram_to_json(d).dump(); });

  m.def("from_json", [](const std::string& text) { return diagram_from_json(json::parse(text)); });
  m.def(
      "sturmian",
      [](const std::string& cf, std::size_t depth, bool simplify) {
        return sturmian(angle_of("cf:" + cf), depth, simplify);
      },
      py::arg("cf"), py::arg("depth") = 8, py::arg("simplify") = false);
  m.def(
      "odometer",
      [](const std::vector<long>& q, std::size_t depth) {
        std::vector<Int> qq(q.begin(), q.end());
        return odometer(qq, true, depth);
      },
      py::arg("q"), py::arg("depth") = 8);
  m.def(
      "toeplitz",
      [](std::uint32_t vertices, const std::vector<long>& q, std::size_t depth) {
        std::vector<Int> qq(q.begin(), q.end());
        return toeplitz_canonical(vertices, qq, true, depth);
      },
      py::arg("vertices"), py::arg("q"), py::arg("depth") = 8);
  m.def("telescope", [](const BratteliDiagram& d, const std::vector<std::size_t>& cuts) {
    return telescope(d, cuts);
  });

  m.def("properness",
        [](const BratteliDiagram& d) { return properness_to_json(check_properness(d)).dump(); });

  m.def(
      "measures",
      [](const BratteliDiagram& d0, std::size_t depth) {
        BratteliDiagram d = d0.can_deepen() && d0.depth() < depth ? d0.deepened(depth) : d0;
        auto ms = invariant_measures(d, std::min(depth, d.depth()), make_rat(1, 1000));
        return measures_to_json(d, ms).dump();
      },
      py::arg("diagram"), py::arg("depth"));

  m.def(
      "candidates",
      [](const BratteliDiagram& d0, std::size_t depth, std::size_t bound) {
        auto [d, mu] = audited(d0, depth, depth + 8);
        CandidateOptions opts;
        opts.seed_bound = bound;
        return candidates_to_json(enumerate_candidates(d, mu, depth, opts)).dump();
      },
      py::arg("diagram"), py::arg("depth") = 6, py::arg("bound") = 8);

  m.def(
      "test_continuous",
      [](const BratteliDiagram& d, const std::string& alpha, std::size_t depth) {
        SpectralOptions opts;
        return verdict_to_json(test_continuous(d, angle_of(alpha), depth, opts)).dump();
      },
      py::arg("diagram"), py::arg("alpha"), py::arg("depth") = 12);

  m.def(
      "test_measurable",
      [](const BratteliDiagram& d0, const std::string& alpha, std::size_t grid) {
        SpectralOptions opts;
        auto [d, mu] = audited(d0, grid, 6);
        auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));
        auto rep = test_measurable(d, mu, clean, angle_of(alpha), grid, opts);
        json j;
        j["condition2"] = verdict_to_json(rep.verdict);
        j["condition1"] = verdict_to_json(rep.condition1);
        j["clean"] = clean_to_json(clean);
        return j.dump();
      },
      py::arg("diagram"), py::arg("alpha"), py::arg("grid") = 10);

  m.def(
      "test_exact_rank",
      [](const BratteliDiagram& d0, const std::string& alpha, std::size_t depth) {
        SpectralOptions opts;
        auto [d, mu] = audited(d0, depth, 6);
        auto clean = clean_report(d, mu, default_clean_cutoff(d, mu));
        return verdict_to_json(
                   test_exact_rank_series(d, mu, clean, angle_of(alpha), {}, depth, opts))
            .dump();
      },
      py::arg("diagram"), py::arg("alpha"), py::arg("depth") = 10);

  m.def("rational_shortcut",
        [](const BratteliDiagram& d, const std::string& alpha) -> py::object {
          AngleSpec a = angle_of(alpha);
          if (!a.is_rational()) throw std::invalid_argument("rational_shortcut needs rat:p/q");
          auto level = rational_shortcut(d, a.rational_value());
          if (!level) return py::none();
          return py::int_(*level);
        });

  m.def(
      "spoil",
      [](const BratteliDiagram& d, const std::vector<std::string>& targets, std::size_t levels) {
        std::vector<AngleSpec> ts;
        for (const auto& t : targets) ts.push_back(angle_of(t));
        SpoilOptions opts;
        opts.max_levels = levels;
        auto res = spoil_continuous(d, ts, opts);
        json j;
        j["cuts"] = res.cuts;
        j["witness_count"] = res.witnesses.size();
        j["diagram"] = diagram_to_json(res.diagram);
        return j.dump();
      },
      py::arg("diagram"), py::arg("targets"), py::arg("levels") = 2);

  m.def(
      "orbit",
      [](const BratteliDiagram& d, std::size_t depth, std::size_t steps) {
        PathPoint x = minimal_path_into(d, depth, 0);
        std::vector<std::pair<std::vector<std::uint32_t>, std::string>> log;
        for (std::size_t s = 0; s <= steps; ++s) {
          log.emplace_back(x.ranks, entrance_time(d, x, depth).get_str());
          if (s < steps) x = vershik_successor(d, x);
        }
        return log;
      },
      py::arg("diagram"), py::arg("depth"), py::arg("steps"));
}
