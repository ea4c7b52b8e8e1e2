#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bv/diagram.hpp"
#include "bv/measure.hpp"
#include "bv/spectral.hpp"
#include "bv/transform.hpp"

namespace bv {

// Diagram file format: {"hat":[1,1], "levels":[{"0":[0,0,1],"1":[0,1]}, ...],
// "generator":{"family":"sturmian","cf":[1],"periodic":true}}. Vertex indices are
// 0-based in files and 1-based in reports.
BratteliDiagram diagram_from_json(const nlohmann::json& j);
nlohmann::json diagram_to_json(const BratteliDiagram& d);
BratteliDiagram load_diagram(const std::string& path);
void save_diagram(const BratteliDiagram& d, const std::string& path);

// Edit list file format: [{"level":3, "vertex":0, "order":[1,0]}, ...]
std::vector<OrderEdit> edits_from_json(const nlohmann::json& j);
std::vector<OrderEdit> load_edits(const std::string& path);

nlohmann::json interval_to_json(const Interval& x);
nlohmann::json verdict_to_json(const Verdict& v);
nlohmann::json properness_to_json(const PropernessReport& r);
nlohmann::json measures_to_json(const BratteliDiagram& d,
                                const std::vector<MeasureEnclosure>& measures);
nlohmann::json clean_to_json(const CleanReport& r);
nlohmann::json candidates_to_json(const std::vector<Candidate>& cs);

// CSV exports: verdict series "n,term_lo,term_hi" and tower masses "level,vertex,lo,hi"
std::string series_csv(const Verdict& v);
std::string masses_csv(const BratteliDiagram& d, const MeasureEnclosure& mu);

}  // namespace bv
