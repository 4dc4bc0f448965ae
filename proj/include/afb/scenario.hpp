#pragma once

// Corpus complexes, scenario execution, parameter sweeps, and report
// assembly. A scenario is a JSON document naming a complex, a bundle recipe,
// a Fredholm datum, group-algebra elements, and an ordered task list.
// Running it yields a report whose verdict drives the CLI exit code; for a
// fixed seed and version the report is byte-stable (timings are only added
// on request and are excluded from that contract).

#include <iosfwd>

#include "json.hpp"

#include "afb/indexengine.hpp"

namespace afb {

using ordered_json = nlohmann::ordered_json;

// circle | triangle | wedge | sphere | torus | rp2
SimplicialComplex corpus_complex(const std::string& name);

// Rank-one two-band projection family over the torus charts; its Chern
// number on the registered fundamental cycle is -1.
ProjectionFamily bott_family(const SimplicialComplex& k, int level = 2);

ProjectionFamily constant_family(const SimplicialComplex& k, const CMatrix& p,
                                 int level = 2);

ordered_json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const ordered_json& j);

// Deterministic corpus scenario; params: epsilon, seed, fiber (d0,d1,m),
// datum (symmetry|kernel|zero), rep (random|trivial|sign), level.
ordered_json generate_scenario(const std::string& corpus,
                               const std::map<std::string, std::string>& params);

struct RunOptions {
  std::map<std::string, double> tolerances;  // overrides, strongest
  int jobs = 1;
  bool timings = false;
};

ordered_json run_scenario(const ordered_json& scenario,
                          const RunOptions& opts = {});

// Logarithmic bisection of the scenario parameter at `param_path` (JSON
// pointer) between lo and hi, bracketing the threshold where the named task
// flips from pass to fail.
ordered_json run_sweep(const ordered_json& scenario,
                       const std::string& param_path, double lo, double hi,
                       const std::string& target, int steps,
                       const RunOptions& opts = {});

// Compares two reports ignoring timing fields; writes differing paths to
// out. Returns true when equal.
bool report_diff(const ordered_json& a, const ordered_json& b,
                 std::ostream& out);

std::string render_text(const ordered_json& report);

} // namespace afb
