// Command-line surface for the exact cross-ratio degree engine.
//
//   tropcross degree <conditions.json>      exact degree + preimage curves
//   tropcross triangulation --n ... --diagonals ...
//                                           construction vs engine cross-check
//   tropcross spectrum --n ... --mode ...   degree-spectrum search
//   tropcross verify --n-max ...            full invariant suite
//
// All output goes to standard output (or --output) as JSON, or as a human
// table with --format table. Every command is deterministic given its flags
// and --seed, for every --jobs setting.
//
// Exit codes: 0 ok, 1 input error, 2 genericity failure, 3 verification
// failure.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tropcross/constructions.hpp"
#include "tropcross/crossratio.hpp"
#include "tropcross/degree.hpp"
#include "tropcross/json_io.hpp"
#include "tropcross/search.hpp"
#include "tropcross/tree.hpp"
#include "tropcross/triangulation.hpp"

namespace {

using namespace tropcross;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNonGeneric = 2;
constexpr int kExitVerification = 3;

struct CommonFlags {
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Seed for all randomness (default 0)");
  cmd->add_option("--jobs", flags.jobs,
                  "Parallelism bound; 0 = hardware default, capped at 8");
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));
  cmd->add_option("--output", flags.output, "Write output to this file instead of stdout");
}

void emit(const CommonFlags& flags, const json& payload, const std::string& table) {
  const std::string text = flags.format == "table" ? table : payload.dump(2) + "\n";
  if (flags.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.output);
    if (!out) throw std::runtime_error("cannot open output file: " + flags.output);
    out << text;
  }
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<Diagonal> parse_diagonals(const std::string& s) {
  std::vector<Diagonal> out;
  for (const auto& item : split_on(s, ',')) {
    const auto ends = split_on(item, '-');
    if (ends.size() != 2)
      throw std::invalid_argument("diagonal '" + item + "' is not of the form a-b");
    try {
      out.emplace_back(std::stoi(ends[0]), std::stoi(ends[1]));
    } catch (const std::exception&) {
      throw std::invalid_argument("diagonal '" + item + "' has non-numeric endpoints");
    }
  }
  return out;
}

Interp parse_interp(const std::string& s) {
  if (s == "dual") return Interp::dual;
  if (s == "neighboring") return Interp::neighboring;
  if (s == "intersecting") return Interp::intersecting;
  throw std::invalid_argument("unknown interpretation: " + s +
                              " (expected dual, neighboring or intersecting)");
}

std::string interp_name(Interp i) {
  switch (i) {
    case Interp::dual: return "dual";
    case Interp::neighboring: return "neighboring";
    case Interp::intersecting: return "intersecting";
  }
  return "?";
}

std::vector<Rational> parse_lengths(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split_on(s, ',')) out.push_back(Rational::parse(item));
  return out;
}

// ---------------------------------------------------------------- degree --

int run_degree(const std::string& path, bool generic, const CommonFlags& flags) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitInput;
  }
  json parsed;
  try {
    parsed = json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitInput;
  }
  const CrossRatioSet crs = crossratioset_from_json(parsed);
  const DegreeResult res = generic ? compute_degree_generic(crs, flags.seed, flags.jobs)
                                   : compute_degree(crs, flags.jobs);

  std::ostringstream table;
  table << "degree: " << res.degree.get_str() << "\n"
        << "conditions: " << crs.items.size() << " on n=" << crs.n << "\n"
        << "curves (" << res.curves.size() << "):\n";
  for (std::size_t i = 0; i < res.curves.size(); ++i)
    table << "  [" << i + 1 << "] mult " << res.curves[i].multiplicity.get_str() << "  "
          << res.curves[i].tree.to_text() << "\n";
  emit(flags, degree_result_to_json(res), table.str());
  return kExitOk;
}

// --------------------------------------------------------- triangulation --

struct TriangulationPlan {
  Triangulation tri;
  std::vector<Interp> interps;
  std::optional<std::vector<Rational>> lengths;  // absent = draw generic
};

TriangulationPlan parse_triangulation_plan(int n, const std::string& diagonals,
                                           const std::string& interp,
                                           const std::string& lengths) {
  std::vector<Diagonal> diags = parse_diagonals(diagonals);
  const std::size_t m = diags.size();

  std::vector<Interp> interps;
  const auto interp_items = split_on(interp, ',');
  if (interp_items.size() == 1) {
    interps.assign(m, parse_interp(interp_items[0]));
  } else if (interp_items.size() == m) {
    for (const auto& item : interp_items) interps.push_back(parse_interp(item));
  } else {
    throw std::invalid_argument(
        "need one interpretation or one per diagonal (" + std::to_string(m) + ")");
  }

  std::optional<std::vector<Rational>> lens;
  if (!lengths.empty()) {
    lens = parse_lengths(lengths);
    if (lens->size() != m)
      throw std::invalid_argument("need one length per diagonal (" + std::to_string(m) +
                                  "), got " + std::to_string(lens->size()));
  }

  // Triangulation sorts its diagonals; keep per-diagonal data aligned with
  // the user's order by sorting the zipped triples the same way.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&diags](std::size_t a, std::size_t b) { return diags[a] < diags[b]; });
  std::vector<Diagonal> sorted_diags;
  std::vector<Interp> sorted_interps;
  std::vector<Rational> sorted_lens;
  for (std::size_t i : order) {
    sorted_diags.push_back(diags[i]);
    sorted_interps.push_back(interps[i]);
    if (lens) sorted_lens.push_back((*lens)[i]);
  }
  TriangulationPlan plan{Triangulation(n, std::move(sorted_diags)),
                         std::move(sorted_interps), std::nullopt};
  if (lens) plan.lengths = std::move(sorted_lens);
  return plan;
}

int run_triangulation(const TriangulationPlan& plan, const CommonFlags& flags) {
  const auto& diags = plan.tri.diagonals();

  // With explicit lengths a non-generic draw is the user's to fix (exit 2);
  // otherwise retry deterministic generic draws, like the engine does.
  std::vector<Rational> lengths;
  ConstructionResult built;
  DegreeResult engine;
  if (plan.lengths) {
    lengths = *plan.lengths;
    built = preimage_by_construction(plan.tri, plan.interps, lengths);
    engine = compute_degree(derive_crossratios(plan.tri, plan.interps, lengths), flags.jobs);
  } else {
    std::vector<LabelSet> sets;
    for (const auto& d : diags) sets.push_back(diagonal_markings(plan.tri.n(), d));
    bool done = false;
    for (int attempt = 0; attempt < 64 && !done; ++attempt) {
      lengths = generic_lengths(sets, detail::mix_seed(flags.seed, attempt));
      try {
        built = preimage_by_construction(plan.tri, plan.interps, lengths);
        engine =
            compute_degree(derive_crossratios(plan.tri, plan.interps, lengths), flags.jobs);
        done = true;
      } catch (const NonGenericError&) {
      }
    }
    if (!done) throw GenericityFailure("64 consecutive non-generic draws");
  }

  bool agrees = engine.degree == built.degree && engine.curves.size() == built.curves.size();
  if (agrees)
    for (std::size_t i = 0; i < engine.curves.size(); ++i)
      if (engine.curves[i].tree != built.curves[i].tree ||
          engine.curves[i].multiplicity != built.curves[i].multiplicity)
        agrees = false;

  json j{{"triangulation", json::object()},
         {"engine", degree_result_to_json(engine)},
         {"construction", construction_result_to_json(built)},
         {"agrees", agrees}};
  j["triangulation"]["n"] = plan.tri.n();
  j["triangulation"]["diagonals"] = json::array();
  j["triangulation"]["interpretations"] = json::array();
  j["triangulation"]["lengths"] = json::array();
  for (std::size_t i = 0; i < diags.size(); ++i) {
    j["triangulation"]["diagonals"].push_back({diags[i].a, diags[i].b});
    j["triangulation"]["interpretations"].push_back(interp_name(plan.interps[i]));
    j["triangulation"]["lengths"].push_back(lengths[i].to_string());
  }

  std::ostringstream table;
  table << built.expected_count.get_str() << " curve"
        << (built.expected_count == 1 ? "" : "s") << " × mult "
        << built.expected_multiplicity.get_str() << "; degree " << built.degree.get_str()
        << "; " << (agrees ? "oracle agrees" : "ORACLE MISMATCH") << "\n"
        << "inner triangles d=" << built.d << ", all-neighboring with strict triangle"
        << " inequalities k=" << built.k << "\n";
  for (std::size_t i = 0; i < diags.size(); ++i)
    table << "  diagonal " << diags[i].a << "-" << diags[i].b << "  "
          << interp_name(plan.interps[i]) << "  length " << lengths[i].to_string() << "\n";
  for (std::size_t i = 0; i < built.curves.size(); ++i)
    table << "  curve [" << i + 1 << "] mult " << built.curves[i].multiplicity.get_str()
          << "  " << built.curves[i].tree.to_text() << "\n";
  emit(flags, j, table.str());
  return agrees ? kExitOk : kExitVerification;
}

// -------------------------------------------------------------- spectrum --

int run_spectrum(int n, const std::string& mode_name, std::uint64_t budget,
                 const std::string& checkpoint, bool force, const CommonFlags& flags) {
  const SpectrumMode mode = spectrum_mode_from_string(mode_name);
  const SpectrumReport rep =
      spectrum(n, mode, budget, flags.seed, flags.jobs, checkpoint, force);

  std::ostringstream table;
  table << "n: " << rep.n << "  mode: " << to_string(rep.mode) << "  seed: " << rep.seed
        << "  instances: " << rep.instances_checked << "\n"
        << "degrees:";
  for (const auto& d : rep.degrees()) table << " " << d.get_str();
  table << "\n";
  for (const auto& [deg, w] : rep.witnesses) {
    table << "  degree " << deg.get_str() << "  index " << w.index << "  supports";
    for (const auto& s : w.supports) {
      table << " {";
      for (std::size_t i = 0; i < s.size(); ++i) table << (i ? "," : "") << s[i];
      table << "}";
    }
    table << "\n";
  }
  emit(flags, spectrum_report_to_json(rep), table.str());
  return kExitOk;
}

// ---------------------------------------------------------------- verify --

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Degree of one support set under an alternative pairing and fresh lengths;
// used by the invariance check.
BigInt degree_with_pairing(int n, const std::vector<LabelSet>& supports,
                           const std::vector<int>& pairing_choice, std::uint64_t seed) {
  std::vector<CrossRatio> items;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const auto& s = supports[i];
    switch (pairing_choice[i] % 3) {
      case 0: items.emplace_back(s[0], s[1], s[2], s[3], Rational(1)); break;
      case 1: items.emplace_back(s[0], s[2], s[1], s[3], Rational(1)); break;
      default: items.emplace_back(s[0], s[3], s[1], s[2], Rational(1)); break;
    }
  }
  return compute_degree_generic(CrossRatioSet(n, std::move(items)), seed, 1).degree;
}

int run_verify(int n_max, const CommonFlags& flags) {
  std::vector<Check> checks;

  {  // Trivalent type and triangulation counts.
    bool ok = true;
    std::string detail;
    const std::vector<std::size_t> expect_trees = {1, 3, 15, 105, 945, 10395};
    for (int n = 3; n <= std::min(8, n_max); ++n) {
      LabelSet labels(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
      const auto count = enumerate_trivalent_trees(labels).size();
      if (count != expect_trees[static_cast<std::size_t>(n - 3)]) {
        ok = false;
        detail += "n=" + std::to_string(n) + " trees=" + std::to_string(count) + " ";
      }
    }
    const std::vector<std::size_t> expect_tri = {2, 5, 14, 42, 132, 429};
    for (int n = 4; n <= std::min(9, n_max); ++n) {
      const auto count = enumerate_triangulations(n).size();
      if (count != expect_tri[static_cast<std::size_t>(n - 4)]) {
        ok = false;
        detail += "n=" + std::to_string(n) + " triangulations=" + std::to_string(count) + " ";
      }
    }
    checks.push_back({"enumeration counts", ok, ok ? "double factorial + Catalan" : detail});
  }

  {  // Construction vs engine across every triangulation, uniform readings.
    bool ok = true;
    std::string detail;
    std::size_t cases = 0;
    for (int n = 4; n <= n_max && ok; ++n) {
      for (const auto& tri : enumerate_triangulations(n)) {
        if (!ok) break;
        std::vector<LabelSet> sets;
        for (const auto& d : tri.diagonals()) sets.push_back(diagonal_markings(n, d));
        for (const Interp interp : {Interp::dual, Interp::neighboring, Interp::intersecting}) {
          const std::vector<Interp> interps(sets.size(), interp);
          const std::uint64_t case_seed =
              detail::mix_seed(flags.seed, static_cast<std::uint64_t>(cases));
          bool done = false;
          for (int attempt = 0; attempt < 64 && !done; ++attempt) {
            const auto lengths =
                generic_lengths(sets, detail::mix_seed(case_seed, attempt));
            try {
              const auto built = preimage_by_construction(tri, interps, lengths);
              const auto engine = compute_degree(
                  derive_crossratios(tri, interps, lengths), flags.jobs);
              done = true;
              const BigInt two_d = BigInt(1) << built.d;
              bool same = engine.degree == built.degree && engine.degree == two_d &&
                          engine.curves.size() == built.curves.size();
              if (same)
                for (std::size_t i = 0; i < engine.curves.size(); ++i)
                  if (engine.curves[i].tree != built.curves[i].tree ||
                      engine.curves[i].multiplicity != built.curves[i].multiplicity)
                    same = false;
              if (!same) {
                ok = false;
                detail = "n=" + std::to_string(n) + " case " + std::to_string(cases);
              }
            } catch (const NonGenericError&) {
            }
          }
          if (!done) {
            ok = false;
            detail = "n=" + std::to_string(n) + " case " + std::to_string(cases) +
                     ": no generic draw";
          }
          ++cases;
          if (!ok) break;
        }
      }
    }
    checks.push_back({"construction matches engine on all triangulations", ok,
                      ok ? std::to_string(cases) + " cases" : detail});
  }

  {  // Degree invariance under pairing choice and length draws.
    bool ok = true;
    std::string detail;
    std::size_t cases = 0;
    const int n = std::clamp(n_max, 5, 7);
    for (std::uint64_t i = 0; i < 10 && ok; ++i) {
      const auto supports = candidate_supports(n, SpectrumMode::sample, flags.seed, i);
      const BigInt base = degree_with_pairing(
          n, supports, std::vector<int>(supports.size(), 0), detail::mix_seed(flags.seed, ~i));
      for (int variant = 1; variant <= 4 && ok; ++variant) {
        std::vector<int> pairing;
        std::mt19937_64 rng(detail::mix_seed(flags.seed, i * 16 + variant));
        for (std::size_t k = 0; k < supports.size(); ++k)
          pairing.push_back(static_cast<int>(rng() % 3));
        const BigInt alt = degree_with_pairing(
            n, supports, pairing, detail::mix_seed(flags.seed, i * 16 + variant + 1000));
        ++cases;
        if (alt != base) {
          ok = false;
          detail = "candidate " + std::to_string(i) + " variant " + std::to_string(variant);
        }
      }
    }
    checks.push_back({"degree ignores pairing choice and lengths", ok,
                      ok ? std::to_string(cases) + " comparisons at n=" + std::to_string(n)
                         : detail});
  }

  bool all = true;
  std::ostringstream table;
  json jchecks = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    table << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
    jchecks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  table << (all ? "verification passed" : "VERIFICATION FAILED") << "\n";
  emit(flags, json{{"n_max", n_max}, {"checks", jchecks}, {"pass", all}}, table.str());
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact tropical cross-ratio degree engine"};
  app.require_subcommand(1);

  CommonFlags degree_flags;
  std::string degree_input;
  bool degree_generic = false;
  auto* degree_cmd =
      app.add_subcommand("degree", "Compute the exact degree of a cross-ratio set");
  degree_cmd->add_option("input", degree_input, "Cross-ratio set JSON file")->required();
  degree_cmd->add_flag("--generic", degree_generic,
                       "Ignore the file's lengths and draw generic ones from --seed");
  add_common(degree_cmd, degree_flags);

  CommonFlags tri_flags;
  int tri_n = 0;
  std::string tri_diagonals, tri_interp = "dual", tri_lengths;
  auto* tri_cmd = app.add_subcommand(
      "triangulation", "Derive conditions from a polygon triangulation and cross-check "
                       "the curve construction against the engine");
  tri_cmd->add_option("--n", tri_n, "Number of polygon edges / markings")->required();
  tri_cmd->add_option("--diagonals", tri_diagonals, "Diagonals, e.g. 2-4,4-6,2-6")
      ->required();
  tri_cmd->add_option("--interp", tri_interp,
                      "Interpretation: dual, neighboring or intersecting; one value or "
                      "one per diagonal");
  tri_cmd->add_option("--lengths", tri_lengths,
                      "Condition lengths, e.g. 1,1,1 (default: generic from --seed)");
  add_common(tri_cmd, tri_flags);

  CommonFlags spec_flags;
  int spec_n = 0;
  std::string spec_mode = "exhaustive", spec_checkpoint;
  std::uint64_t spec_budget = 1000;
  bool spec_force = false;
  auto* spec_cmd = app.add_subcommand("spectrum", "Explore the achievable degrees for n");
  spec_cmd->add_option("--n", spec_n, "Number of markings")->required();
  spec_cmd->add_option("--mode", spec_mode, "exhaustive, case-split or sample");
  spec_cmd->add_option("--budget", spec_budget,
                       "Candidates to draw in case-split/sample modes (default 1000)");
  spec_cmd->add_option("--checkpoint", spec_checkpoint,
                       "JSON-lines checkpoint file; reruns resume past recorded chunks");
  spec_cmd->add_flag("--force", spec_force, "Run exhaustive mode beyond n = 7");
  add_common(spec_cmd, spec_flags);

  CommonFlags verify_flags;
  int verify_n_max = 6;
  auto* verify_cmd = app.add_subcommand("verify", "Run the full invariant suite");
  verify_cmd->add_option("--n-max", verify_n_max, "Largest n to sweep (<= 9)")
      ->check(CLI::Range(4, 9));
  add_common(verify_cmd, verify_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (degree_cmd->parsed()) return run_degree(degree_input, degree_generic, degree_flags);
    if (tri_cmd->parsed())
      return run_triangulation(
          parse_triangulation_plan(tri_n, tri_diagonals, tri_interp, tri_lengths),
          tri_flags);
    if (spec_cmd->parsed())
      return run_spectrum(spec_n, spec_mode, spec_budget, spec_checkpoint, spec_force,
                          spec_flags);
    if (verify_cmd->parsed()) return run_verify(verify_n_max, verify_flags);
  } catch (const NonGenericError& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return kExitNonGeneric;
  } catch (const GenericityFailure& e) {
    std::cerr << "genericity failure: " << e.what() << "\n";
    return kExitNonGeneric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
