#pragma once

// JSON forms of the public value types.
//
//   cross-ratio        {"pairs": [[a,b],[c,d]], "length": "p/q"}
//   condition set      {"n": n, "crossratios": [<cross-ratio>, ...]}
//   degree result      {"degree": k, "lengths": ["p/q", ...],
//                       "curves": [{"tree": "<text form>",
//                                   "lengths": {"<split>": "p/q", ...},
//                                   "multiplicity": m}, ...]}
//   construction       degree-result curve schema plus
//                      {"d", "k", "expected_count", "expected_multiplicity"}
//   spectrum report    {"n", "mode", "seed", "instances_checked",
//                       "degrees": [...],
//                       "witnesses": {"<degree>": {"index", "supports"}}}
//
// Curve trees are serialized combinatorially in the text form; their edge
// lengths ride in the sibling "lengths" object keyed by split. Exact
// integers are emitted as JSON numbers when they fit in 64 bits and as
// decimal strings beyond that; rationals are always "p/q" strings.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tropcross/constructions.hpp"
#include "tropcross/crossratio.hpp"
#include "tropcross/degree.hpp"
#include "tropcross/rational.hpp"
#include "tropcross/search.hpp"
#include "tropcross/tree.hpp"

namespace tropcross {

namespace detail {

inline nlohmann::json bigint_to_json(const BigInt& v) {
  if (v.fits_slong_p()) return nlohmann::json(v.get_si());
  return nlohmann::json(v.get_str());
}

inline BigInt bigint_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number_integer()) return BigInt(j.get<long>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw std::invalid_argument(std::string(what) + ": expected integer or decimal string");
}

inline std::string split_key(const Split& s) { return join_labels(s.part); }

}  // namespace detail

inline nlohmann::json crossratio_to_json(const CrossRatio& cr) {
  const auto& p = cr.first_pair();
  const auto& q = cr.second_pair();
  return nlohmann::json{{"pairs", {{p[0], p[1]}, {q[0], q[1]}}},
                        {"length", cr.length().to_string()}};
}

inline CrossRatio crossratio_from_json(const nlohmann::json& j) {
  const auto& pairs = j.at("pairs");
  if (!pairs.is_array() || pairs.size() != 2 || pairs.at(0).size() != 2 ||
      pairs.at(1).size() != 2)
    throw std::invalid_argument("cross-ratio: \"pairs\" must be two pairs of markings");
  return CrossRatio(pairs.at(0).at(0).get<Label>(), pairs.at(0).at(1).get<Label>(),
                    pairs.at(1).at(0).get<Label>(), pairs.at(1).at(1).get<Label>(),
                    Rational::parse(j.at("length").get<std::string>()));
}

inline nlohmann::json crossratioset_to_json(const CrossRatioSet& crs) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& cr : crs.items) items.push_back(crossratio_to_json(cr));
  return nlohmann::json{{"n", crs.n}, {"crossratios", std::move(items)}};
}

inline CrossRatioSet crossratioset_from_json(const nlohmann::json& j) {
  std::vector<CrossRatio> items;
  for (const auto& item : j.at("crossratios")) items.push_back(crossratio_from_json(item));
  return CrossRatioSet(j.at("n").get<int>(), std::move(items));
}

namespace detail {

inline nlohmann::json curve_to_json(const PreimageCurve& curve) {
  nlohmann::json lens = nlohmann::json::object();
  const auto& splits = curve.tree.splits();
  const auto& lengths = curve.tree.lengths();
  for (std::size_t i = 0; i < splits.size(); ++i)
    lens[split_key(splits[i])] = lengths[i].to_string();
  return nlohmann::json{{"tree", curve.tree.combinatorial().to_text()},
                        {"lengths", std::move(lens)},
                        {"multiplicity", bigint_to_json(curve.multiplicity)}};
}

inline PreimageCurve curve_from_json(const nlohmann::json& j) {
  const MarkedTree shape = MarkedTree::from_text(j.at("tree").get<std::string>());
  std::vector<Rational> lengths;
  lengths.reserve(shape.splits().size());
  for (const auto& s : shape.splits()) {
    const std::string key = split_key(s);
    if (!j.at("lengths").contains(key))
      throw std::invalid_argument("curve: missing length for split {" + key + "}");
    lengths.push_back(Rational::parse(j.at("lengths").at(key).get<std::string>()));
  }
  return PreimageCurve{MarkedTree(shape.labels(), shape.splits(), std::move(lengths)),
                       bigint_from_json(j.at("multiplicity"), "curve multiplicity")};
}

}  // namespace detail

inline nlohmann::json degree_result_to_json(const DegreeResult& res) {
  nlohmann::json lens = nlohmann::json::array();
  for (const auto& l : res.lengths_used) lens.push_back(l.to_string());
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : res.curves) curves.push_back(detail::curve_to_json(c));
  return nlohmann::json{{"degree", detail::bigint_to_json(res.degree)},
                        {"lengths", std::move(lens)},
                        {"curves", std::move(curves)}};
}

inline DegreeResult degree_result_from_json(const nlohmann::json& j) {
  DegreeResult res;
  res.degree = detail::bigint_from_json(j.at("degree"), "degree");
  for (const auto& l : j.at("lengths"))
    res.lengths_used.push_back(Rational::parse(l.get<std::string>()));
  for (const auto& c : j.at("curves")) res.curves.push_back(detail::curve_from_json(c));
  return res;
}

inline nlohmann::json construction_result_to_json(const ConstructionResult& res) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : res.curves) curves.push_back(detail::curve_to_json(c));
  return nlohmann::json{{"degree", detail::bigint_to_json(res.degree)},
                        {"d", res.d},
                        {"k", res.k},
                        {"expected_count", detail::bigint_to_json(res.expected_count)},
                        {"expected_multiplicity",
                         detail::bigint_to_json(res.expected_multiplicity)},
                        {"curves", std::move(curves)}};
}

inline nlohmann::json spectrum_report_to_json(const SpectrumReport& rep) {
  nlohmann::json degrees = nlohmann::json::array();
  nlohmann::json witnesses = nlohmann::json::object();
  for (const auto& [deg, w] : rep.witnesses) {
    degrees.push_back(detail::bigint_to_json(deg));
    nlohmann::json supports = nlohmann::json::array();
    for (const auto& s : w.supports) supports.push_back(s);
    witnesses[deg.get_str()] =
        nlohmann::json{{"index", w.index}, {"supports", std::move(supports)}};
  }
  return nlohmann::json{{"n", rep.n},
                        {"mode", to_string(rep.mode)},
                        {"seed", rep.seed},
                        {"instances_checked", rep.instances_checked},
                        {"degrees", std::move(degrees)},
                        {"witnesses", std::move(witnesses)}};
}

}  // namespace tropcross
