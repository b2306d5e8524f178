#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <json.hpp>

#include "tropcross/json_io.hpp"

using namespace tropcross;
using nlohmann::json;

namespace {

CrossRatioSet hexagon_neighboring() {
  return CrossRatioSet(6, {CrossRatio(2, 3, 4, 5, Rational(1)),
                           CrossRatio(1, 6, 2, 3, Rational(1)),
                           CrossRatio(1, 6, 4, 5, Rational(1))});
}

}  // namespace

TEST_CASE("cross-ratio JSON round-trips and has the documented shape") {
  const CrossRatio cr(2, 5, 3, 4, Rational(7, 2));
  const json j = crossratio_to_json(cr);
  CHECK(j.dump() == R"({"length":"7/2","pairs":[[2,5],[3,4]]})");
  CHECK(crossratio_from_json(j) == cr);

  // Pairing canonicalization happens on parse as well.
  const auto parsed = crossratio_from_json(json::parse(
      R"({"pairs": [[4,3], [5,2]], "length": "7/2"})"));
  CHECK(parsed == cr);

  CHECK_THROWS_AS(crossratio_from_json(json::parse(R"({"pairs": [[1,2],[3]], "length": "1"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(crossratio_from_json(json::parse(R"({"pairs": [[1,2],[3,4]]})")),
                  json::exception);
  CHECK_THROWS_AS(crossratio_from_json(json::parse(R"({"pairs": [[1,2],[2,4]], "length": "1"})")),
                  std::invalid_argument);
}

TEST_CASE("condition-set JSON round-trips") {
  const auto crs = hexagon_neighboring();
  const json j = crossratioset_to_json(crs);
  CHECK(j.at("n") == 6);
  REQUIRE(j.at("crossratios").size() == 3);
  const auto back = crossratioset_from_json(j);
  CHECK(back.n == crs.n);
  CHECK(back.items == crs.items);

  CHECK_THROWS_AS(crossratioset_from_json(json::parse(R"({"n": 6})")), json::exception);
  CHECK_THROWS_AS(crossratioset_from_json(json::parse(
                      R"({"n": 3, "crossratios": []})")),
                  std::invalid_argument);
}

TEST_CASE("degree-result JSON carries curves with their exact lengths") {
  const auto res = compute_degree(hexagon_neighboring());
  const json j = degree_result_to_json(res);
  CHECK(j.at("degree") == 2);
  CHECK(j.at("lengths").size() == 3);
  CHECK(j.at("lengths").at(0) == "1");
  REQUIRE(j.at("curves").size() == res.curves.size());
  for (std::size_t i = 0; i < res.curves.size(); ++i) {
    const auto& jc = j.at("curves").at(i);
    CHECK(jc.at("tree").get<std::string>() ==
          res.curves[i].tree.combinatorial().to_text());
    CHECK(jc.at("lengths").size() == 3);
  }

  const auto back = degree_result_from_json(j);
  CHECK(back.degree == res.degree);
  CHECK(back.lengths_used == res.lengths_used);
  REQUIRE(back.curves.size() == res.curves.size());
  for (std::size_t i = 0; i < res.curves.size(); ++i) {
    CHECK(back.curves[i].tree == res.curves[i].tree);
    CHECK(back.curves[i].multiplicity == res.curves[i].multiplicity);
  }
}

TEST_CASE("construction-result JSON exposes the structure numbers") {
  const Triangulation tri(6, {Diagonal(2, 4), Diagonal(2, 6), Diagonal(4, 6)});
  const auto res = preimage_by_construction(
      tri, std::vector<Interp>(3, Interp::neighboring), std::vector<Rational>(3, Rational(1)));
  const json j = construction_result_to_json(res);
  CHECK(j.at("degree") == 2);
  CHECK(j.at("d") == 1);
  CHECK(j.at("k") == 1);
  CHECK(j.at("expected_count") == 1);
  CHECK(j.at("expected_multiplicity") == 2);
  REQUIRE(j.at("curves").size() == 1);
  CHECK(j.at("curves").at(0).at("multiplicity") == 2);
}

TEST_CASE("spectrum-report JSON lists degrees and witnesses") {
  const auto rep = spectrum(5, SpectrumMode::exhaustive, 0, 11);
  const json j = spectrum_report_to_json(rep);
  CHECK(j.at("n") == 5);
  CHECK(j.at("mode") == "exhaustive");
  CHECK(j.at("seed") == 11);
  CHECK(j.at("instances_checked") == 4);
  REQUIRE(j.at("degrees").is_array());
  CHECK(j.at("degrees").size() == rep.witnesses.size());
  for (const auto& [deg, w] : rep.witnesses) {
    const auto& jw = j.at("witnesses").at(deg.get_str());
    CHECK(jw.at("index") == w.index);
    CHECK(jw.at("supports").size() == w.supports.size());
  }
}
