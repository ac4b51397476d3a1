#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pgdiscrim/gallery.hpp"
#include "pgdiscrim/problem_io.hpp"
#include "test_support.hpp"

using namespace pgdiscrim;
using nlohmann::json;
namespace ga = pgdiscrim::gallery;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("problem round trip") {
  const std::vector<gallery::GalleryCase> cases = {
      ga::two_bases(kPi / 2), ga::two_bases(0.7), ga::dihedral(2, 0.3),
      ga::three_axes(0.2, 0.5, 0.3), ga::fourier_mub(3, 0.6), ga::fourier_mub(4, 0.5),
      ga::appendix_a_case()};
  for (const auto& gc : cases) {
    CAPTURE(gc.name);
    const std::string text = problem_to_json_string(gc.problem);
    const PostInfoProblem loaded = problem_from_json_string(text);
    const StateEnsemble& a = gc.problem.ensemble();
    const StateEnsemble& b = loaded.ensemble();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.label(i) == b.label(i));
      CHECK(max_abs(a.element(i) - b.element(i)) <= 1e-12);
    }
    REQUIRE(loaded.block_count() == gc.problem.block_count());
    for (std::size_t l = 0; l < loaded.block_count(); ++l) {
      CHECK(loaded.partition().block(l) == gc.problem.partition().block(l));
    }
  }
}

TEST_CASE("file round trip") {
  const auto gc = ga::two_bases(1.0);
  const std::string path = "io_roundtrip_tmp.json";
  save_problem(gc.problem, path);
  const PostInfoProblem loaded = load_problem(path);
  CHECK(max_abs(loaded.ensemble().element(Label("+a")) -
                gc.problem.ensemble().element(Label("+a"))) <= 1e-12);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_problem("does_not_exist.json"), IoError);
}

TEST_CASE("validation failures carry the document context") {
  const auto gc = ga::two_bases(1.0);
  json doc = json::parse(problem_to_json_string(gc.problem));
  for (auto& [key, value] : doc["operators"].items()) {
    for (auto& row : value) {
      for (auto& entry : row) {
        entry[0] = entry[0].get<double>() * 0.98;
        entry[1] = entry[1].get<double>() * 0.98;
      }
    }
  }
  CHECK_THROWS_AS(problem_from_json_string(doc.dump()), ValidationError);
  try {
    problem_from_json_string(doc.dump(), "scaled.json");
  } catch (const ValidationError& err) {
    CHECK(std::string(err.what()).find("sum to") != std::string::npos);
    CHECK(err.path == "scaled.json");
  }
}

TEST_CASE("parse failures point into the document") {
  CHECK_THROWS_AS(problem_from_json_string("not json"), ParseError);
  json doc;
  doc["dim"] = 2;
  doc["labels"] = {"a", "b"};
  doc["operators"] = {{"a", {{1, 0}, {0, 0}}}};  // wrong shape, missing "b"
  doc["partition"] = json::array({json::array({"a"}), json::array({"b"})});
  try {
    problem_from_json_string(doc.dump(), "broken.json");
    CHECK(false);
  } catch (const ParseError& err) {
    CHECK(err.path.find("broken.json") != std::string::npos);
  }
}

TEST_CASE("shortcut form expands to the explicit form") {
  json doc;
  doc["dim"] = 2;
  doc["labels"] = json::array({"+a", "-a", "+b", "-b"});
  doc["partition"] =
      json::array({json::array({"+a", "-a"}), json::array({"+b", "-b"})});
  json states;
  const double c = std::cos(0.5), s = std::sin(0.5);
  auto state_json = [](const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int col = 0; col < m.cols(); ++col) {
        row.push_back(json::array({m(r, col).real(), m(r, col).imag()}));
      }
      rows.push_back(row);
    }
    return rows;
  };
  states["+a"] = state_json(ga::bloch_state(c, s, 0));
  states["-a"] = state_json(ga::bloch_state(-c, -s, 0));
  states["+b"] = state_json(ga::bloch_state(c, -s, 0));
  states["-b"] = state_json(ga::bloch_state(-c, s, 0));
  doc["states"] = states;
  doc["probabilities"] = {{"+a", 0.25}, {"-a", 0.25}, {"+b", 0.25}, {"-b", 0.25}};
  const PostInfoProblem loaded = problem_from_json_string(doc.dump());
  const PostInfoProblem expected = ga::two_bases(1.0).problem;
  for (std::size_t i = 0; i < expected.ensemble().size(); ++i) {
    CHECK(max_abs(loaded.ensemble().element(i) - expected.ensemble().element(i)) <= 1e-12);
  }
}

TEST_CASE("measurement serialization round trip") {
  const auto gc = ga::fourier_mub(3, 0.5);
  const Measurement& c0 = gc.reference_measurements.at("C0");
  const Measurement loaded = measurement_from_json_string(measurement_to_json_string(c0));
  CHECK(max_effect_difference(loaded, c0) <= 1e-12);
}

TEST_CASE("fraction parsing") {
  CHECK(parse_fraction("1/3") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(parse_fraction("0.25") == doctest::Approx(0.25));
  CHECK(parse_fraction("2/4") == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_fraction("1/0"), BadArgs);
  CHECK_THROWS_AS(parse_fraction("abc"), BadArgs);
  const auto weights = parse_weight_list("1/3,1/3,1/3");
  REQUIRE(weights.size() == 3);
  CHECK(weights[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("figure sweep") {
  const auto rows = sweep_figure4(kPi / 2 - 0.4, kPi / 2 + 0.4, 5);
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) {
    CHECK(std::abs(row.p_post_closed - row.p_post_numeric) <= 1e-6);
    CHECK(row.p_post_closed >= row.jmd_lower_bound - 1e-9);
  }
  CHECK(rows[2].theta == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(rows[2].p_post_closed - rows[2].jmd_lower_bound) <= 1e-9);

  std::ostringstream out;
  write_sweep_csv(rows, out);
  const std::string text = out.str();
  CHECK(text.find("theta,p_post_closed,p_post_numeric,jmd_lower_bound\n") == 0);
  CHECK(text.find(',') != std::string::npos);
  CHECK(text.find('.') != std::string::npos);

  // 9 decimal places per numeric field.
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto dot = field.find('.');
      REQUIRE(dot != std::string::npos);
      CHECK(field.size() - dot - 1 == 9);
    }
  }
  CHECK_THROWS_AS(sweep_figure4(0.5, 0.4, 5), BadAngle);
  CHECK_THROWS_AS(sweep_figure4_csv(0.4, 0.5, 3, "/no/such/dir/out.csv"), IoError);
}

TEST_CASE("sweep decreases monotonically up to pi/2 and has the pi/3 gap") {
  const auto rows = sweep_figure4(0.3, kPi / 2, 9);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].p_post_closed < rows[i - 1].p_post_closed);
  }
  const auto spot = sweep_figure4(kPi / 3, kPi / 2, 2);
  CHECK(spot[0].p_post_closed == doctest::Approx(0.9330127018922193).epsilon(1e-9));
  CHECK(spot[0].jmd_lower_bound == doctest::Approx(0.8660254037844386).epsilon(1e-12));
  CHECK(spot[0].p_post_closed - spot[0].jmd_lower_bound > 1e-3);
}
