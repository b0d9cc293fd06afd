#include <doctest.h>

#include "chernforge/errors.hpp"
#include "chernforge/json_io.hpp"

using namespace chernforge;

TEST_SUITE("json") {

TEST_CASE("trig spec round trip uses 1-based axes") {
  const TrigSpec s = random_form(TorusGrid(3, 8), 2, 1, 4).second;
  const Json j = to_json(s);
  CHECK(j.at("terms").at(0).at("component").at(0).get<int>() >= 1);
  const TrigSpec back = trigspec_from_json(j);
  CHECK(sup_distance(eval_trig_spec(back, TorusGrid(3, 8)), eval_trig_spec(s, TorusGrid(3, 8))) == 0.0);
  Json bad = j;
  bad["extra"] = 1;
  CHECK_THROWS_AS(trigspec_from_json(bad), ValidationError);
  bad = j;
  bad["terms"][0]["component"][0] = 0;
  CHECK_THROWS_AS(trigspec_from_json(bad), ValidationError);
}

TEST_CASE("form and tuple round trip") {
  const TorusGrid g(3, 8);
  const DiffForm f = random_form(g, 2, 2, 1).first;
  CHECK(diffform_from_json(to_json(f)) == f);
  const OneFormTuple t(g, {random_form(g, 1, 1, 2).first, random_form(g, 1, 1, 3).first});
  const OneFormTuple back = tuple_from_json(to_json(t));
  REQUIRE(back.size() == 2);
  CHECK(back.forms[1] == t.forms[1]);
  CHECK_THROWS_AS(diffform_from_json(Json::parse(R"({"m": 3})")), ValidationError);
}

TEST_CASE("complex matrix round trip") {
  Eigen::MatrixXcd m(2, 2);
  m << std::complex<double>(1, 2), 3, std::complex<double>(0, -1), 4;
  CHECK(complex_matrix_from_json(to_json(m)) == m);
}

TEST_CASE("solver options") {
  const SolverOptions o = solver_options_from_json(Json::parse(R"({"tolerance": 1e-7, "homotopy_steps": 5})"));
  CHECK(o.tolerance == 1e-7);
  CHECK(o.homotopy_steps == 5);
  CHECK_THROWS_AS(solver_options_from_json(Json::parse(R"({"tolerence": 1e-7})")), ValidationError);
  const SolverOptions r = solver_options_from_json(to_json(o));
  CHECK(r.homotopy_steps == 5);
}

TEST_CASE("history csv") {
  SolveReport r;
  r.history.push_back({1, 0.5, 0, 0.25, 3, 0.1});
  std::ostringstream os;
  write_history_csv(os, r);
  CHECK(os.str().find("step,target_fraction") == 0);
  CHECK(os.str().find("\n1,") != std::string::npos);
}

}
