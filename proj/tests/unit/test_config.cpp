#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aoikit/config.hpp"
#include "aoikit/errors.hpp"

using namespace aoikit;

TEST_CASE("defaults") {
  ExperimentConfig c = parse_config("");
  CHECK(c.tau == Dist::exponential(1.0));
  CHECK(c.policies.size() == 2);
  CHECK(c.replications == 1);
}

TEST_CASE("parsing keys, records, lists and comments") {
  ExperimentConfig c = parse_config(R"(# experiment
tau = {kind:"uniform", lo:0.5, hi:1.5}
sigma = {kind:"mixture", weights:[0.5,0.5], parts:[{kind:"det", value:0.3333}, {kind:"exp", rate:0.6}]}
policies = pushout, blocking, bp:2, p2   # trailing comment
n_messages = 5000
seed = 77
replications = 4
u_grid = [0.5, 1, 2]
x_grid = 1, 2
solver.h = 0.004
solver.t_max = 30
outputs = out.csv
threads = 2
batches = 10
)");
  CHECK(c.tau == Dist::uniform(0.5, 1.5));
  CHECK(c.sigma.nesting_depth() == 1);
  CHECK(c.policies.size() == 4);
  CHECK(c.policies[2] == PolicyKind::block_then_push(2));
  CHECK(c.n_messages == 5000);
  CHECK(c.seed == 77);
  CHECK(c.replications == 4);
  CHECK(c.u_grid == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(c.x_grid == std::vector<double>{1.0, 2.0});
  CHECK(c.solver.h == 0.004);
  CHECK(c.solver.t_max == 30.0);
  CHECK(c.outputs == std::vector<std::string>{"out.csv"});
  CHECK(c.threads == 2);
  CHECK(c.batches == 10);
}

TEST_CASE("rate shorthands") {
  ExperimentConfig c = parse_config("lambda = 2\nmu = 0.5\n");
  CHECK(c.tau == Dist::exponential(2.0));
  CHECK(c.sigma == Dist::exponential(0.5));
}

TEST_CASE("canonical text round-trips and hashes stably") {
  ExperimentConfig c = parse_config("tau = {kind:\"det\", value:1}\nseed = 9\nreplications = 3\nu_grid = 0.1, 0.2\n");
  ExperimentConfig back = parse_config(to_text(c));
  CHECK(to_text(back) == to_text(c));
  CHECK(config_hash(back) == config_hash(c));
  c.seed = 10;
  CHECK(config_hash(back) != config_hash(c));
}

TEST_CASE("diagnostics carry line and field") {
  try {
    parse_config("seed = 1\n\nmu = fast\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "mu");
  }
  try {
    parse_config("colour = red\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(e.field() == "colour");
  }
  CHECK_THROWS_AS(parse_config("seed\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("tau = {kind:\"exp\", rate:-1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("policies = pushout, lifo\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("replications = 0\n"), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/aoikit.cfg"), IoError);
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("[1, 2.5,3]") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(parse_number_list("") == std::vector<double>{});
  CHECK_THROWS(parse_number_list("1, x"));
}
