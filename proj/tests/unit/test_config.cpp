#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "softprove/config.hpp"
#include "softprove/errors.hpp"

using namespace softprove;

TEST_CASE("defaults") {
  AppConfig c = resolve_config({}, {}, {});
  CHECK(c.solver.unify_threshold == 0.5);
  CHECK(c.solver.proof_threshold == 0.13);
  CHECK(c.solver.max_depth == 10);
  CHECK(c.solver.max_proofs_per_goal == 10000);
  CHECK(c.max_iterations == 3);
  CHECK(c.jobs == 1);
  CHECK(c.chat.model == "gpt-3.5-turbo");
  CHECK(c.chat.temperature == 0.5);
}

TEST_CASE("later sources win") {
  Settings file{{"max_depth", "4"}, {"proof_threshold", "0.2"}, {"model", "m-file"}};
  Settings env{{"max_depth", "5"}, {"model", "m-env"}};
  Settings flags{{"max_depth", "6"}};
  AppConfig c = resolve_config(file, env, flags);
  CHECK(c.solver.max_depth == 6);
  CHECK(c.solver.proof_threshold == 0.2);
  CHECK(c.chat.model == "m-env");
}

TEST_CASE("setting values are checked") {
  AppConfig c;
  CHECK_THROWS_AS(apply_setting(c, "max_depth", "ten"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "max_depth", "3x"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "prune", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);
  apply_setting(c, "strict_threshold", "true");
  CHECK(c.solver.strict_threshold);
  apply_setting(c, "timeout_ms", "1500");
  CHECK(c.chat.timeout.count() == 1500);
  CHECK_THROWS_AS(resolve_config({{"unify_threshold", "1.5"}}, {}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config({}, {}, {{"jobs", "0"}}), ConfigError);
}

TEST_CASE("config files and environment") {
  const auto path = (std::filesystem::temp_directory_path() / "softprove_test.conf").string();
  {
    std::ofstream out(path);
    out << "# solver\nmax_depth = 7  # deeper\n\nweak_constants=true\n";
  }
  Settings s = read_config_file(path);
  CHECK(s.at("max_depth") == "7");
  CHECK(s.at("weak_constants") == "true");
  {
    std::ofstream out(path);
    out << "just words\n";
  }
  CHECK_THROWS_AS(read_config_file(path), ConfigError);
  CHECK_THROWS_AS(read_config_file(path + ".missing"), ConfigError);
  std::filesystem::remove(path);

  ::setenv("SOFTPROVE_MAX_DEPTH", "8", 1);
  ::setenv("SOFTPROVE_UNRELATED_THING", "1", 1);
  Settings env = environment_settings();
  CHECK(env.at("max_depth") == "8");
  CHECK_FALSE(env.contains("unrelated_thing"));
  ::unsetenv("SOFTPROVE_MAX_DEPTH");
  ::unsetenv("SOFTPROVE_UNRELATED_THING");
}
