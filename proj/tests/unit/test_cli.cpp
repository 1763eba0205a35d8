#include "qfel/cli/experiments.hpp"
#include "qfel/cli/scenario.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

using namespace qfel;
using namespace qfel::cli;

namespace {

Scenario make(Command c, const std::map<std::string, std::string>& flags) { return compose_scenario(c, {}, flags); }

template <typename Table>
std::string csv(const Table& table, const Scenario& s) {
  std::ostringstream out;
  write_csv(out, table, s);
  return out.str();
}

int exit_code(const std::string& args) {
  const std::string cmd = std::string(QFEL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("settings are parsed and checked per command") {
    Scenario s;
    s.command = Command::fig3;
    s.set(" alpha ", " 0.5 ");
    s.set("panel", "top");
    s.set("n0", "100");
    CHECK(*s.alpha == 0.5);
    CHECK(s.panel == "top");
    CHECK(*s.n0 == 100);
    CHECK_THROWS_AS(s.set("alpha", "0.5x"), std::invalid_argument);
    CHECK_THROWS_AS(s.set("alpha", ""), std::invalid_argument);
    CHECK_THROWS_AS(s.set("panel", "middle"), std::invalid_argument);
    CHECK_THROWS_AS(s.set("truncation", "12"), std::invalid_argument);
    CHECK_THROWS_AS(s.set("colour", "red"), std::invalid_argument);
  }

  TEST_CASE("config files skip comments and report bad lines") {
    std::istringstream good("# scenario\n\nalpha = 0.3\n  end=40\n");
    const auto pairs = parse_config(good);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == std::pair<std::string, std::string>{"alpha", "0.3"});
    CHECK(pairs[1] == std::pair<std::string, std::string>{"end", "40"});
    std::istringstream bad("alpha=0.3\nnonsense\n");
    try {
      (void)parse_config(bad);
      FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("flags override the config file") {
    const Scenario s = compose_scenario(Command::fig4, {{"alpha", "0.3"}, {"end", "40"}}, {{"alpha", "0.2"}});
    CHECK(*s.alpha == 0.2);
    CHECK(*s.end == 40.0);
    CHECK(*s.samples == 1201);
    CHECK_THROWS_AS((void)compose_scenario(Command::fig4, {{"panel", "top"}}, {}), std::invalid_argument);
  }

  TEST_CASE("defaults and cross-field rules") {
    const Scenario top = make(Command::fig3, {{"panel", "top"}});
    CHECK(*top.alpha == 0.5);
    CHECK(*top.resonance == 1);
    CHECK(*top.electrons == 10'000);
    CHECK(*top.n0 == 1'000);
    CHECK(make(Command::fig3, {{"resonance", "2"}}).panel == "bottom");
    CHECK_THROWS_AS((void)make(Command::fig3, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::fig3, {{"panel", "top"}, {"resonance", "2"}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::fig4, {{"alpha", "-1"}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::fig4, {{"samples", "1"}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::fig4, {{"n0", "0"}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::sweep, {{"regime", "high"}, {"resonances", "3"}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make(Command::sweep, {{"seed_ratios", "0.1"}}), std::invalid_argument);
  }

  TEST_CASE("resolution is idempotent") {
    for (const Scenario& s : {make(Command::fig2, {}), make(Command::fig3, {{"panel", "bottom"}}),
                              make(Command::sweep, {{"regime", "high"}, {"resonance", "1"}}),
                              make(Command::sweep, {{"regime", "low"}})}) {
      CHECK(s.resolved().describe() == s.describe());
    }
  }

  TEST_CASE("low-gain figure starts at zero gain and reaches one, two and three photons") {
    const Scenario s = make(Command::fig2, {{"end", "60"}, {"samples", "121"}});
    const Trace t = run_fig2(s);
    REQUIRE(t.columns().size() == 6);
    for (const auto& [name, values] : t.columns()) CHECK(values.front() == 0.0);
    const Scenario full = make(Command::fig2, {});
    const Trace f = run_fig2(full);
    for (int nu = 1; nu <= 3; ++nu) {
      const auto& col = f.column("dn_per_N_analytic_nu" + std::to_string(nu));
      CHECK(*std::max_element(col.begin(), col.end()) == doctest::Approx(nu).epsilon(1e-3));
    }
  }

  TEST_CASE("high-gain figures start from the seed") {
    const Scenario top = make(Command::fig3, {{"panel", "top"}, {"electrons", "400"}, {"n0", "40"}, {"end", "6"},
                                              {"samples", "61"}});
    const Scenario bottom = make(Command::fig3, {{"panel", "bottom"}, {"electrons", "400"}, {"n0", "40"},
                                                 {"end", "20"}, {"samples", "41"}});
    const Scenario fig4 = make(Command::fig4, {{"electrons", "400"}, {"n0", "40"}});
    for (const Trace& t : {run_fig3(top), run_fig3(bottom), run_fig4(fig4)}) {
      REQUIRE(t.columns().size() >= 2);
      for (const auto& [name, values] : t.columns()) CHECK(std::abs(values.front() - 0.1) <= 1e-12);
    }
  }

  TEST_CASE("closed-form figure places both maxima at the predicted lengths") {
    const Trace t = run_fig4(make(Command::fig4, {}));
    const Maximum first = first_maximum(t, "n_over_N_first_resonance");
    const Maximum second = first_maximum(t, "n_over_N_second_resonance");
    CHECK(first.value == doctest::Approx(1.1).epsilon(1e-4));
    CHECK(second.value == doctest::Approx(2.1).epsilon(1e-4));
    CHECK(std::abs(first.position / 5.0492497374023493 - 1.0) <= 0.01);
    CHECK(std::abs(second.position / 27.422068833890301 - 1.0) <= 0.01);
  }

  TEST_CASE("identical scenarios give byte-identical CSV") {
    const Scenario s = make(Command::fig2, {{"end", "30"}, {"samples", "61"}});
    CHECK(csv(run_fig2(s), s) == csv(run_fig2(s), s));
    const Scenario h = make(Command::fig3, {{"panel", "bottom"}, {"electrons", "300"}, {"end", "20"}});
    const std::string text = csv(run_fig3(h), h);
    CHECK(text == csv(run_fig3(h), h));
    CHECK(text.rfind("# command=fig3 panel=bottom", 0) == 0);
  }

  TEST_CASE("parallel sweeps equal serial sweeps") {
    const Scenario low1 = make(Command::sweep, {{"alphas", "0.1,0.2,0.3"}, {"resonances", "1,2"}, {"threads", "1"}});
    const Scenario low4 = make(Command::sweep, {{"alphas", "0.1,0.2,0.3"}, {"resonances", "1,2"}, {"threads", "4"}});
    CHECK(csv(run_sweep(low1), low1) == csv(run_sweep(low4), low4));
    const Scenario high1 = make(Command::sweep, {{"regime", "high"},
                                                 {"alphas", "0.1,0.3,1,3,3.5"},
                                                 {"seed_ratios", "0.05,0.1,1"},
                                                 {"threads", "1"}});
    Scenario high3 = high1;
    high3.threads = 3;
    const SweepTable serial = run_sweep(high1);
    const SweepTable parallel = run_sweep(high3);
    CHECK(serial.rows == parallel.rows);
    CHECK(serial.rows.size() == 5 * 3 * 2);
  }

  TEST_CASE("sweep failures are recorded per row") {
    const Scenario s = make(Command::sweep, {{"regime", "high"}, {"alphas", "0.25"}, {"seed_ratios", "1"},
                                             {"resonances", "1"}});
    const SweepTable t = run_sweep(s);
    REQUIRE(t.rows.size() == 1);
    CHECK_FALSE(t.rows.front().back().empty());
    CHECK(t.header.back() == "error");
  }

  TEST_CASE("empty grid gives the header only") {
    const Scenario s = make(Command::sweep, {{"alphas", ""}});
    const std::string text = csv(run_sweep(s), s);
    std::istringstream in(text);
    std::string line;
    int count = 0;
    while (std::getline(in, line)) ++count;
    CHECK(count == 2);
    CHECK(text.find("index,regime,resonance") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    CHECK(exit_code("fig4 --samples 11") == 0);
    CHECK(exit_code("fig4 --bogus 1") == 2);
    CHECK(exit_code("fig4 --alpha nope") == 2);
    CHECK(exit_code("fig3") == 2);
    CHECK(exit_code("") == 2);
    CHECK(exit_code("fig4 --config /nonexistent/scenario.cfg") == 2);
    CHECK(exit_code("fig4 --samples 11 --out /nonexistent/dir/out.csv") == 1);
  }

  TEST_CASE("config file and flags through the executable") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto cfg = dir / "qfel_unit_scenario.cfg";
    const auto out = dir / "qfel_unit_out.csv";
    {
      std::ofstream f(cfg);
      f << "# test scenario\nalpha = 0.3\nsamples = 5\n";
    }
    REQUIRE(exit_code("fig4 --config " + cfg.string() + " --alpha 0.2 --out " + out.string()) == 0);
    std::ifstream in(out);
    std::string first_line;
    std::getline(in, first_line);
    CHECK(first_line.find("alpha=0.2") != std::string::npos);
    CHECK(first_line.find("samples=5") != std::string::npos);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
  }
}
