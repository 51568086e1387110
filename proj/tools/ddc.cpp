#include "ddc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kUsage = 64;

bool parse_window(const std::string& s, int& lo, int& hi) {
  auto colon = s.find(':', s.empty() ? 0 : 1);
  if (colon == std::string::npos) return false;
  try {
    std::size_t a = 0, b = 0;
    lo = std::stoi(s.substr(0, colon), &a);
    hi = std::stoi(s.substr(colon + 1), &b);
    return a == colon && b == s.size() - colon - 1 && lo <= hi;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"derived double centralizer toolkit"};
  app.set_version_flag("--version", std::string(ddc::kToolVersion));
  ddc::CommandFlags f;
  std::string cmd, file, window = "-2:2", format = "json";
  app.add_option("command", cmd, "command")->required()->check(CLI::IsMember(ddc::command_names()));
  app.add_option("problem", file, "problem file (JSON), - for stdin")->required();
  app.add_option("--depth", f.depth, "WPR depth")->check(CLI::Range(1u, 64u));
  app.add_option("--horizon", f.horizon, "WPR horizon")->check(CLI::Range(1u, 256u));
  app.add_option("--stage", f.stage, "direct-system stage count")->check(CLI::Range(1u, 64u));
  app.add_option("--precision", f.precision, "completion precision")->check(CLI::Range(1u, 64u));
  app.add_option("--bar", f.bar, "resolution truncation level")->check(CLI::Range(0u, 64u));
  app.add_option("--window", window, "degree window LO:HI");
  app.add_option("--stab-window", f.window, "stabilization window")->check(CLI::Range(1u, 16u));
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--assume-wpr", f.assume_wpr, "skip the WPR link of verify");
  app.add_option("--seed", f.seed, "seed recorded in the report");
  app.allow_extras(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (!parse_window(window, f.lo, f.hi)) {
    std::cerr << "--window expects LO:HI with LO <= HI\n";
    return kUsage;
  }
  f.text = format == "text";

  std::string text;
  if (file == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "cannot read " << file << "\n";
      return 1;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  ddc::ProblemSpec spec;
  try {
    spec = ddc::parse_problem(text);
  } catch (const ddc::Error& e) {
    ddc::Json rep = {{"tool", "ddc"},
                     {"version", ddc::kToolVersion},
                     {"command", cmd},
                     {"status", "error"},
                     {"error", {{"code", std::string(ddc::to_string(e.code()))}, {"message", e.what()}}}};
    std::cout << ddc::render(rep, f.text);
    return 1;
  }
  auto res = ddc::run_command(cmd, spec, f);
  std::cout << ddc::render(res.report, f.text);
  return res.exit_code;
}
