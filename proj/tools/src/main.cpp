#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lamebethe_cli/commands.hpp"

using namespace lamebethe;
using namespace lamebethe::cli;

namespace {

Json read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidInput, "cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points of gl(r+1) master functions and their fundamental operators"};
  app.require_subcommand(1);

  std::string input;
  std::string orbit;
  std::string caps;
  std::string arithmetic = "auto";
  RunOptions opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "weight system JSON (- for stdin)")->required();
    sub->add_option("--tol", opts.tol, "BAE residual tolerance");
    sub->add_option("--quantum", opts.quantum, "canonical key rounding");
    sub->add_option("--caps", caps, "separating=N,compositions=M");
  };

  auto* count = app.add_subcommand("count", "orbit bound d(n-1, l), separating test, sl2 count");
  add_common(count);

  auto* solve = app.add_subcommand("solve", "search for critical-point orbits");
  add_common(solve);
  solve->add_option("--starts", opts.starts, "Newton starts (0 = 50 d)");
  solve->add_option("--seed", opts.seed, "random seed");
  solve->add_flag("--real-classical", opts.real_classical, "complete enumeration for real classical data");
  solve->add_flag("--csv", opts.csv, "one csv row per orbit");

  auto* verify = app.add_subcommand("verify", "check a critical point against its operator");
  add_common(verify);
  verify->add_option("--orbit", orbit, "critical point, orbit set or solve report")->required();
  verify->add_option("--index", opts.orbit_index, "orbit to take from an orbit set");
  verify->add_option("--level", opts.level, "all|flag|tilde|exponents")
      ->check(CLI::IsMember({"all", "flag", "tilde", "exponents"}));
  verify->add_option("--arithmetic", arithmetic, "auto|exact|float")
      ->check(CLI::IsMember({"auto", "exact", "float"}));
  verify->add_option("--identity-tol", opts.identity_tol, "flag and tilde tolerance");

  auto* classical = app.add_subcommand("classical", "Stieltjes solve, Van Vleck extraction, count check");
  add_common(classical);
  classical->add_flag("--csv", opts.csv, "one csv row per orbit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const auto out = guarded([&]() -> CommandOutput {
    if (!caps.empty()) opts.caps = parse_caps(caps);
    opts.arithmetic = parse_arithmetic(arithmetic);
    const Json ws = read_document(input);
    if (*count) return cmd_count(ws, opts);
    if (*solve) return cmd_solve(ws, opts);
    if (*verify) return cmd_verify(ws, read_document(orbit), opts);
    return cmd_classical(ws, opts);
  });

  std::cout << render(out);
  if (out.report.contains("message")) std::cerr << out.report["message"].get<std::string>() << "\n";
  return out.exit_code;
}
