#include <CLI11.hpp>

#include <iostream>

#include "sosmin/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sums of squares on varieties of minimal degree: invariants, certificates and witnesses"};
  app.set_version_flag("--version", "sosmin 0.1");

  sosmin::CommandRequest request;
  std::string subcommands;
  for (const auto& s : sosmin::kSubcommands) subcommands += (subcommands.empty() ? "" : ", ") + s;
  app.add_option("subcommand", request.subcommand, "One of: " + subcommands)->required();
  app.add_option("--input", request.input, "JSON file, '-' for stdin, or inline JSON");
  app.add_option("--k", request.k, "Dilation for the normality check (default 2)");
  app.add_option("--d", request.d, "Witness degree, or Veronese re-embedding factor for epsilon");
  app.add_option("--seed", request.seed, "Seed for the witness pipeline (default 0)");
  app.add_option("--samples", request.samples, "Sphere samples for the witness (default 100000)");
  app.add_option("--tol", request.tol, "Feasibility tolerance for sos-check (default 1e-7)");
  app.add_flag("--oracle", request.oracle, "Cross-check hstar/normal against the brute-force path");
  app.add_option("--output", request.output, "Write the JSON report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto result = sosmin::run(request);
  std::cout << result.output;
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}
