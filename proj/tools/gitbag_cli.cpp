// gitbag: classify the GIT-quotients of a subtorus action on a toric variety.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gitbag/report.hpp"

namespace {

using namespace gitbag;

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string file;
  std::string format = "text";
  std::string klass;
  bool dot = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LinClass parse_class(const std::string& text, std::size_t expected) {
  LinClass c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      c.push_back(Integer(v));
    } catch (const std::exception&) {
      throw UsageError("--class: '" + item + "' is not an integer");
    }
  }
  if (c.size() != expected)
    throw UsageError("--class has " + std::to_string(c.size()) + " entries, expected k+d = " + std::to_string(expected));
  return c;
}

void emit(const Json& report, const std::string& format) {
  if (format == "json") std::cout << report.dump(2) << "\n";
  else std::cout << render_text(report);
}

int run(const std::string& command, const Options& opt) {
  const bool want_dot = opt.dot || opt.format == "dot";
  if (want_dot && command != "bags") throw UsageError("DOT output is only available for 'bags'");
  const bool needs_class = command == "classify" || command == "ss-locus";
  if (needs_class && opt.klass.empty()) throw UsageError("'" + command + "' requires --class");

  const InstanceSpec spec = load_instance(opt.file);
  const GitInput input = build_input(spec);
  std::optional<LinClass> klass;
  if (needs_class) klass = parse_class(opt.klass, input.k + input.d);

  Json report;
  report["instance"] = instance_json(spec, input);

  if (command == "check") {
    report["check"] = check_report(spec, input);
    emit(report, opt.format);
    return report["check"]["ok"].get<bool>() ? 0 : kExitComputation;
  }
  if (command == "ample-cone") {
    report["kappa"] = cone_to_json(input.kappa);
    emit(report, opt.format);
    return 0;
  }

  const GitBagEngine engine(input);
  if (command == "orbit-cones") {
    report["orbit_cones"] = orbit_cones_report(engine);
  } else if (command == "git-fan") {
    report["git_fan"] = quasifan_json(engine.quasifan());
  } else if (command == "ss-locus") {
    report["ss_locus"] = ss_locus_report(engine, *klass);
  } else {
    const auto bags = engine.enumerate_bags();
    if (command == "bags") {
      if (want_dot) {
        std::cout << hasse_dot(bags);
        return 0;
      }
      report["kappa"] = cone_to_json(input.kappa);
      report["bags"] = bags_report(engine, bags);
    } else {
      report["classification"] = classify_report(engine, bags, *klass);
    }
  }
  emit(report, opt.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify GIT-quotients of subtorus actions on projective toric varieties"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"orbit-cones", "list the orbit cones of the lifted action"},
      {"git-fan", "GIT quasifan of the lifted action"},
      {"ample-cone", "closed ample cone of the toric variety"},
      {"bags", "GIT-bags, their flags and the order on the qp-maximal ones"},
      {"classify", "classify one linearized class"},
      {"ss-locus", "coordinate supports of the semistable locus of a class"},
      {"check", "validate the instance"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("file", opt.file, "instance JSON file")->required();
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
    if (std::string(c.name) == "classify" || std::string(c.name) == "ss-locus")
      sub->add_option("--class", opt.klass, "comma separated integers (D-part, then w-part)");
    if (std::string(c.name) == "bags") sub->add_flag("--dot", opt.dot, "print the Hasse diagram of the qp-maximal bags");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitComputation;
  }
}
