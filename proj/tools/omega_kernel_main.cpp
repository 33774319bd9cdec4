// omega-kernel: batch front end for the kernel.
//
//   omega-kernel check <file>                 run a script, report, exit 0/1
//   omega-kernel derive <builder>             canonical derivation transcript
//   omega-kernel enumerate-pd --dim D --max-positions P
//   omega-kernel selftest [--budget N]        aggregated property suites
//   omega-kernel export <file> <name>         JSON of a cell bound by a script
//
// Exit codes: 0 ok, 1 assertion/property failure, 2 usage or parse error.
// OMEGA_SEED fixes the property-suite RNG seed.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "omega/foundations.hpp"
#include "omega/globular.hpp"
#include "omega/operad.hpp"
#include "omega/pasting.hpp"
#include "omega/script.hpp"

namespace {

std::uint64_t seed_from_env() {
  if (const char* s = std::getenv("OMEGA_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    std::cerr << "warning: ignoring malformed OMEGA_SEED '" << s << "'\n";
  }
  return 20260814ull;
}

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

int cmd_check(const std::string& path) {
  std::string text;
  if (!read_file(path, &text)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }
  try {
    omega::script::RunReport rep = omega::script::run_script_text(text);
    std::cout << rep.to_text();
    return rep.all_ok() ? 0 : 1;
  } catch (const omega::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_derive(const std::string& builder) {
  try {
    std::cout << omega::script::derive_transcript(builder);
    return 0;
  } catch (const omega::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "builders:";
    for (const auto& b : omega::script::builder_names()) std::cerr << " " << b;
    std::cerr << "\n";
    return 2;
  }
}

int cmd_enumerate(std::size_t dim, std::size_t max_positions) {
  for (const auto& t : omega::pasting::enumerate_pd(dim, max_positions))
    std::cout << omega::pasting::show_tree(t) << "\n";
  return 0;
}

int cmd_export(const std::string& path, const std::string& name) {
  std::string text;
  if (!read_file(path, &text)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }
  try {
    auto rr = omega::script::run_script_env(omega::script::parse_script(text));
    auto it = rr.env.find(name);
    if (it == rr.env.end()) {
      std::cerr << "error: script binds no cell named '" << name << "'\n";
      return 2;
    }
    if (!rr.report.all_ok())
      std::cerr << "warning: " << rr.report.failed << " statement(s) failed\n";
    std::cout << omega::weakcat::cell_to_json(it->second) << "\n";
    return 0;
  } catch (const omega::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_selftest(std::size_t budget) {
  const std::uint64_t seed = seed_from_env();
  bool ok = true;

  auto strict = omega::pasting::run_strict_axiom_suite(budget, seed, 3);
  std::cout << "strict-axioms: cases=" << strict.cases << " failures=" << strict.failures << "\n";
  for (const auto& f : strict.failed) std::cout << "  ! " << f << "\n";
  ok = ok && strict.ok();

  auto monad = omega::pasting::run_monad_law_suite(budget, seed + 1);
  std::cout << "monad-laws: cases=" << monad.cases << " failures=" << monad.failures << "\n";
  for (const auto& f : monad.failed) std::cout << "  ! " << f << "\n";
  ok = ok && monad.ok();

  auto rep = omega::globular::run_representability_sweep(6, 5, 3);
  std::cout << "representability: sets=" << rep.sets_checked << " squares=" << rep.squares_checked
            << " failures=" << rep.failures << "\n";
  ok = ok && rep.ok();

  auto cart = omega::foundations::cartesianness_report();
  std::cout << "cartesianness: squares=" << cart.squares_checked
            << " failures=" << cart.failures << "\n";
  for (const auto& f : cart.failed) std::cout << "  ! " << f << "\n";
  ok = ok && cart.ok();

  // Closed-form cross-check of the free-operad counting: for the single
  // binary operation the operation counts follow the Catalan recurrence.
  {
    omega::foundations::Signature sig{{"m", 2}};
    std::vector<std::size_t> cat(8, 0);
    cat[1] = 1;
    for (std::size_t n = 2; n < cat.size(); ++n)
      for (std::size_t l = 1; l < n; ++l) cat[n] += cat[l] * cat[n - l];
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= 7; ++n)
      if (omega::foundations::count_operations(sig, n) != cat[n]) ++bad;
    std::cout << "operation-counts: arities=7 failures=" << bad << "\n";
    ok = ok && bad == 0;
  }

  auto norm = omega::operad::run_normalization_suite(budget, seed + 2);
  std::cout << "normalization: cases=" << norm.cases << " failures=" << norm.failures << "\n";
  for (const auto& f : norm.failed) std::cout << "  ! " << f << "\n";
  ok = ok && norm.ok();

  auto conf = omega::operad::run_confluence_suite(budget, seed + 3);
  std::cout << "confluence: cases=" << conf.cases << " failures=" << conf.failures << "\n";
  for (const auto& f : conf.failed) std::cout << "  ! " << f << "\n";
  ok = ok && conf.ok();

  std::cout << "selftest: " << (ok ? "PASS" : "FAIL") << " (budget=" << budget
            << ", seed=" << seed << ")\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omega-kernel: a symbolic kernel for weak omega-categories"};
  app.require_subcommand(1);

  std::string check_path;
  auto* check = app.add_subcommand("check", "run a script file and report assertion results");
  check->add_option("file", check_path, "script file")->required();

  std::string derive_builder;
  auto* derive = app.add_subcommand("derive", "derive a builder over generic generators");
  derive->add_option("builder", derive_builder, "builder name")->required();

  std::size_t enum_dim = 1, enum_max = 0;
  auto* enumc = app.add_subcommand("enumerate-pd", "list pasting-diagram trees");
  enumc->add_option("--dim", enum_dim, "tree dimension (>= 1)")->required()
      ->check(CLI::Range(std::size_t{1}, std::size_t{6}));
  enumc->add_option("--max-positions", enum_max, "position bound")->required();

  std::size_t budget = 300;
  auto* self = app.add_subcommand("selftest", "run the aggregated property suites");
  self->add_option("--budget", budget, "cases per randomized suite (default 300)");

  std::string export_path, export_name;
  auto* exportc = app.add_subcommand("export", "run a script and print one cell as JSON");
  exportc->add_option("file", export_path, "script file")->required();
  exportc->add_option("name", export_name, "bound cell name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(check_path);
    if (*derive) return cmd_derive(derive_builder);
    if (*enumc) return cmd_enumerate(enum_dim, enum_max);
    if (*self) return cmd_selftest(budget);
    if (*exportc) return cmd_export(export_path, export_name);
  } catch (const omega::KernelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
