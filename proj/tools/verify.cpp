#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kadelic/suites.hpp"

using namespace kadelic;

namespace {

// Runs the selected suites, at most `jobs` at a time, keeping results in request order.
std::vector<SuiteResult> run_all(const SuiteRegistry& reg, const std::vector<std::string>& names, const SuiteConfig& cfg,
                                 unsigned jobs, const Deadline& deadline) {
  std::vector<SuiteResult> results(names.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < names.size(); i = next++) results[i] = run_suite(*reg.find(names[i]), cfg, deadline);
  };
  std::vector<std::future<void>> pool;
  for (unsigned j = 0; j < std::max(1u, jobs); ++j) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return results;
}

void print_text(const std::vector<SuiteResult>& results) {
  for (auto& r : results) {
    std::string tag = r.status == SuiteStatus::pass ? "PASS" : r.status == SuiteStatus::fail ? "FAIL" : "SKIP";
    std::cout << std::left << std::setw(5) << tag << std::setw(22) << r.suite << " checks=" << std::setw(7) << r.checks
              << std::fixed << std::setprecision(1) << r.duration_ms << " ms";
    if (!r.reason.empty()) std::cout << "  (" << r.reason << ")";
    std::cout << "\n";
    if (r.counterexample) std::cout << "      counterexample: " << r.counterexample->dump() << "\n";
  }
}

json first_payload(const json& doc) {
  if (doc.is_object() && doc.contains("case")) return doc;
  if (doc.is_object() && doc.contains("counterexample")) return doc["counterexample"];
  const json* list = &doc;
  if (doc.is_object() && doc.contains("results")) list = &doc["results"];
  if (list->is_array())
    for (auto& item : *list) {
      if (item.contains("counterexample")) return item["counterexample"];
      if (item.contains("case")) return item;
    }
  throw std::invalid_argument("replay file holds no counterexample payload");
}

}  // namespace

int main(int argc, char** argv) {
  SuiteRegistry reg = SuiteRegistry::standard();
  SuiteConfig cfg;
  std::vector<std::string> suites;
  std::string report = "text", replay;
  unsigned jobs = 1;
  bool list = false;

  CLI::App app{"Runs exact identity suites over finite K-theoretic target models."};
  app.set_config("--config", "", "flat key=value file using the long option names as keys");
  app.allow_config_extras(false);
  app.add_option("suites", suites, "suite names (default: all)");
  app.add_option("--target", cfg.target, "point, p1, p2 or file:PATH")
      ->check([](const std::string& v) -> std::string {
        if (v == "point" || v == "p1" || v == "p2" || v.rfind("file:", 0) == 0) return "";
        return "target must be point, p1, p2 or file:PATH (got '" + v + "')";
      });
  app.add_option("--max-r", cfg.max_r, "largest Adams index r")->check(CLI::PositiveNumber);
  app.add_option("--max-m", cfg.max_m, "largest root-of-unity order m")->check(CLI::PositiveNumber);
  app.add_option("--max-M", cfg.max_M, "largest cyclic group order M")->check(CLI::PositiveNumber);
  app.add_option("--series-order", cfg.series_order, "truncation order of local series")->check(CLI::PositiveNumber);
  app.add_option("--lambda-degree", cfg.lambda_degree, "truncation degree of the ground ring")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for randomized cases");
  app.add_option("--report", report, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--replay", replay, "re-run the failing case stored in a JSON report or payload");
  app.add_option("--jobs", jobs, "suites run concurrently")->check(CLI::PositiveNumber);
  app.add_flag("--list", list, "print the suite registry and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (list) {
    for (auto& n : reg.names()) std::cout << n << "  " << reg.find(n)->summary << "\n";
    return 0;
  }

  if (!replay.empty()) {
    std::ifstream in(replay);
    if (!in) {
      std::cerr << "verify: cannot open replay file " << replay << "\n";
      return 2;
    }
    try {
      json doc = json::parse(in);
      json payload = first_payload(doc);
      CaseOutcome o = replay_case(reg, payload);
      json out{{"suite", payload["suite"]}, {"status", o.ok ? "pass" : "fail"}, {"checks", o.checks}};
      if (!o.ok) out["detail"] = o.detail;
      if (report == "json")
        std::cout << out.dump(2) << "\n";
      else
        std::cout << (o.ok ? "PASS " : "FAIL ") << payload["suite"].get<std::string>() << " case "
                  << payload.value("case_index", 0) << (o.ok ? "" : "  (" + o.detail + ")") << "\n";
      return o.ok ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "verify: replay: " << e.what() << "\n";
      return 2;
    }
  }

  if (suites.empty()) suites = reg.names();
  for (auto& s : suites)
    if (!reg.find(s)) {
      std::cerr << "verify: unknown suite '" << s << "'; known suites:";
      for (auto& n : reg.names()) std::cerr << " " << n;
      std::cerr << "\n";
      return 2;
    }

  try {
    cfg.validate();
    load_target(cfg.target);
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }

  Deadline deadline;
  if (const char* env = std::getenv("ALL_SUITES_TIMEOUT_SECS")) {
    char* end = nullptr;
    double secs = std::strtod(env, &end);
    if (end == env || secs <= 0) {
      std::cerr << "verify: ALL_SUITES_TIMEOUT_SECS must be a positive number\n";
      return 2;
    }
    deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(static_cast<long>(secs * 1000));
  }

  auto results = run_all(reg, suites, cfg, jobs, deadline);
  if (report == "json") {
    json arr = json::array();
    for (auto& r : results) arr.push_back(r.to_json());
    std::cout << arr.dump(2) << "\n";
  } else {
    print_text(results);
  }
  bool ok = true;
  for (auto& r : results) ok = ok && r.status != SuiteStatus::fail && !r.timed_out;
  return ok ? 0 : 1;
}
