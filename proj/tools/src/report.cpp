#include "basinctl/cli/report.hpp"

#include <iomanip>

#include <json.hpp>

namespace basinctl::cli {

namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i])) arr.push_back(v[i] > 0 ? "+inf" : "-inf");
    else arr.push_back(v[i]);
  }
  return arr;
}

}  // namespace

std::string lean_report(const ControlOutcome& outcome) {
  return json{{"y0_prime", vector_json(outcome.final_state())}}.dump(2) + "\n";
}

std::string full_report(const ControlOutcome& outcome) {
  json iterates = json::array();
  for (const auto& y : outcome.iterates) iterates.push_back(vector_json(y));
  const json j = {
      {"status", static_cast<int>(outcome.status)},
      {"stall", outcome.stall},
      {"n_iter", outcome.n_iter},
      {"time", outcome.total_seconds},
      {"t_int", outcome.t_int},
      {"t_var", outcome.t_var},
      {"t_opt", outcome.t_opt},
      {"y0", iterates},
  };
  return j.dump(2) + "\n";
}

std::string suite_report(const std::vector<BenchInstance>& instances, const SuiteResult& result) {
  json inst = json::array();
  for (const auto& i : instances) {
    json edges = json::array();
    for (const auto& [a, b] : i.edges) edges.push_back({a, b});
    inst.push_back({{"seed", i.seed},
                    {"n", i.n()},
                    {"coupling", i.coupling},
                    {"edges", edges},
                    {"perturbable", i.perturbable},
                    {"y0", vector_json(i.y0)},
                    {"yt", vector_json(i.yt)},
                    {"witness", vector_json(i.witness)},
                    {"lb", vector_json(i.cs.lb())},
                    {"ub", vector_json(i.cs.ub())}});
  }
  json per = json::array();
  for (const auto& r : result.per_instance) {
    per.push_back({{"seed", r.seed},
                   {"n", r.n},
                   {"status", static_cast<int>(r.outcome.status)},
                   {"stall", r.outcome.stall},
                   {"reverified", r.reverified},
                   {"n_iter", r.outcome.n_iter},
                   {"seconds", r.seconds}});
  }
  const json j = {{"instances", inst},
                  {"success_fraction", result.success_fraction},
                  {"per_instance", per}};
  return j.dump(2) + "\n";
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "n,mean_seconds,stddev_seconds\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.dimensions.size(); ++i) {
    out << report.dimensions[i] << ',' << report.mean_runtimes[i] << ','
        << report.stddev_runtimes[i] << '\n';
  }
}

std::string scaling_summary(const ScalingReport& report) {
  json successes = json::array();
  for (const auto& s : report.suites) successes.push_back(s.success_fraction);
  const json j = {{"dimensions", report.dimensions},
                  {"mean_seconds", report.mean_runtimes},
                  {"stddev_seconds", report.stddev_runtimes},
                  {"success_fraction", successes},
                  {"fitted_exponent", report.fitted_exponent}};
  return j.dump(2) + "\n";
}

}  // namespace basinctl::cli
