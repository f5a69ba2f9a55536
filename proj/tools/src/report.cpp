#include <fstream>
#include <ostream>
#include <sstream>

#include "gsw/cli/cli.hpp"
#include "gsw/error.hpp"

namespace gsw::cli {

nlohmann::json to_json(const Report& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"relation", c.relation}, {"pass", c.pass}});
  }
  return {{"subcommand", report.subcommand},
          {"config", report.config},
          {"checks", checks},
          {"pass", report.passed()},
          {"results", report.results},
          {"version", version()},
          {"timing", {{"elapsed_seconds", report.elapsed_seconds}}}};
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string render(const Report& report, const std::string& format) {
  if (format == "text") {
    if (!report.text.empty()) return report.text + "\n";
    return to_json(report).dump(2) + "\n";
  }
  if (format == "csv") {
    std::ostringstream out;
    out << "check,value,tolerance,relation,pass\n";
    for (const auto& c : report.checks) {
      out << c.name << ',' << nlohmann::json(c.value).dump() << ',' << nlohmann::json(c.tolerance).dump() << ','
          << c.relation << ',' << (c.pass ? "true" : "false") << '\n';
    }
    const auto series = report.results.find("series");
    if (series != report.results.end() && series->is_array() && !series->empty()) {
      out << '\n';
      bool first = true;
      for (const auto& [key, _] : series->front().items()) {
        out << (first ? "" : ",") << key;
        first = false;
      }
      out << '\n';
      for (const auto& row : *series) {
        first = true;
        for (const auto& [key, value] : row.items()) {
          out << (first ? "" : ",") << csv_cell(value);
          first = false;
        }
        out << '\n';
      }
    }
    return out.str();
  }
  return to_json(report).dump(2) + "\n";
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_arguments(argc, argv);
    const auto report = run(config);
    const auto text = render(report, config.format);
    if (config.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(config.out_path);
      if (!file) throw UsageError("--out: cannot write '" + config.out_path + "'");
      file << text;
    }
    return report.passed() ? kPass : kCheckFailure;
  } catch (const HelpRequested& e) {
    out << e.what();
    return kPass;
  } catch (const UsageError& e) {
    err << "gsw: " << e.what() << '\n';
    return kUsageError;
  } catch (const gsw::ParseError& e) {
    err << "gsw: " << e.what() << '\n';
    return kUsageError;
  } catch (const gsw::ShapeError& e) {
    err << "gsw: " << e.what() << '\n';
    return kUsageError;
  } catch (const gsw::Error& e) {
    err << "gsw: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "gsw: internal error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace gsw::cli
