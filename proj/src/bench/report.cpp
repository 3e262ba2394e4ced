// Copyright 2026 The QALS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qals/bench/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qals/text.hpp"

namespace qals::bench {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::optional<double> read_optional(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json summary_json(const Summary& s) {
  return {{"type", "aggregate"},    {"runs", s.runs},       {"failed", s.failed},
          {"counted", s.counted},   {"mu", optional_number(s.mu)},
          {"sigma", optional_number(s.sigma)}, {"mean_time_s", s.mean_time_s}};
}

}  // namespace

Summary summarize(const std::vector<RunRecord>& runs) {
  Summary s;
  s.runs = runs.size();
  std::vector<double> values;
  double time = 0.0;
  for (const auto& r : runs) {
    time += r.time_s;
    if (r.failed) {
      ++s.failed;
      continue;
    }
    if (r.valid && r.objective) values.push_back(*r.objective);
  }
  s.counted = values.size();
  if (!runs.empty()) s.mean_time_s = time / static_cast<double>(runs.size());
  if (!values.empty()) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mu = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - mu) * (v - mu);
    s.mu = mu;
    s.sigma = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  }
  return s;
}

void write_report_jsonl(std::ostream& out, const Report& report) {
  const auto& h = report.header;
  out << json{{"type", "header"},
              {"schema", h.schema},
              {"instance", h.instance},
              {"kind", to_string(h.kind)},
              {"dimension", h.dimension},
              {"range", optional_number(h.range)},
              {"solver", h.solver},
              {"seed", h.seed},
              {"instance_text", h.instance_text}}
             .dump()
      << '\n';
  for (const auto& r : report.runs) {
    json j{{"type", "run"},
           {"run", r.run},
           {"seed", r.seed},
           {"status", r.failed ? "failed" : "ok"},
           {"valid", r.valid},
           {"objective", optional_number(r.objective)},
           {"energy", optional_number(r.energy)},
           {"time_s", r.time_s},
           {"iterations", r.iterations},
           {"solution", r.solution},
           {"tour", r.tour}};
    if (!r.error.empty()) j["error"] = r.error;
    out << j.dump() << '\n';
  }
  out << summary_json(summarize(report.runs)).dump() << '\n';
}

Report read_report_jsonl(std::istream& in) {
  Report report;
  bool have_header = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw ReportError("second header record");
        auto& h = report.header;
        h.schema = j.at("schema").get<std::string>();
        if (h.schema != kReportSchema) {
          throw ReportError("schema mismatch: expected " + std::string(kReportSchema) + ", found " +
                            h.schema);
        }
        h.instance = j.at("instance").get<std::string>();
        h.kind = parse_problem_kind(j.at("kind").get<std::string>());
        h.dimension = j.at("dimension").get<long>();
        h.range = read_optional(j, "range");
        h.solver = j.at("solver").get<std::string>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.instance_text = j.at("instance_text").get<std::string>();
        have_header = true;
      } else if (type == "run") {
        if (!have_header) throw ReportError("run record before header");
        RunRecord r;
        r.run = j.at("run").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.failed = j.at("status").get<std::string>() == "failed";
        r.valid = j.at("valid").get<bool>();
        r.objective = read_optional(j, "objective");
        r.energy = read_optional(j, "energy");
        r.time_s = j.at("time_s").get<double>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.solution = j.at("solution").get<std::string>();
        r.tour = j.at("tour").get<std::string>();
        if (j.contains("error")) r.error = j.at("error").get<std::string>();
        report.runs.push_back(std::move(r));
      } else if (type == "aggregate") {
        Summary s;
        s.runs = j.at("runs").get<std::size_t>();
        s.failed = j.at("failed").get<std::size_t>();
        s.counted = j.at("counted").get<std::size_t>();
        s.mu = read_optional(j, "mu");
        s.sigma = read_optional(j, "sigma");
        s.mean_time_s = j.at("mean_time_s").get<double>();
        report.stored_summary = s;
      } else {
        throw ReportError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ReportError("record " + std::to_string(number) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ReportError("record " + std::to_string(number) + ": " + e.what());
    }
  }
  if (!have_header) throw ReportError("report has no header record");
  return report;
}

Report read_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReportError("cannot open report " + path);
  try {
    return read_report_jsonl(in);
  } catch (const ReportError& e) {
    throw ReportError(path + ": " + e.what());
  }
}

void write_runs_csv(std::ostream& out, const Report& report) {
  const auto& h = report.header;
  out << "instance,kind,dimension,range,solver,run,seed,status,valid,objective,energy,time_s,"
         "iterations,error\n";
  for (const auto& r : report.runs) {
    out << csv_field(h.instance) << ',' << to_string(h.kind) << ',' << h.dimension << ','
        << format_optional(h.range) << ',' << csv_field(h.solver) << ',' << r.run << ','
        << r.seed << ',' << (r.failed ? "failed" : "ok") << ',' << (r.valid ? 1 : 0) << ','
        << format_optional(r.objective) << ',' << format_optional(r.energy) << ','
        << format_real(r.time_s) << ',' << r.iterations << ',' << csv_field(r.error) << '\n';
  }
}

std::vector<TableRow> merge_reports(const std::vector<Report>& reports) {
  std::vector<TableRow> rows;
  std::vector<std::vector<RunRecord>> grouped;
  for (const auto& report : reports) {
    const auto& h = report.header;
    std::size_t g = 0;
    while (g < rows.size() && !(rows[g].kind == h.kind && rows[g].dimension == h.dimension &&
                                rows[g].range == h.range && rows[g].solver == h.solver)) {
      ++g;
    }
    if (g == rows.size()) {
      rows.push_back({h.kind, h.dimension, h.range, h.solver, {}});
      grouped.emplace_back();
    }
    grouped[g].insert(grouped[g].end(), report.runs.begin(), report.runs.end());
  }
  for (std::size_t g = 0; g < rows.size(); ++g) rows[g].summary = summarize(grouped[g]);
  return rows;
}

void write_table_text(std::ostream& out, const std::vector<TableRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::setprecision(6) << *v;
    return s.str();
  };
  out << std::left << std::setw(6) << "kind" << std::setw(11) << "dimension" << std::setw(8)
      << "range" << std::setw(18) << "solver" << std::setw(14) << "mu" << std::setw(14)
      << "sigma" << std::setw(14) << "avg_time_s" << std::setw(6) << "runs"
      << "failed\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(6) << to_string(r.kind) << std::setw(11) << r.dimension
        << std::setw(8) << cell(r.range) << std::setw(18) << r.solver << std::setw(14)
        << cell(r.summary.mu) << std::setw(14) << cell(r.summary.sigma) << std::setw(14)
        << cell(r.summary.mean_time_s) << std::setw(6) << r.summary.runs << r.summary.failed
        << '\n';
  }
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "kind,dimension,range,solver,mu,sigma,avg_time_s,runs,failed\n";
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << r.dimension << ',' << format_optional(r.range) << ','
        << csv_field(r.solver) << ',' << format_optional(r.summary.mu) << ','
        << format_optional(r.summary.sigma) << ',' << format_real(r.summary.mean_time_s) << ','
        << r.summary.runs << ',' << r.summary.failed << '\n';
  }
}

}  // namespace qals::bench
