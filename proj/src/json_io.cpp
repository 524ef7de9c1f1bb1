#include "oplab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace oplab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ParseError(field + ": " + why);
}

SpaceSpec space_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  if (!j.contains("p")) fail(field + ".p", "missing");
  if (!j["p"].is_string()) fail(field + ".p", "expected a string");
  Exponent p = Exponent::parse(j["p"].get<std::string>());
  if (!j.contains("blocks")) fail(field + ".blocks", "missing");
  const json& jb = j["blocks"];
  if (!jb.is_array() || jb.empty())
    fail(field + ".blocks", "expected a non-empty array");
  std::vector<std::int32_t> dims;
  for (std::size_t i = 0; i < jb.size(); ++i) {
    if (!jb[i].is_number_integer() || jb[i].get<std::int64_t>() < 1)
      fail(field + ".blocks[" + std::to_string(i + 1) + "]",
           "expected a positive integer");
    dims.push_back(static_cast<std::int32_t>(jb[i].get<std::int64_t>()));
  }
  return SpaceSpec(p, std::move(dims));
}

ordered_json space_to_json(const SpaceSpec& s) {
  ordered_json j;
  j["p"] = s.outer().str();
  j["blocks"] = s.dims();
  return j;
}

}  // namespace

BlockOperator operator_from_json(const json& j) {
  if (!j.is_object()) fail("operator", "expected an object");
  if (!j.contains("domain")) fail("domain", "missing");
  if (!j.contains("codomain")) fail("codomain", "missing");
  const SpaceSpec domain = space_from_json(j["domain"], "domain");
  const SpaceSpec codomain = space_from_json(j["codomain"], "codomain");
  if (!j.contains("entries")) fail("entries", "missing");
  const json& je = j["entries"];
  if (!je.is_array()) fail("entries", "expected an array");

  BlockOperator T(domain, codomain);
  std::vector<bool> seen(
      static_cast<std::size_t>(domain.block_count()) * codomain.block_count(),
      false);
  for (std::size_t e = 0; e < je.size(); ++e) {
    const std::string tag = "entries[" + std::to_string(e + 1) + "]";
    const json& entry = je[e];
    if (!entry.is_object()) fail(tag, "expected an object");
    if (!entry.contains("i") || !entry["i"].is_number_integer())
      fail(tag + ".i", "expected an integer");
    if (!entry.contains("j") || !entry["j"].is_number_integer())
      fail(tag + ".j", "expected an integer");
    const std::int64_t i = entry["i"].get<std::int64_t>();
    const std::int64_t jj = entry["j"].get<std::int64_t>();
    if (i < 1 || i > codomain.block_count())
      fail(tag + ".i", "block index " + std::to_string(i) +
                           " out of range [1, " +
                           std::to_string(codomain.block_count()) + "]");
    if (jj < 1 || jj > domain.block_count())
      fail(tag + ".j", "block index " + std::to_string(jj) +
                           " out of range [1, " +
                           std::to_string(domain.block_count()) + "]");
    const std::size_t slot =
        static_cast<std::size_t>(i - 1) * domain.block_count() + (jj - 1);
    if (seen[slot])
      fail(tag, "duplicate pair (" + std::to_string(i) + ", " +
                    std::to_string(jj) + ")");
    seen[slot] = true;
    if (!entry.contains("matrix") || !entry["matrix"].is_array())
      fail(tag + ".matrix", "expected an array of rows");
    const json& jm = entry["matrix"];
    DenseMatrix& M = T.entry(static_cast<std::int32_t>(i - 1),
                             static_cast<std::int32_t>(jj - 1));
    if (static_cast<std::int64_t>(jm.size()) != M.rows())
      fail(tag + ".matrix", "expected " + std::to_string(M.rows()) +
                                " rows, got " + std::to_string(jm.size()));
    for (std::int32_t r = 0; r < M.rows(); ++r) {
      const json& row = jm[r];
      if (!row.is_array() || static_cast<std::int64_t>(row.size()) != M.cols())
        fail(tag + ".matrix[" + std::to_string(r + 1) + "]",
             "expected " + std::to_string(M.cols()) + " columns");
      for (std::int32_t c = 0; c < M.cols(); ++c) {
        if (!row[c].is_number())
          fail(tag + ".matrix[" + std::to_string(r + 1) + "][" +
                   std::to_string(c + 1) + "]",
               "expected a number");
        const double v = row[c].get<double>();
        if (!std::isfinite(v))
          fail(tag + ".matrix[" + std::to_string(r + 1) + "][" +
                   std::to_string(c + 1) + "]",
               "non-finite value");
        M(r, c) = v;
      }
    }
  }
  for (std::int32_t i = 0; i < codomain.block_count(); ++i)
    for (std::int32_t jj = 0; jj < domain.block_count(); ++jj)
      if (!seen[static_cast<std::size_t>(i) * domain.block_count() + jj])
        fail("entries", "missing pair (" + std::to_string(i + 1) + ", " +
                            std::to_string(jj + 1) + ")");
  return T;
}

ordered_json operator_to_json(const BlockOperator& T) {
  ordered_json j;
  j["domain"] = space_to_json(T.domain());
  j["codomain"] = space_to_json(T.codomain());
  ordered_json entries = ordered_json::array();
  for (std::int32_t i = 0; i < T.codomain().block_count(); ++i)
    for (std::int32_t jj = 0; jj < T.domain().block_count(); ++jj) {
      const DenseMatrix& M = T.entry(i, jj);
      ordered_json rows = ordered_json::array();
      for (std::int32_t r = 0; r < M.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (std::int32_t c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
      }
      ordered_json e;
      e["i"] = i + 1;
      e["j"] = jj + 1;
      e["matrix"] = std::move(rows);
      entries.push_back(std::move(e));
    }
  j["entries"] = std::move(entries);
  return j;
}

BlockOperator read_operator_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("input: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("input: invalid JSON in '" + path + "': " + e.what());
  }
  return operator_from_json(j);
}

void write_operator_file(const std::string& path, const BlockOperator& T) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << operator_to_json(T).dump(2) << '\n';
}

ordered_json report_to_json(const VerificationReport& rep) {
  ordered_json j;
  j["suite"] = rep.suite;
  j["seed"] = rep.seed;
  j["cases"] = rep.cases;
  ordered_json vs = ordered_json::array();
  for (const Violation& v : rep.violations) {
    ordered_json jv;
    jv["case_seed"] = v.case_seed;
    jv["desc"] = v.desc;
    jv["slack"] = v.slack;
    vs.push_back(std::move(jv));
  }
  j["violations"] = std::move(vs);
  j["max_slack"] = rep.max_slack;
  j["wall_time_s"] = rep.wall_time_s;
  return j;
}

VerificationReport report_from_json(const json& j) {
  if (!j.is_object()) fail("report", "expected an object");
  VerificationReport rep;
  try {
    rep.suite = j.at("suite").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.cases = j.at("cases").get<std::int64_t>();
    for (const json& jv : j.at("violations"))
      rep.violations.push_back({jv.at("case_seed").get<std::uint64_t>(),
                                jv.at("desc").get<std::string>(),
                                jv.at("slack").get<double>()});
    rep.max_slack = j.at("max_slack").get<double>();
    rep.wall_time_s = j.at("wall_time_s").get<double>();
  } catch (const json::exception& e) {
    fail("report", e.what());
  }
  return rep;
}

std::string report_to_string(const VerificationReport& rep,
                             bool mask_wall_time) {
  VerificationReport copy = rep;
  if (mask_wall_time) copy.wall_time_s = 0.0;
  return report_to_json(copy).dump(2) + "\n";
}

void write_report_file(const std::string& path, const VerificationReport& rep) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << report_to_string(rep);
}

VerificationReport read_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("report: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("report: invalid JSON in '" + path + "': " + e.what());
  }
  return report_from_json(j);
}

std::string rows_to_csv(const std::vector<CaseRow>& rows) {
  std::string out = "case_index,case_seed,checks,violations,max_slack\n";
  char buf[128];
  for (const CaseRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%llu,%lld,%lld,%.17g\n",
                  static_cast<long long>(r.case_index),
                  static_cast<unsigned long long>(r.case_seed),
                  static_cast<long long>(r.checks),
                  static_cast<long long>(r.violations), r.max_slack);
    out += buf;
  }
  return out;
}

}  // namespace oplab
