#include "parafol/parafol.h"

#include <cstdlib>
#include <cstring>
#include <regex>
#include <string>

#include "parafol/error.hpp"
#include "parafol/verify.hpp"

struct parafol_options {
  parafol::SuiteOptions opts;
};

struct parafol_report {
  parafol::VerificationReport report;
};

namespace {

thread_local std::string g_last_error;

parafol_status fail(parafol_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
parafol_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return PARAFOL_OK;
  } catch (const parafol::Error& e) {
    return fail(static_cast<parafol_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PARAFOL_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PARAFOL_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  static const std::regex re(R"(^\s*-?\d+\s*$)");
  if (!std::regex_match(v, re)) throw parafol::Error(parafol::ErrorCode::kParse, key + " expects an integer, got '" + v + "'");
  return std::stoll(v);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw parafol::Error(parafol::ErrorCode::kParse, key + " expects 0 or 1, got '" + v + "'");
}

std::array<int, 3> parse_grid(const std::string& v) {
  static const std::regex one(R"(^(\d+)$)");
  static const std::regex three(R"(^(\d+)x(\d+)x(\d+)$)");
  std::smatch m;
  auto num = [](const std::string& s) {
    if (s.size() > 6) throw parafol::Error(parafol::ErrorCode::kResource, "grid axis '" + s + "' is too large");
    return std::stoi(s);
  };
  if (std::regex_match(v, m, one)) {
    const int n = num(m[1].str());
    return {n, n, n};
  }
  if (std::regex_match(v, m, three)) return {num(m[1].str()), num(m[2].str()), num(m[3].str())};
  throw parafol::Error(parafol::ErrorCode::kParse, "grid must be N or NxMxK, got '" + v + "'");
}

}  // namespace

extern "C" {

const char* parafol_last_error_message(void) { return g_last_error.c_str(); }

const char* parafol_version(void) { return "1.0.0"; }

parafol_status parafol_options_create(parafol_options** out) {
  if (!out) return fail(PARAFOL_ERR_NULL, "null output pointer");
  return guarded([&] { *out = new parafol_options(); });
}

void parafol_options_destroy(parafol_options* opts) { delete opts; }

parafol_status parafol_options_set(parafol_options* opts, const char* key, const char* value) {
  if (!opts || !key || !value) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded([&] {
    const std::string k = key, v = value;
    auto& o = opts->opts;
    if (k == "scenario") o.scenario = v;
    else if (k == "braid") o.braid = v;
    else if (k == "surgery") o.surgery = v;
    else if (k == "side") o.side = v;
    else if (k == "n") {
      const long long n = parse_int(k, v);
      if (n < 1 || n > 64) throw parafol::Error(parafol::ErrorCode::kParameter, "n must lie in [1, 64]");
      o.n = static_cast<int>(n);
    } else if (k == "grid") o.grid = parse_grid(v);
    else if (k == "threads") {
      const long long t = parse_int(k, v);
      if (t < 0 || t > 1024) throw parafol::Error(parafol::ErrorCode::kParameter, "threads must lie in [0, 1024]");
      o.threads = static_cast<int>(t);
    } else if (k == "seed") {
      const long long s = parse_int(k, v);
      if (s < 0) throw parafol::Error(parafol::ErrorCode::kParameter, "seed must be non-negative");
      o.seed = static_cast<std::uint64_t>(s);
    } else if (k == "corrupt_alpha") o.corrupt_alpha = parse_bool(k, v);
    else if (k == "finite_difference") o.finite_difference = parse_bool(k, v);
    else if (k.rfind("tol.", 0) == 0) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v.size()) throw parafol::Error(parafol::ErrorCode::kParse, "bad tolerance value '" + v + "'");
      o.tol.set(k.substr(4), x);
    } else {
      throw parafol::Error(parafol::ErrorCode::kParameter, "unknown option '" + k + "'");
    }
  });
}

parafol_status parafol_build_json(const parafol_options* opts, char** json_out) {
  if (!opts || !json_out) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded([&] {
    const parafol::Scenario s = parafol::build_scenario(opts->opts);
    nlohmann::json j = s.atlas.to_json();
    j["scenario"] = s.name;
    j["parameters"] = s.parameters;
    *json_out = dup(parafol::canonical_dump(j));
  });
}

parafol_status parafol_verify(const parafol_options* opts, parafol_report** out) {
  if (!opts || !out) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded([&] { *out = new parafol_report{parafol::run_suite(opts->opts)}; });
}

void parafol_report_destroy(parafol_report* report) { delete report; }

int parafol_report_passed(const parafol_report* report) { return report && report->report.pass ? 1 : 0; }

parafol_status parafol_report_json(const parafol_report* report, int include_timing, char** json_out) {
  if (!report || !json_out) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded(
      [&] { *json_out = dup(parafol::canonical_dump(parafol::report_to_json(report->report, include_timing != 0))); });
}

parafol_status parafol_report_write(const parafol_report* report, const char* path, int include_timing) {
  if (!report || !path) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded([&] { parafol::emit_report(report->report, path, include_timing != 0); });
}

parafol_status parafol_sample(const parafol_options* opts, const char* chart, const char* field, const char* slice,
                              int resolution, char** csv_out) {
  if (!opts || !chart || !field || !slice || !csv_out) return fail(PARAFOL_ERR_NULL, "null argument");
  return guarded([&] { *csv_out = dup(parafol::sample_field(opts->opts, chart, field, slice, resolution)); });
}

void parafol_string_free(char* s) { std::free(s); }

}  // extern "C"
