// Command-line front end over the C API.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parafol/parafol.h"

namespace {

struct Common {
  std::string scenario;
  std::string braid;
  std::string surgery;
  std::string grid;
  std::string side;
  std::vector<std::string> tols;
  std::string out;
  int threads = -1;
  int n = -1;
  long long seed = -1;
  bool corrupt_alpha = false;
  bool no_fd = false;
  bool timing = false;
};

class Options {
 public:
  Options() {
    if (parafol_options_create(&h_) != PARAFOL_OK) throw std::runtime_error(parafol_last_error_message());
  }
  ~Options() { parafol_options_destroy(h_); }
  Options(const Options&) = delete;
  Options& operator=(const Options&) = delete;

  void set(const std::string& k, const std::string& v) {
    const parafol_status s = parafol_options_set(h_, k.c_str(), v.c_str());
    if (s != PARAFOL_OK) throw Failure{s};
  }
  parafol_options* get() const { return h_; }

  struct Failure {
    parafol_status status;
  };

 private:
  parafol_options* h_ = nullptr;
};

void apply(Options& o, const Common& c) {
  o.set("scenario", c.scenario);
  if (!c.braid.empty()) o.set("braid", c.braid);
  if (!c.surgery.empty()) o.set("surgery", c.surgery);
  if (!c.grid.empty()) o.set("grid", c.grid);
  if (!c.side.empty()) o.set("side", c.side);
  if (c.n >= 0) o.set("n", std::to_string(c.n));
  if (c.seed >= 0) o.set("seed", std::to_string(c.seed));
  if (c.corrupt_alpha) o.set("corrupt_alpha", "1");
  if (c.no_fd) o.set("finite_difference", "0");
  int threads = c.threads;
  if (threads < 0)
    if (const char* env = std::getenv("PARAFOL_THREADS")) threads = std::atoi(env);
  if (threads >= 0) o.set("threads", std::to_string(threads));
  for (const auto& t : c.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --tol expects name=value, got '" << t << "'\n";
      throw Options::Failure{PARAFOL_ERR_PARSE};
    }
    o.set("tol." + t.substr(0, eq), t.substr(eq + 1));
  }
}

int report_error(parafol_status s) {
  std::cerr << "error (" << static_cast<int>(s) << "): " << parafol_last_error_message() << "\n";
  return 2;
}

int write_text(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return 0;
  }
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f || std::fputs(text, f) < 0) {
    std::cerr << "error: cannot write '" << path << "'\n";
    if (f) std::fclose(f);
    return 2;
  }
  std::fclose(f);
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--scenario", c.scenario,
                  "reeb | thick-reeb | parabolic-torus | torus-cylinder | interp-block | turbularization | "
                  "transposition | sphere | knot | surgery")
      ->required();
  sub->add_option("--braid", c.braid, "braid word, e.g. \"s1 s1 s1\" or \"n=3: s1 s2^-1\"");
  sub->add_option("--surgery", c.surgery, "gluing matrix a,b,c,d with ad - bc = 1");
  sub->add_option("--grid", c.grid, "per-axis resolution: N or NxMxK (default 48)");
  sub->add_option("--n", c.n, "number of strings for turbularization");
  sub->add_option("--side", c.side, "transposition side: left | right");
  sub->add_option("--seed", c.seed, "seed for interp-block pairs");
  sub->add_option("--threads", c.threads, "worker threads (default: PARAFOL_THREADS or all cores)");
  sub->add_option("--tol", c.tols, "tolerance override name=value (repeatable)");
  sub->add_flag("--corrupt-alpha", c.corrupt_alpha, "add 0.1 r^2 dphi to polar charts (negative control)");
  sub->add_flag("--no-fd", c.no_fd, "skip the finite-difference Ke sweep");
  sub->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic foliation construction and verification"};
  app.require_subcommand(1);
  Common c;
  auto* build = app.add_subcommand("build", "write the atlas JSON of a scenario");
  auto* verify = app.add_subcommand("verify", "run the grid verification suite");
  auto* sample = app.add_subcommand("sample", "write a CSV of one field over a 2-D slice");
  add_common(build, c);
  add_common(verify, c);
  add_common(sample, c);
  verify->add_flag("--timing", c.timing, "include wall-clock seconds in the report");
  std::string chart, field, slice = "t=0";
  int res = 100;
  sample->add_option("--chart", chart, "chart name")->required();
  sample->add_option("--field", field, "Ke | H | k1 | k2 | min_eig | frobenius")->required();
  sample->add_option("--slice", slice, "fixed coordinate, e.g. t=0");
  sample->add_option("--res", res, "samples per free axis");

  CLI11_PARSE(app, argc, argv);

  try {
    Options o;
    apply(o, c);
    if (build->parsed()) {
      char* json = nullptr;
      if (auto s = parafol_build_json(o.get(), &json); s != PARAFOL_OK) return report_error(s);
      const int rc = write_text(c.out, json);
      parafol_string_free(json);
      return rc;
    }
    if (sample->parsed()) {
      char* csv = nullptr;
      if (auto s = parafol_sample(o.get(), chart.c_str(), field.c_str(), slice.c_str(), res, &csv); s != PARAFOL_OK)
        return report_error(s);
      const int rc = write_text(c.out, csv);
      parafol_string_free(csv);
      return rc;
    }
    parafol_report* rep = nullptr;
    if (auto s = parafol_verify(o.get(), &rep); s != PARAFOL_OK) return report_error(s);
    int rc = 0;
    if (c.out.empty() || c.out == "-") {
      char* json = nullptr;
      if (auto s = parafol_report_json(rep, c.timing, &json); s != PARAFOL_OK) rc = report_error(s);
      else {
        std::fputs(json, stdout);
        parafol_string_free(json);
      }
    } else if (auto s = parafol_report_write(rep, c.out.c_str(), c.timing); s != PARAFOL_OK) {
      rc = report_error(s);
    }
    const bool passed = parafol_report_passed(rep) != 0;
    parafol_report_destroy(rep);
    if (rc) return rc;
    std::cerr << (passed ? "PASS" : "FAIL") << "\n";
    return passed ? 0 : 1;
  } catch (const Options::Failure& f) {
    return report_error(f.status);
  }
}
