// annex: sweeps, predictions and simulations for random annex codes.
//
//   annex analyze  --N 1000 --h 25 --l 0:16 --scheme random-annex,head-to-toe
//   annex simulate --l 12 --trials 1000 --grid 1000:1600:20 --curve-out fail.csv
//   annex compare  --l 0:16 --trials 200
//   annex overlap  --l 4,8,12,16
//   annex selftest

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "annex/analysis.hpp"
#include "annex/errors.hpp"
#include "annex/simulate.hpp"

using namespace annex;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "7", "1,4,9", "0:16" or "1000:1600:20" (inclusive bounds)
std::vector<std::size_t> parse_range(const std::string& text, const char* flag) {
  auto num = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-') {
      throw UsageError(std::string(flag) + ": '" + s + "' is not a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
  };
  std::vector<std::size_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw UsageError(std::string(flag) + ": bad range '" + text + "'");
    const std::size_t a = num(parts[0]), b = num(parts[1]);
    const std::size_t step = parts.size() == 3 ? num(parts[2]) : 1;
    if (step == 0 || b < a) throw UsageError(std::string(flag) + ": empty range '" + text + "'");
    for (std::size_t v = a; v <= b; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
  return out;
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    try {
      const Scheme s = parse_scheme(p);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--scheme: at least one scheme is required");
  return out;
}

struct Config {
  std::string command;
  std::size_t N = 1000;
  std::size_t h = 25;
  std::string l_text = "0:16";
  std::optional<std::size_t> g_fixed;
  std::uint32_t q = 256;
  std::string scheme_text = "random-annex";
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  std::string grid_text;
  std::string out = "-";
  std::string curve_out;
  std::string format = "csv";
  unsigned threads = 0;
  std::size_t samples = 0;  // overlap: Monte Carlo samples per point, 0 to skip

  json echo() const {
    json j{{"command", command}, {"N", N},           {"l", l_text},
           {"q", q},             {"scheme", scheme_text}, {"seed", seed},
           {"format", format}};
    if (g_fixed) j["g_fixed"] = *g_fixed;
    else j["h"] = h;
    if (command == "simulate" || command == "compare") j["trials"] = trials;
    if (!grid_text.empty()) j["grid"] = grid_text;
    if (command == "overlap") j["samples"] = samples;
    return j;
  }
};

// One parameter point of a sweep, after applying the scheme's constraints.
struct Point {
  Scheme scheme;
  CodeParams params;
};

std::vector<Point> expand(const Config& c) {
  const auto ls = parse_range(c.l_text, "--l");
  const auto schemes = parse_schemes(c.scheme_text);
  std::vector<Point> out;
  std::set<std::tuple<int, std::size_t, std::size_t>> seen;
  for (const Scheme s : schemes) {
    for (const std::size_t l : ls) {
      CodeParams p{c.N, c.h, l, 1, c.q};
      if (c.g_fixed) {
        if (l >= *c.g_fixed) throw UsageError("--l: with --g-fixed every l must be below g");
        p.h = *c.g_fixed - l;
      }
      if (s == Scheme::kDisjoint) p.l = 0;
      try {
        p.validate();
      } catch (const ParameterError& e) {
        throw UsageError(e.what());
      }
      if (s == Scheme::kHeadToToe && p.l > p.h) {
        std::fprintf(stderr, "note: skipping head-to-toe at l=%zu (overlap exceeds h=%zu)\n", p.l, p.h);
        continue;
      }
      // disjoint points collapse onto l = 0
      if (!seen.insert({static_cast<int>(s), p.h, p.l}).second) continue;
      out.push_back({s, p});
    }
  }
  return out;
}

std::uint64_t point_seed(std::uint64_t master, const Point& pt) {
  return derive_seed(master, static_cast<std::uint64_t>(pt.scheme) * 1000003ull * 1000003ull +
                                 pt.params.h * 1000003ull + pt.params.l);
}

const char* method_of(Scheme s) {
  switch (s) {
    case Scheme::kRandomAnnex: return "closed-form-profile";
    case Scheme::kHeadToToe: return "empirical-profile prediction";
    case Scheme::kDisjoint: return "closed-form-profile";
  }
  return "";
}

double predicted(const Point& pt) {
  if (pt.scheme == Scheme::kHeadToToe) {
    return predict_from_profile(pt.params, layout_overlap_profile(make_head_to_toe(pt.params)))
        .expected_packets;
  }
  return predict_expected_packets(pt.params);
}

// A table rendered as CSV with a metadata comment line, or as JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row) { rows.push_back(std::move(row)); }

  std::string render(const Config& c) const {
    json meta = c.echo();
    meta["tool"] = "annex";
    meta["version"] = "0.1.0";
    if (c.format == "json") {
      json j;
      j["meta"] = meta;
      j["rows"] = json::array();
      for (const auto& r : rows) {
        json o;
        for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
        j["rows"].push_back(o);
      }
      return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# " << meta.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ",";
        if (r[i].is_string()) {
          os << r[i].get<std::string>();
        } else if (r[i].is_number_float()) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.10g", r[i].get<double>());
          os << buf;
        } else {
          os << r[i].dump();
        }
      }
      os << "\n";
    }
    return os.str();
  }
};

// Write via a temporary file and rename so readers never see partial output.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void require_trials(const Config& c) {
  if (c.trials == 0) throw UsageError("--trials must be positive");
}

int cmd_analyze(const Config& c) {
  Table t{{"N", "h", "l", "q", "scheme", "predicted_expected_packets", "method",
           "uniform_generation_size"}, {}};
  for (const auto& pt : expand(c)) {
    t.add({pt.params.N, pt.params.h, pt.params.l, pt.params.q, std::string(to_string(pt.scheme)),
           predicted(pt), method_of(pt.scheme), pt.params.divisible()});
  }
  emit(c.out, t.render(c));
  return 0;
}

int cmd_simulate(const Config& c) {
  require_trials(c);
  std::vector<std::size_t> grid;
  if (!c.grid_text.empty()) {
    grid = parse_range(c.grid_text, "--grid");
    if (c.curve_out.empty()) throw UsageError("--grid needs --curve-out for the failure-curve table");
  }
  Table means{{"scheme", "N", "h", "l", "q", "trials", "mean_packets", "stderr", "seed"}, {}};
  Table curves{{"scheme", "N", "h", "l", "q", "M", "p_fail", "trials", "seed"}, {}};
  for (const auto& pt : expand(c)) {
    const auto est = estimate_mean(pt.scheme, pt.params, c.trials, point_seed(c.seed, pt), {}, c.threads);
    const std::string name(to_string(pt.scheme));
    means.add({name, pt.params.N, pt.params.h, pt.params.l, pt.params.q, est.trials, est.mean,
               est.std_error, c.seed});
    if (!grid.empty()) {
      const auto fc = failure_curve_from_samples(grid, est.samples, c.seed);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        curves.add({name, pt.params.N, pt.params.h, pt.params.l, pt.params.q, grid[i], fc.p_fail[i],
                    fc.trials, c.seed});
      }
    }
  }
  emit(c.out, means.render(c));
  if (!grid.empty()) emit(c.curve_out, curves.render(c));
  return 0;
}

int cmd_compare(const Config& c) {
  require_trials(c);
  Table t{{"scheme", "N", "h", "l", "q", "predicted", "simulated", "stderr", "rel_error", "trials",
           "seed", "method"}, {}};
  for (const auto& pt : expand(c)) {
    const double pred = predicted(pt);
    const auto est = estimate_mean(pt.scheme, pt.params, c.trials, point_seed(c.seed, pt), {}, c.threads);
    t.add({std::string(to_string(pt.scheme)), pt.params.N, pt.params.h, pt.params.l, pt.params.q,
           pred, est.mean, est.std_error, std::abs(pred - est.mean) / est.mean, est.trials, c.seed,
           method_of(pt.scheme)});
  }
  emit(c.out, t.render(c));
  return 0;
}

int cmd_overlap(const Config& c) {
  Table t{{"scheme", "N", "h", "l", "s", "omega", "h_plus_l_minus_omega", "empirical", "empirical_stderr"}, {}};
  for (const auto& pt : expand(c)) {
    const auto prof = pt.scheme == Scheme::kRandomAnnex
                          ? omega_profile(pt.params)
                          : layout_overlap_profile(make_layout(pt.scheme, pt.params, 0));
    for (std::size_t s = 0; s < prof.size(); ++s) {
      json emp = "", emp_se = "";
      if (c.samples > 0 && pt.scheme == Scheme::kRandomAnnex) {
        const auto est = empirical_overlap(pt.params, s, c.samples, derive_seed(point_seed(c.seed, pt), s));
        emp = est.mean;
        emp_se = est.std_error;
      }
      t.add({std::string(to_string(pt.scheme)), pt.params.N, pt.params.h, pt.params.l, s, prof[s],
             static_cast<double>(pt.params.g()) - prof[s], emp, emp_se});
    }
  }
  emit(c.out, t.render(c));
  return 0;
}

// Quick end-to-end sanity checks; exit status 1 on any failure.
int cmd_selftest(const Config& c) {
  int failed = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    failed += ok ? 0 : 1;
  };
  const GaloisField f;
  check(f.mul(FieldElement(0x53), FieldElement(0xCA)) == FieldElement(1), "GF(256): 0x53 * 0xCA = 1");
  double h5 = 0;
  for (int i = 1; i <= 5; ++i) h5 += 1.0 / i;
  check(std::abs(expected_collection(5, {{5}, {1}}) - 5 * h5) < 1e-6, "coupon collector n=5");
  check(std::abs(eta_exact(2, 0, 2) - 10.0 / 3.0) < 1e-12, "eta_exact(q=2, r=2) = 10/3");
  const CodeParams p{200, 20, 6, 1, c.q};
  try {
    const auto est = estimate_mean(Scheme::kRandomAnnex, p, 20, c.seed, {}, c.threads);
    check(est.mean >= 200, "random annex trials decode byte-exact (N=200)");
  } catch (const std::exception& e) {
    check(false, std::string("random annex trials: ") + e.what());
  }
  const double pred = predict_expected_packets({1000, 25, 12, 1, 256});
  check(pred > 1000 && pred < 1300, "prediction at N=1000 h=25 l=12 is in range");
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random annex codes: overlap analysis, throughput prediction and simulation"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");  // -h is the base generation size
  Config c;

  auto add_common = [&](CLI::App* sub, bool simulation) {
    sub->set_help_flag("--help", "print help and exit");
    sub->add_option("--N", c.N, "information packets")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--h", c.h, "base generation size")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--l", c.l_text, "annex size: value, list a,b,c or range a:b[:step]")->capture_default_str();
    sub->add_option("--g-fixed", c.g_fixed, "hold h+l at this value while sweeping l (overrides --h)");
    sub->add_option("--q", c.q, "field size, power of two up to 65536")->capture_default_str();
    sub->add_option("--scheme", c.scheme_text, "comma list of random-annex, head-to-toe, disjoint")
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "master seed; all randomness derives from it")->capture_default_str();
    sub->add_option("--out", c.out, "output path, - for stdout")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    if (simulation) {
      sub->add_option("--trials", c.trials, "trials per point")->capture_default_str();
      sub->add_option("--threads", c.threads, "worker threads, 0 for all cores")->capture_default_str();
    }
  };

  auto* analyze = app.add_subcommand("analyze", "predicted expected packets per (scheme, l)");
  add_common(analyze, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo packets-to-completion (and failure curves)");
  add_common(simulate, true);
  simulate->add_option("--grid", c.grid_text, "failure-curve M values: list or range a:b[:step]");
  simulate->add_option("--curve-out", c.curve_out, "path for the failure-curve table");
  auto* compare = app.add_subcommand("compare", "prediction next to simulation with relative error");
  add_common(compare, true);
  auto* overlap = app.add_subcommand("overlap", "overlap profile omega(s) and h+l-omega(s)");
  add_common(overlap, false);
  overlap->add_option("--samples", c.samples, "also sample each point this many times (random annex)")
      ->capture_default_str();
  auto* selftest = app.add_subcommand("selftest", "fast sanity checks");
  selftest->set_help_flag("--help", "print help and exit");
  selftest->add_option("--q", c.q, "field size for the decoding check")->capture_default_str();
  selftest->add_option("--seed", c.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (c.command == "analyze") return cmd_analyze(c);
    if (c.command == "simulate") return cmd_simulate(c);
    if (c.command == "compare") return cmd_compare(c);
    if (c.command == "overlap") return cmd_overlap(c);
    return cmd_selftest(c);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
