#pragma once

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pindist/setspec.hpp"
#include "pindist/verify.hpp"

namespace pindist {

enum class BackendChoice { auto_select, naive, dft };

inline const char* backend_choice_name(BackendChoice c) {
  switch (c) {
    case BackendChoice::auto_select: return "auto";
    case BackendChoice::naive: return "naive";
    case BackendChoice::dft: return "dft";
  }
  return "auto";
}

inline BackendChoice parse_backend_choice(const std::string& text) {
  if (text == "auto") return BackendChoice::auto_select;
  if (text == "naive") return BackendChoice::naive;
  if (text == "dft") return BackendChoice::dft;
  fail(errc::invalid_param, "backend must be auto, naive or dft");
}

/// Everything one run needs; echoed verbatim into every artifact it writes.
struct RunConfig {
  std::uint32_t p = 3;
  std::uint32_t k = 1;
  std::uint32_t d = 2;
  std::string set_spec = "full";
  std::uint64_t a_num = 2;
  std::uint64_t a_den = 1;
  BackendChoice backend = BackendChoice::auto_select;
  std::string out_dir = ".";
  std::uint64_t cap = kDefaultSizeCap;
  unsigned threads = 0;  // 0: take PINDIST_THREADS, else hardware
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> sizes;  // experiment only
  std::uint32_t trials = 10;         // experiment only
};

struct ResolvedThreads {
  unsigned count = 1;
  std::string source = "hardware";
};

inline ResolvedThreads resolve_thread_config(unsigned requested) {
  if (requested > 0) return {requested, "flag"};
  if (const char* env = std::getenv("PINDIST_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v < 1024)
      return {static_cast<unsigned>(v), "env"};
  }
  return {resolve_threads(0), "hardware"};
}

/// naive unless the field is prime and the space is large enough that the
/// transform backend pays off (q^d >= 2^16); explicit choices pass through.
inline SweepBackend resolve_backend(BackendChoice choice, const FieldSpec& F, std::uint64_t n) {
  switch (choice) {
    case BackendChoice::naive: return SweepBackend::naive;
    case BackendChoice::dft: return SweepBackend::dft;
    case BackendChoice::auto_select: break;
  }
  return (F.k() == 1 && n >= (1ull << 16)) ? SweepBackend::dft : SweepBackend::naive;
}

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

inline nlohmann::json config_json(const RunConfig& cfg, const ResolvedThreads& threads,
                                  const char* resolved_backend) {
  nlohmann::json j;
  j["p"] = cfg.p;
  j["k"] = cfg.k;
  j["d"] = cfg.d;
  j["set"] = cfg.set_spec;
  j["a"] = {{"num", cfg.a_num}, {"den", cfg.a_den}};
  j["backend"] = backend_choice_name(cfg.backend);
  j["resolved_backend"] = resolved_backend;
  j["out"] = cfg.out_dir;
  j["cap"] = cfg.cap;
  j["threads"] = threads.count;
  j["threads_source"] = threads.source;
  j["seed"] = cfg.seed;
  if (!cfg.sizes.empty()) j["sizes"] = cfg.sizes;
  j["trials"] = cfg.trials;
  return j;
}

/// Stamps run metadata onto a report document. The content hash covers the
/// semantic content only: timestamp, the hash itself and the output
/// directory are excluded, so reruns of one config compare equal by hash
/// wherever they were written.
inline void finalize_document(nlohmann::json& j, const nlohmann::json& config) {
  j["config"] = config;
  j["generator"] = kGeneratorId;
  nlohmann::json hashed = j;
  hashed["config"].erase("out");
  j["content_hash"] = detail::hex64(detail::fnv1a64(hashed.dump()));
  j["timestamp"] = detail::timestamp_utc();
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(errc::file_format, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline std::string ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir;
}

inline int run_field_info(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    FieldOptions fopt;
    fopt.size_cap = cfg.cap;
    FieldSpec F = make_field(cfg.p, cfg.k, fopt);
    nlohmann::json j;
    j["schema"] = "pindist-field/1";
    j["p"] = F.p();
    j["k"] = F.k();
    j["q"] = F.q();
    j["modulus"] = F.modulus();
    j["tables"] = F.has_tables();
    out << j.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
}

/// Runs, in order: field axioms, the scaled-average audit, the pinned-count
/// bound, the augmented-distance bound (when |E| >= q) and the bisector
/// checks (when the space is small). One JSON report per check; exit 0 iff
/// everything passed.
inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    FieldOptions fopt;
    fopt.size_cap = cfg.cap;
    FieldSpec F = make_field(cfg.p, cfg.k, fopt);
    SetSpec spec = parse_set_spec(cfg.set_spec);
    PointSet E = generate(F, cfg.d, spec, cfg.cap);
    RationalParam a(cfg.a_num, cfg.a_den);
    ResolvedThreads threads = resolve_thread_config(cfg.threads);
    SweepBackend backend = resolve_backend(cfg.backend, F, E.space());
    nlohmann::json config = config_json(cfg, threads, backend_name(backend));
    std::string dir = ensure_out_dir(cfg);

    std::vector<PinStats> stats = sweep_pin_stats(E, backend, threads.count, cfg.cap);

    std::vector<VerificationReport> reports;
    reports.push_back(check_field_axioms(F));
    reports.push_back(
        audit_second_moment_pigeonhole(E, a, cfg.set_spec, &stats, backend, threads.count, cfg.cap));
    reports.push_back(
        check_pinned_count_bound(E, a, cfg.set_spec, &stats, backend, threads.count, cfg.cap));
    if (E.size() >= F.q())
      reports.push_back(check_augmented_distance_bound(E, a, cfg.set_spec, &stats, backend,
                                                       threads.count, cfg.cap));
    if (E.space() <= 4096) reports.push_back(check_bisector_hyperplane(F, cfg.d, cfg.cap));

    const VerificationReport* first_failed = nullptr;
    for (const VerificationReport& rep : reports) {
      nlohmann::json j = rep.to_json();
      finalize_document(j, config);
      write_json_file(dir + "/report-" + rep.check + ".json", j);
      out << rep.check << ": " << (rep.passed ? "PASS" : "FAIL") << '\n';
      if (!rep.passed && !first_failed) first_failed = &rep;
    }
    if (first_failed) {
      nlohmann::json j = first_failed->to_json();
      finalize_document(j, config);
      err << j.dump(2) << '\n';
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
}

/// Writes the per-pin CSV (pin_index, second_moment, pinned_count) and a
/// summary whose computed total must match the exact closed form.
inline int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    FieldOptions fopt;
    fopt.size_cap = cfg.cap;
    FieldSpec F = make_field(cfg.p, cfg.k, fopt);
    SetSpec spec = parse_set_spec(cfg.set_spec);
    PointSet E = generate(F, cfg.d, spec, cfg.cap);
    ResolvedThreads threads = resolve_thread_config(cfg.threads);
    SweepBackend backend = resolve_backend(cfg.backend, F, E.space());
    nlohmann::json config = config_json(cfg, threads, backend_name(backend));
    std::string dir = ensure_out_dir(cfg);

    std::vector<PinStats> stats = sweep_pin_stats(E, backend, threads.count, cfg.cap);

    {
      std::ofstream csv(dir + "/sweep.csv");
      if (!csv) fail(errc::file_format, "cannot write sweep.csv");
      csv << "pin_index,second_moment,pinned_count\n";
      for (std::uint64_t y = 0; y < stats.size(); ++y)
        csv << y << ',' << stats[y].second_moment << ',' << stats[y].pinned_count << '\n';
    }

    Uint128 total = 0;
    for (const PinStats& s : stats) total += s.second_moment;
    Uint128 expected = expected_total_second_moment(F.q(), E.space(), E.size());
    bool match = total == expected;

    nlohmann::json j;
    j["schema"] = "pindist-sweep/1";
    j["set_size"] = E.size();
    j["space_size"] = E.space();
    j["total_second_moment"] = u128_to_string(total);
    j["expected_total"] = u128_to_string(expected);
    j["totals_match"] = match;
    finalize_document(j, config);
    write_json_file(dir + "/sweep-summary.json", j);

    out << "sweep: " << stats.size() << " pins, total " << u128_to_string(total)
        << (match ? " == " : " != ") << u128_to_string(expected) << '\n';
    if (!match) {
      err << "total second moment mismatch\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
}

/// Draws seeded random sets of the requested sizes and records, per trial,
/// how many pins already meet the pinned-count target and how many land in
/// the good-pin set. Trial seeds are seed + size_index * trials + trial.
inline int run_experiment(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    FieldOptions fopt;
    fopt.size_cap = cfg.cap;
    FieldSpec F = make_field(cfg.p, cfg.k, fopt);
    RationalParam a(cfg.a_num, cfg.a_den);
    ResolvedThreads threads = resolve_thread_config(cfg.threads);
    std::uint64_t n = space_size(F, cfg.d);
    if (n > cfg.cap) fail(errc::size_cap_exceeded, "experiment needs q^d <= cap");
    SweepBackend backend = resolve_backend(cfg.backend, F, n);
    std::string dir = ensure_out_dir(cfg);

    std::vector<std::uint64_t> sizes = cfg.sizes;
    if (sizes.empty()) {
      for (std::uint64_t s : {F.q(), 2 * F.q(), 4 * F.q()})
        if (s <= n) sizes.push_back(s);
      if (sizes.empty()) sizes.push_back(n);
    }

    std::ofstream csv(dir + "/experiment.csv");
    if (!csv) fail(errc::file_format, "cannot write experiment.csv");
    csv << "size,trial,seed,success_pins,good_pins,total_pins,success_fraction,"
           "good_fraction,distance_count\n";

    bool guarantee_ok = true;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      if (sizes[si] > n) fail(errc::size_exceeds_space, "requested size exceeds q^d");
      for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
        std::uint64_t seed = cfg.seed + si * cfg.trials + trial;
        SetSpec spec;
        spec.kind = SetSpec::Kind::random;
        spec.size = sizes[si];
        spec.seed = seed;
        PointSet E = generate(F, cfg.d, spec, cfg.cap);
        std::vector<PinStats> stats = sweep_pin_stats(E, backend, threads.count, cfg.cap);

        Uint128 rhs = detail::good_pin_rhs(E, a);
        std::uint64_t success = 0;
        std::uint64_t good = 0;
        for (const PinStats& s : stats) {
          if (Uint128(2) * a.num * s.pinned_count >= Uint128(a.den) * F.q()) ++success;
          if (detail::is_good_pin(F.q(), a, s.second_moment, rhs)) ++good;
        }
        if (Uint128(a.num) * good < Uint128(a.num - a.den) * n) guarantee_ok = false;
        std::uint64_t dist_count = distance_set(E).size();

        char frac[64];
        csv << sizes[si] << ',' << trial << ',' << seed << ',' << success << ',' << good << ','
            << n;
        std::snprintf(frac, sizeof frac, ",%.17g,%.17g", double(success) / double(n),
                      double(good) / double(n));
        csv << frac << ',' << dist_count << '\n';
      }
    }
    out << "experiment: " << sizes.size() << " sizes x " << cfg.trials << " trials\n";
    if (!guarantee_ok) {
      err << "good-pin size guarantee violated\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 2;
  }
}

}  // namespace pindist
