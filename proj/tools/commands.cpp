#include "commands.hpp"

#include "hecke/util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

namespace cli {

using namespace hecke;
namespace fs = std::filesystem;

namespace {

int max_spread(const std::vector<Cocharacter>& window) {
  int s = 0;
  for (const auto& l : window) s = std::max(s, l.spread());
  return s;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

// Cached under cache_dir when configured; a corrupted or stale file is an
// audit failure, never silently rebuilt.
LevelQuotient quotient_for(const RunConfig& c, const GroupSpec& spec, std::ostream& log) {
  if (c.cache_dir.empty()) return LevelQuotient::enumerate(spec, c.m, c.quotient_guard);
  const auto path = fs::path(c.cache_dir) / ("quotient-" + hex64(fnv1a64(spec.describe() + "@" + std::to_string(c.m))) + ".bin");
  if (fs::exists(path)) {
    log << "loading " << path.string() << "\n";
    return LevelQuotient::load(spec, c.m, path.string());
  }
  auto Q = LevelQuotient::enumerate(spec, c.m, c.quotient_guard);
  fs::create_directories(c.cache_dir);
  Q.save(path.string());
  log << "cached " << path.string() << "\n";
  return Q;
}

std::ofstream open_out(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  std::ofstream out(fs::path(c.out_dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (fs::path(c.out_dir) / name).string());
  return out;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

std::vector<DoubleCosetId> ids_over(const CosetEngine& E, const std::vector<Cocharacter>& window) {
  std::vector<DoubleCosetId> out;
  for (const auto& lam : window)
    for (const auto& id : E.enumerate_ids(lam)) out.push_back(id);
  return out;
}

Cocharacter zero(int n) { return Cocharacter(std::vector<int>(n, 0)); }

}  // namespace

int cmd_enumerate(const RunConfig& c, std::ostream& log) {
  CosetEngine E(quotient_for(c, c.spec, log), c.m, working_level_for(c.spec, c.m, max_spread(c.window), 0));
  const auto& Q = E.quotient();
  const auto& R = E.model().quotient_ring();
  auto q = open_out(c, "quotient.csv");
  q << "index,matrix\n";
  for (std::size_t i = 0; i < Q.size(); ++i) q << i << ',' << csv_quote(mat_to_string(R, Q.element(i))) << '\n';

  auto census = open_out(c, "census.csv");
  census << "lambda,ids,stabilizer,quotient_size,orbit_stabilizer\n";
  json ids = json::object();
  bool ok = true;
  const std::uint64_t N = Q.size();
  for (const auto& lam : c.window) {
    auto all = E.enumerate_ids(lam);
    const auto gamma = E.stabilizer(lam)->size();
    const bool good = all.size() * gamma == N * N;
    ok = ok && good;
    census << csv_quote(lam.to_string()) << ',' << all.size() << ',' << gamma << ',' << N << ','
           << (good ? "true" : "false") << '\n';
    json list = json::array();
    for (const auto& id : all) list.push_back(to_json(id));
    ids[lam.to_string()] = list;
    log << lam.to_string() << ": |X| = " << all.size() << ", |Γ| = " << gamma << "\n";
  }
  open_out(c, "ids.json") << json{{"group", c.spec.describe()}, {"m", c.m}, {"cache_version", E.cache_version()},
                                  {"quotient_size", N}, {"ids", ids}}
                                 .dump(2)
                          << '\n';
  log << "|K/K_m| = " << N << "\n";
  return ok ? kOk : kAuditFailure;
}

int cmd_volume(const RunConfig& c, std::ostream& log) {
  const auto datum = c.spec.datum();
  auto out = open_out(c, "volume.csv");
  out << "lambda,closed_form,brute_force,match\n";
  bool ok = true;
  for (const auto& lam : c.window) {
    const auto closed = volume_closed_form(datum, c.spec.base_q(), lam);
    const auto brute = orbit_volume(c.spec, c.m, lam);
    ok = ok && closed == brute;
    out << csv_quote(lam.to_string()) << ',' << closed << ',' << brute << ',' << (closed == brute ? "true" : "false")
        << '\n';
    log << lam.to_string() << ": " << closed << " / " << brute << "\n";
  }
  return ok ? kOk : kAuditFailure;
}

int cmd_convolve(const RunConfig& c, std::ostream& log) {
  const int s = max_spread(c.window);
  CosetEngine E(quotient_for(c, c.spec, log), c.m, working_level_for(c.spec, c.m, s, s));
  HeckeAlgebra H(E, c.threads);
  auto ids = ids_over(E, c.window);
  std::vector<ProductRow> rows;
  for (const auto& x : ids)
    for (const auto& y : ids) rows.emplace_back(x, y, H.basis_product(x, y));
  auto csv = open_out(c, "structure_constants.csv");
  write_structure_csv(csv, rows);
  log << rows.size() << " basis products over " << ids.size() << " ids\n";
  if (!c.convolve_f.empty()) {
    auto read = [&](const std::string& path) {
      std::ifstream in(path);
      if (!in) throw std::invalid_argument("cannot read " + path);
      return hecke_from_json(json::parse(in), E.cache_version());
    };
    auto f = read(c.convolve_f), g = read(c.convolve_g);
    open_out(c, "convolution.json") << to_json(H.convolve(f, g), E.cache_version()).dump(2) << '\n';
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& log) {
  const int s = max_spread(c.window);
  CosetEngine E(quotient_for(c, c.spec, log), c.m, working_level_for(c.spec, c.m, 2 * s, 2 * s));
  HeckeAlgebra H(E, c.threads);
  const auto& Q = E.quotient();
  const auto ids = ids_over(E, c.window);
  const int n = c.spec.n;

  json checks = json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, std::uint64_t count, std::uint64_t failures) {
    checks.push_back(json{{"name", name}, {"checked", count}, {"failures", failures}, {"passed", failures == 0}});
    all_ok = all_ok && failures == 0;
    log << (failures == 0 ? "ok    " : "FAIL  ") << name << " (" << count << " checked, " << failures
        << " failures)\n";
  };

  std::uint64_t products = 0, mass_fail = 0;
  auto product = [&](const DoubleCosetId& x, const DoubleCosetId& y) {
    auto p = H.basis_product(x, y);
    std::uint64_t mass = 0;
    bool integral = true;
    for (const auto& [z, cz] : p.terms) {
      integral = integral && cz.denominator() == 1 && cz.numerator() > 0;
      mass += static_cast<std::uint64_t>(cz.numerator()) * H.volume(z);
    }
    ++products;
    if (!integral || mass != H.volume(x) * H.volume(y)) ++mass_fail;
    return p;
  };

  {
    std::uint64_t count = 0, fail = 0;
    std::vector<Cocharacter> lams = c.window;
    if (std::find(lams.begin(), lams.end(), zero(n)) == lams.end()) lams.push_back(zero(n));
    const std::uint64_t N = Q.size();
    for (const auto& lam : lams) {
      ++count;
      if (E.enumerate_ids(lam).size() * E.stabilizer(lam)->size() != N * N) ++fail;
    }
    auto g0 = E.stabilizer(zero(n));
    bool diag = g0->size() == N;
    for (const auto& [a, b] : g0->elements) diag = diag && a == b;
    ++count;
    if (!diag) ++fail;
    record("orbit-stabilizer", count, fail);
  }
  {
    std::uint64_t fail = 0;
    const auto one = H.unit();
    for (const auto& id : ids)
      if (!(H.convolve(one, H.basis(id)) == H.basis(id)) || !(H.convolve(H.basis(id), one) == H.basis(id))) ++fail;
    record("unit", ids.size(), fail);
  }
  {
    std::uint64_t count = 0, fail = 0;
    for (const auto& l : c.window)
      for (const auto& mu : c.window) {
        ++count;
        if (!(product(E.id_of_pi(l), E.id_of_pi(mu)) == H.basis(E.id_of_pi(l + mu)))) ++fail;
      }
    record("cocharacter additivity", count, fail);
  }
  {
    std::uint64_t count = 0, fail = 0;
    const std::uint64_t N = Q.size();
    std::mt19937_64 rng(c.seed);
    const bool full = N * N * c.window.size() <= 20000;
    for (const auto& lam : c.window) {
      const std::uint64_t trials = full ? N * N : 20000 / std::max<std::size_t>(c.window.size(), 1);
      for (std::uint64_t t = 0; t < trials; ++t) {
        auto k = static_cast<std::uint32_t>(full ? t / N : rng() % N);
        auto k2 = static_cast<std::uint32_t>(full ? t % N : rng() % N);
        ++count;
        try {
          H.conjugate_sandwich(k, lam, k2);
        } catch (const ConsistencyError&) {
          ++fail;
        }
      }
    }
    record(full ? "sandwich grid (full)" : "sandwich grid (sampled)", count, fail);
  }
  {
    std::uint64_t fail = 0;
    std::mt19937_64 rng(c.seed + 1);
    const int trials = ids.empty() ? 0 : c.triples;
    for (int t = 0; t < trials; ++t) {
      const auto& x = ids[rng() % ids.size()];
      const auto& y = ids[rng() % ids.size()];
      const auto& z = ids[rng() % ids.size()];
      auto lhs = H.convolve(product(x, y), H.basis(z));
      auto rhs = H.convolve(H.basis(x), product(y, z));
      if (!(lhs == rhs)) ++fail;
    }
    record("associativity", trials, fail);
  }
  {
    std::uint64_t fail = 0;
    for (const auto& f : H.generator_certificate(ids))
      if (!f.verified) ++fail;
    record("generator certificate", ids.size(), fail);
  }
  {
    std::uint64_t count = 0, fail = 0;
    if (!c.window.empty()) {
      const int nC = precision_bound(E.datum(), c.window, c.m);
      try {
        count = certify_precision_bound(E, c.window, nC);
      } catch (const ConsistencyError&) {
        fail = 1;
      }
    }
    record("precision bound certificate", count, fail);
  }
  record("mass conservation", products, mass_fail);

  open_out(c, "verify.json") << json{{"group", c.spec.describe()}, {"m", c.m}, {"cache_version", E.cache_version()},
                                     {"checks", checks}, {"passed", all_ok}}
                                    .dump(2)
                             << '\n';
  return all_ok ? kOk : kAuditFailure;
}

int cmd_transfer(const RunConfig& c, std::ostream& log) {
  if (!c.target_field) throw std::invalid_argument("transfer needs a target_field");
  if (c.l == 0) throw std::invalid_argument("transfer needs the closeness level l");
  GroupSpec tspec = c.spec;
  tspec.field = *c.target_field;
  const int s = max_spread(c.window);
  const int bound = c.window.empty() ? c.m : precision_bound(c.spec.datum(), c.window, c.m);
  const bool applicable = c.l >= bound;

  json base{{"l", c.l}, {"m", c.m}, {"backends", json::array({c.spec.describe(), tspec.describe()})},
            {"precision_bound", bound}, {"theorem_applicable", applicable}};
  auto fail_plan = [&](const std::string& why) {
    base["plan_error"] = why;
    open_out(c, "transfer.json") << base.dump(2) << '\n';
    open_out(c, "transfer.txt") << why << '\n';
    log << "plan failed at l = " << c.l << ": " << why << (applicable ? "" : " (probe, recorded)") << "\n";
    return applicable ? kAuditFailure : kOk;
  };

  const int lE = c.l * c.spec.ext_e;
  std::optional<TruncIso> psi;
  try {
    TruncatedRing src(c.spec.field, lE), dst(tspec.field, lE);
    if (c.psi_pi_image.empty())
      psi.emplace(TruncIso::canonical(src, dst));
    else
      psi.emplace(src, dst, dst.from_coords(c.psi_pi_image), dst.residue_generator(), false);
  } catch (const RingError& e) {
    return fail_plan(std::string("fields not close enough at level ") + std::to_string(c.l) + ": " + e.what());
  } catch (const AuditError& e) {
    return fail_plan(std::string("fields not close enough at level ") + std::to_string(c.l) + ": " + e.what());
  }
  const int W = working_level_for(c.spec, c.m, s, s);
  CosetEngine E(quotient_for(c, c.spec, log), c.m, W);
  CosetEngine Ep(quotient_for(c, tspec, log), c.m, W);
  std::optional<TransferPlan> plan;
  try {
    plan.emplace(E, Ep, *psi, c.window, c.seed);
  } catch (const TransferError& e) {
    return fail_plan(e.what());
  }
  HeckeAlgebra H(E, c.threads), Hp(Ep, c.threads);
  auto r = compare_structure_constants(*plan, H, Hp, ids_over(E, c.window), c.threads);
  auto j = to_json(r);
  json stab = json::object();
  for (const auto& [lam, size] : plan->audit().stabilizer_sizes) stab[lam.to_string()] = size;
  j["psi_aligned"] = psi->aligned();
  j["stabilizer_audit"] = json{{"hom_pairs", plan->audit().hom_pairs}, {"exhaustive", plan->audit().hom_exhaustive},
                               {"stabilizer_sizes", stab}};
  open_out(c, "transfer.json") << j.dump(2) << '\n';
  open_out(c, "transfer.txt") << to_text(r);
  log << to_text(r);
  if (!r.mismatches.empty() && r.theorem_applicable) return kTransferMismatch;
  return kOk;
}

int cmd_eisenstein(const RunConfig& c, std::ostream& log) {
  if (!c.target_field) throw std::invalid_argument("eisenstein needs a target_field");
  if (c.eisenstein.empty()) throw std::invalid_argument("eisenstein needs cofactors");
  TruncatedRing src(c.spec.field, c.m), dst(*c.target_field, c.m);
  std::vector<RingElem> a;
  for (auto v : c.eisenstein) a.push_back(src.from_int(v));
  auto p = make_eisenstein(src, a);
  auto out = eisenstein_transfer(p, TruncIso::canonical(src, dst));
  open_out(c, "eisenstein.json") << json{{"m", c.m},
                                         {"source_field", c.spec.field.describe()},
                                         {"target_field", c.target_field->describe()},
                                         {"source", p.to_string()},
                                         {"target", out.to_string()}}
                                        .dump(2)
                                 << '\n';
  log << p.to_string() << "  ->  " << out.to_string() << "\n";
  return kOk;
}

int run_command(const std::string& name, const RunConfig& c, std::ostream& log, std::ostream& err) {
  try {
    if (name == "enumerate") return cmd_enumerate(c, log);
    if (name == "volume") return cmd_volume(c, log);
    if (name == "convolve") return cmd_convolve(c, log);
    if (name == "verify") return cmd_verify(c, log);
    if (name == "transfer") return cmd_transfer(c, log);
    if (name == "eisenstein") return cmd_eisenstein(c, log);
    err << "unknown subcommand " << name << "\n";
    return kError;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuardExceeded;
  } catch (const AuditError& e) {
    err << "audit: " << e.what() << "\n";
    return kAuditFailure;
  } catch (const ConsistencyError& e) {
    err << "audit: " << e.what() << "\n";
    return kAuditFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace cli
