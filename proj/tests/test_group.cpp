#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "hecke/level_quotient.hpp"

using namespace hecke;
using namespace fx;

namespace {

Matrix mat2(const TruncatedRing& R, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  Matrix M = mat_zero(R, 2);
  M(0, 0) = R.from_int(a);
  M(0, 1) = R.from_int(b);
  M(1, 0) = R.from_int(c);
  M(1, 1) = R.from_int(d);
  return M;
}

// Every matrix over R congruent to 1 modulo π^m satisfying the family's
// determinant condition.
std::vector<Matrix> congruence_kernel(const GroupModel& G, int mlevel) {
  const auto& R = G.ring();
  std::vector<RingElem> small;
  for (const auto& x : R.elements())
    if (R.valuation(x) >= mlevel) small.push_back(x);
  const int n = G.n();
  std::vector<Matrix> out;
  std::vector<std::size_t> idx(n * n, 0);
  for (;;) {
    Matrix M = mat_identity(R, n);
    for (int k = 0; k < n * n; ++k) M.a[k] = R.add(M.a[k], small[idx[k]]);
    if (G.satisfies_det(R, M)) out.push_back(M);
    int k = 0;
    while (k < n * n && ++idx[k] == small.size()) idx[k++] = 0;
    if (k == n * n) break;
  }
  return out;
}

// Entry (i,j) of g as an element of F, reported as its valuation.
int entry_valuation(const GroupModel& G, const GroupElem& g, int i, int j) {
  int v = G.ring().valuation(g.mat(i, j));
  return v == kInfiniteValuation ? v : v - g.shift;
}

}  // namespace

TEST_CASE("documented group examples") {
  auto sl2 = spec(GroupFamily::SL, 2, Q2());
  GroupModel G(sl2, 1, 3);
  const auto& R = G.ring();
  CHECK(R.level() == 3);

  auto x = G.from_integral(mat2(R, 1, 1, 0, 1));
  auto y = G.from_integral(mat2(R, 1, 0, 1, 1));
  CHECK(G.gmul(x, y).mat == mat2(R, 2, 1, 1, 1));
  CHECK(G.gmul(G.identity(), x) == x);

  auto d = G.pi_lambda(Cocharacter{1, -1});  // diag(π, π^{-1})
  CHECK(d.shift == 1);
  CHECK(d.mat == mat_diag(R, {R.mul_pi(R.one(), 2), R.one()}));
  auto di = G.ginv(d);
  CHECK(di.shift == 1);
  CHECK(di.mat == mat_truncate(R, mat_diag(R, {R.one(), R.mul_pi(R.one(), 2)}), di.prec));
  CHECK(G.pi_lambda(Cocharacter{-1, 1}).mat == mat_diag(R, {R.one(), R.mul_pi(R.one(), 2)}));
  CHECK(G.pi_lambda(Cocharacter{0, 0}) == G.identity());

  auto gl2 = spec(GroupFamily::GL, 2, Q2());
  GroupModel H(gl2, 1, 3);
  const auto& S = H.ring();
  auto p01 = H.pi_lambda(Cocharacter{0, 1});
  CHECK(p01.shift == 0);
  CHECK(p01.mat == mat2(S, 1, 0, 0, 2));
  CHECK_FALSE(H.in_K(p01));
  CHECK(H.in_K(H.identity()));
  CHECK(H.in_Km(H.identity(), 1));
  auto k = H.from_integral(mat2(S, 3, 2, 2, 1));
  CHECK(H.in_K(k));
  CHECK(H.in_Km(k, 1));
  CHECK_FALSE(H.in_Km(k, 2));
  CHECK_FALSE(G.in_K(G.from_integral(mat2(R, 3, 2, 2, 1))));  // det -1 is not 1
}

TEST_CASE("precision failures are loud") {
  GroupModel G(spec(GroupFamily::GL, 2, Q2()), 1, 2);
  CHECK_THROWS_AS(G.pi_lambda(Cocharacter{0, 2}), PrecisionError);
  CHECK_THROWS_AS(G.from_integral(mat_zero(G.ring(), 2)), PrecisionError);
  CHECK_THROWS_AS(G.pi_lambda(Cocharacter{1}), std::invalid_argument);
  GroupModel S(spec(GroupFamily::SL, 2, Q2()), 1, 3);
  CHECK_THROWS_AS(S.pi_lambda(Cocharacter{0, 1}), std::invalid_argument);
}

TEST_CASE("Smith form reconstructs the matrix") {
  std::mt19937_64 rng(7);
  for (auto f : {Q2(), Q3(), F2t(), Q2root4()}) {
    TruncatedRing R(f, 4);
    for (int n = 1; n <= 3; ++n)
      for (int trial = 0; trial < 60; ++trial) {
        Matrix M = random_matrix(R, n, rng);
        if (mat_valuation(R, M, 4) >= 4) continue;
        SmithForm s;
        try {
          s = smith_form(R, M, 4);
        } catch (const PrecisionError&) {
          continue;  // singular modulo π^4
        }
        CHECK(std::is_sorted(s.mu.begin(), s.mu.end()));
        CHECK(R.is_unit(mat_det(R, s.A)));
        CHECK(R.is_unit(mat_det(R, s.B)));
        std::vector<RingElem> d;
        for (int v : s.mu) d.push_back(R.mul_pi(R.one(), v));
        CHECK(mat_mul(R, mat_mul(R, s.A, mat_diag(R, d)), s.B) == M);
      }
  }
}

TEST_CASE("inverse and identity laws") {
  std::mt19937_64 rng(11);
  for (auto fam : {GroupFamily::GL, GroupFamily::SL})
    for (auto f : {Q2(), F3t(), Q2root4()}) {
      GroupModel G(spec(fam, 2, f), 1, 12);
      const auto& R = G.ring();
      for (int trial = 0; trial < 40; ++trial) {
        Cocharacter l = fam == GroupFamily::SL ? Cocharacter{-(trial % 3), trial % 3} : Cocharacter{trial % 2, trial % 3};
        auto g = G.gmul(G.gmul(G.from_integral(random_K(G, rng)), G.pi_lambda(l)), G.from_integral(random_K(G, rng)));
        auto e1 = G.gmul(g, G.ginv(g));
        auto e2 = G.gmul(G.ginv(g), g);
        for (const auto& e : {e1, e2}) {
          CHECK(e.shift == 0);
          CHECK(e.mat == mat_truncate(R, mat_identity(R, 2), e.prec));
          CHECK(e.prec >= R.level() - 2 * l.spread());
        }
      }
    }
}

TEST_CASE("pi_lambda is additive") {
  for (auto fam : {GroupFamily::GL, GroupFamily::SL}) {
    GroupModel G(spec(fam, 2, Q3()), 1, 12);
    auto win = G.datum().antidominant_window(2);
    std::vector<Cocharacter> all;
    for (const auto& l : win)
      for (const auto& w : G.datum().weyl_group()) all.push_back(G.datum().act(w, l));
    for (const auto& a : all)
      for (const auto& b : all) {
        auto lhs = G.gmul(G.pi_lambda(a), G.pi_lambda(b));
        auto rhs = G.pi_lambda(a + b);
        CHECK(lhs.shift == rhs.shift);
        CHECK(lhs.mat == mat_truncate(G.ring(), rhs.mat, lhs.prec));
      }
  }
}

TEST_CASE("conjugation shifts root-group valuations by the pairing") {
  for (auto fam : {GroupFamily::GL, GroupFamily::SL})
    for (auto f : {Q2(), F2t()}) {
      GroupModel G(spec(fam, 2, f), 1, 16);
      const auto& R = G.ring();
      TruncatedRing small(f, 3);
      std::vector<Cocharacter> lams;
      for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b)
          if (G.datum().in_lattice(Cocharacter{a, b})) lams.push_back(Cocharacter{a, b});
      for (const auto& l : lams)
        for (const auto& root : G.datum().roots()) {
          auto pl = G.pi_lambda(l);
          auto pli = G.ginv(pl);
          const int shift = l[root.i] - l[root.j];
          for (const auto& u0 : small.elements()) {
            if (small.is_zero(u0)) continue;
            RingElem u = R.lift(u0, small);
            auto x = G.from_integral(mat_elementary(R, 2, root.i, root.j, u));
            auto c = G.gmul(G.gmul(pl, x), pli);
            CHECK(entry_valuation(G, c, root.i, root.j) == R.valuation(u) + shift);
            // The opposite entry stays zero and the diagonal stays 1.
            CHECK(R.is_zero(c.mat(root.j, root.i)));
            CHECK(entry_valuation(G, c, 0, 0) == 0);
          }
        }
    }
}

TEST_CASE("Iwahori factorization of K_1/K_3 is a bijection") {
  for (auto fam : {GroupFamily::SL, GroupFamily::GL})
    for (auto f : {Q2(), F2t()}) {
      GroupModel G(spec(fam, 2, f), 1, 3);
      const auto& R = G.ring();
      auto kernel = congruence_kernel(G, 1);
      std::vector<RingElem> p_elems, one_plus_p;
      for (const auto& x : R.elements())
        if (R.valuation(x) >= 1) {
          p_elems.push_back(x);
          one_plus_p.push_back(R.add(R.one(), x));
        }
      // Oracle: the product map U+ × T × U- → K_1/K_3 by brute force.
      std::map<std::vector<std::uint64_t>, std::vector<Matrix>> preimage;
      auto key = [&](const Matrix& M) {
        std::vector<std::uint64_t> k;
        for (const auto& x : M.a) k.push_back(R.code(x));
        return k;
      };
      for (const auto& a : p_elems)
        for (const auto& s : one_plus_p)
          for (const auto& t : one_plus_p) {
            if (fam == GroupFamily::SL && !(R.mul(s, t) == R.one())) continue;
            for (const auto& b : p_elems) {
              Matrix up = mat_elementary(R, 2, 0, 1, a);
              Matrix dg = mat_diag(R, {s, t});
              Matrix lo = mat_elementary(R, 2, 1, 0, b);
              Matrix g = mat_mul(R, mat_mul(R, up, dg), lo);
              preimage[key(g)] = {up, dg, lo};
            }
          }
      CHECK(preimage.size() == kernel.size());
      CHECK(kernel.size() == (fam == GroupFamily::SL ? 64u : 256u));
      for (const auto& g : kernel) {
        auto fac = G.iwahori_factor(GroupElem{0, g, R.level()});
        auto it = preimage.find(key(g));
        REQUIRE(it != preimage.end());
        CHECK(fac.u_plus.mat == it->second[0]);
        CHECK(fac.torus.mat == it->second[1]);
        CHECK(fac.u_minus.mat == it->second[2]);
        CHECK(mat_mul(R, mat_mul(R, fac.u_plus.mat, fac.torus.mat), fac.u_minus.mat) == g);
      }
      // Documented instances.
      auto upper = mat2(R, 1, 2, 0, 1);
      if (f.kind == FieldKind::mixed) {
        auto fac = G.iwahori_factor(GroupElem{0, upper, 3});
        CHECK(fac.u_plus.mat == upper);
        CHECK(fac.torus.mat == mat_identity(R, 2));
        CHECK(fac.u_minus.mat == mat_identity(R, 2));
      }
      CHECK_THROWS(G.iwahori_factor(G.pi_lambda(fam == GroupFamily::SL ? Cocharacter{-1, 1} : Cocharacter{0, 1})));
    }
  GroupModel H(spec(GroupFamily::GL, 2, Q2()), 1, 3);
  const auto& S = H.ring();
  auto g = mat2(S, 3, 2, 2, 1);
  auto fac = H.iwahori_factor(GroupElem{0, g, 3});
  CHECK(mat_mul(S, mat_mul(S, fac.u_plus.mat, fac.torus.mat), fac.u_minus.mat) == g);
  CHECK(S.is_zero(fac.u_plus.mat(1, 0)));
  CHECK(S.is_zero(fac.u_minus.mat(0, 1)));
}

TEST_CASE("level quotients match brute-force counts and closed forms") {
  struct Case {
    GroupSpec s;
    int level;
    std::uint64_t order;
  };
  std::vector<Case> cases = {
      {spec(GroupFamily::SL, 2, Q2()), 1, 6},
      {spec(GroupFamily::GL, 2, Q2()), 2, 96},
      {spec(GroupFamily::GL, 1, Q3()), 1, 2},
      {spec(GroupFamily::SL, 2, F2t()), 2, 48},
      {spec(GroupFamily::SL, 2, Q3()), 1, 24},
      {spec(GroupFamily::GL, 2, F3t()), 1, 48},
      {spec(GroupFamily::SL, 3, Q2()), 1, 168},
      {spec(GroupFamily::ResSL, 2, FieldDescriptor::mixed_char(2, {-2, 1}, 2), 1, 2), 1, 60},
      {spec(GroupFamily::ResSL, 2, FieldDescriptor::mixed_char(2, {-2, 0, 1}), 2, 1), 1, 48},
  };
  for (const auto& c : cases) {
    auto Q = LevelQuotient::enumerate(c.s, c.level);
    CHECK(Q.size() == c.order);
    CHECK(closed_form_order(c.s, Q.ring().level()) == c.order);
    // Brute force over all matrices when small enough.
    const auto els = Q.ring().elements();
    const int n = c.s.n;
    GroupModel G(c.s, c.level, c.level);
    std::uint64_t total = 1;
    for (int k = 0; k < n * n; ++k) total *= els.size();
    if (total <= 70000) {
      std::uint64_t count = 0;
      std::vector<std::size_t> idx(n * n, 0);
      for (std::uint64_t t = 0; t < total; ++t) {
        Matrix M = mat_zero(Q.ring(), n);
        for (int k = 0; k < n * n; ++k) M.a[k] = els[idx[k]];
        if (G.satisfies_det(Q.ring(), M)) {
          ++count;
          CHECK(Q.find(M).has_value());
        }
        for (int k = 0; k < n * n && ++idx[k] == els.size(); ++k) idx[k] = 0;
      }
      CHECK(count == c.order);
    }
    // Group table sanity.
    for (std::size_t i = 0; i < Q.size(); i += 1 + Q.size() / 50) {
      CHECK(Q.mul(i, Q.inv(i)) == Q.identity_index());
      CHECK(Q.mul(Q.identity_index(), i) == i);
    }
  }
  CHECK_THROWS_AS(LevelQuotient::enumerate(spec(GroupFamily::GL, 3, Q3()), 2, 1000), GuardError);
}

TEST_CASE("reduction between levels is a surjective homomorphism") {
  std::mt19937_64 rng(3);
  for (auto fam : {GroupFamily::SL, GroupFamily::GL}) {
    auto s = spec(fam, 2, Q2());
    auto Q3l = LevelQuotient::enumerate(s, 3);
    auto Q1l = LevelQuotient::enumerate(s, 1);
    std::uniform_int_distribution<std::size_t> pick(0, Q3l.size() - 1);
    auto red = [&](std::size_t i) { return Q1l.index(mat_reduce(Q3l.ring(), Q3l.element(i), Q1l.ring())); };
    for (int t = 0; t < 1000; ++t) {
      auto a = pick(rng), b = pick(rng);
      CHECK(red(Q3l.mul(a, b)) == Q1l.mul(red(a), red(b)));
    }
    std::vector<std::size_t> fibre(Q1l.size(), 0);
    for (std::size_t i = 0; i < Q3l.size(); ++i) ++fibre[red(i)];
    for (auto c : fibre) CHECK(c == Q3l.size() / Q1l.size());
    GroupModel G(s, 1, 3);
    CHECK(fibre[Q1l.identity_index()] == congruence_kernel(G, 1).size());
  }
}

TEST_CASE("level quotient cache round trip and corruption") {
  auto s = spec(GroupFamily::SL, 2, Q2());
  auto Q = LevelQuotient::enumerate(s, 2);
  auto path = (std::filesystem::temp_directory_path() / "hecke_test_cache.bin").string();
  Q.save(path);
  auto L = LevelQuotient::load(s, 2, path);
  CHECK(L.size() == Q.size());
  CHECK(L.version() == Q.version());
  CHECK(L.element(17) == Q.element(17));
  CHECK_THROWS_AS(LevelQuotient::load(s, 1, path), AuditError);
  CHECK_THROWS_AS(LevelQuotient::load(spec(GroupFamily::GL, 2, Q2()), 2, path), AuditError);

  auto corrupt = [&](std::streamoff at, char value) {
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(at);
    io.put(value);
  };
  corrupt(4, 9);  // format version
  CHECK_THROWS_WITH_AS(LevelQuotient::load(s, 2, path), doctest::Contains("cache version mismatch"), AuditError);
  Q.save(path);
  corrupt(48, 0x55);  // inside the code list
  CHECK_THROWS_WITH_AS(LevelQuotient::load(s, 2, path), doctest::Contains("cache corrupted"), AuditError);
  std::filesystem::remove(path);
}
