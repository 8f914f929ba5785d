#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"

using namespace hecke;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hecke_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& s) const { return (path / s).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd, const cli::RunConfig& c, std::string* log = nullptr) {
  std::ostringstream out, err;
  int code = cli::run_command(cmd, c, out, err);
  if (log) *log = out.str() + err.str();
  return code;
}

cli::RunConfig from(const std::string& text, const std::string& out_dir) {
  auto c = cli::config_from_json(json::parse(text));
  c.out_dir = out_dir;
  return c;
}

}  // namespace

TEST_CASE("window and config parsing") {
  auto sl2 = BasedRootDatum::make(GroupFamily::SL, 2);
  CHECK(cli::parse_window("2", sl2).size() == 3);
  auto w = cli::parse_window("1,-1;0,0;-1,1", sl2);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Cocharacter{-1, 1});
  CHECK(w[1] == Cocharacter{0, 0});
  CHECK_THROWS(cli::parse_window("1,0", sl2));
  CHECK_THROWS(cli::parse_window("x", sl2));
  CHECK_THROWS(cli::parse_window("1,2,3", sl2));

  auto d = cli::default_config();
  CHECK(d.spec.family == GroupFamily::SL);
  CHECK(d.window.size() == 2);
  CHECK_THROWS(cli::config_from_json(json::parse(R"({"guards":{"quotient":2000000}})")));
  CHECK_THROWS(cli::config_from_json(json::parse(R"({"threads":0})")));
  CHECK_THROWS(cli::config_from_json(json::parse(R"({"n":5})")));
  CHECK_THROWS(cli::config_from_json(json::parse(R"({"family":"Sp"})")));
  auto gl = cli::config_from_json(json::parse(R"({"family":"GL","field":{"kind":"equal","p":3},"window":[[1,0]],"m":2})"));
  CHECK(gl.window == std::vector<Cocharacter>{Cocharacter{0, 1}});
  CHECK(gl.spec.base_q() == 3);
}

TEST_CASE("serialization round trips") {
  CHECK(rational_from_string("-3/4") == Rational(-3, 4));
  CHECK(rational_from_string("5") == Rational(5));
  CHECK(rational_to_string(Rational(6, 4)) == "3/2");
  CHECK_THROWS(rational_from_string("1/0"));
  CHECK_THROWS(rational_from_string("2x"));
  HeckeElem h;
  h.level = 1;
  h.add(DoubleCosetId{Cocharacter{-1, 1}, 3, 4}, Rational(-2, 3));
  h.add(DoubleCosetId{Cocharacter{0, 0}, 0, 0}, Rational(5));
  auto j = to_json(h, "v1:abc");
  CHECK(j["terms"][0]["coeff"] == "-2/3");
  CHECK(hecke_from_json(json::parse(j.dump()), "v1:abc") == h);
  CHECK_THROWS_AS(hecke_from_json(j, "v1:def"), AuditError);

  std::ostringstream csv;
  HeckeElem p;
  p.add(DoubleCosetId{Cocharacter{0, 0}, 1, 0}, Rational(2));
  write_structure_csv(csv, {{DoubleCosetId{Cocharacter{0, 0}, 1, 0}, DoubleCosetId{Cocharacter{0, 0}, 0, 0}, p}});
  CHECK(csv.str() == "x_id,y_id,z_id,c\n\"(0,0)[1,0]\",\"(0,0)[0,0]\",\"(0,0)[1,0]\",2/1\n");
}

TEST_CASE("enumerate: census, empty window, determinism, guard") {
  TempDir t;
  auto c = cli::default_config();
  c.out_dir = t / "a";
  CHECK(run("enumerate", c) == cli::kOk);
  auto census = slurp(t / "a/census.csv");
  CHECK(census.find("\"(0,0)\",6,6,6,true") != std::string::npos);
  CHECK(census.find("\"(-1,1)\",9,4,6,true") != std::string::npos);
  c.out_dir = t / "b";
  CHECK(run("enumerate", c) == cli::kOk);
  for (const char* f : {"census.csv", "ids.json", "quotient.csv"})
    CHECK(slurp(t / (std::string("a/") + f)) == slurp(t / (std::string("b/") + f)));

  auto e = from(R"({"window":[]})", t / "empty");
  CHECK(run("enumerate", e) == cli::kOk);
  CHECK(slurp(t / "empty/census.csv") == "lambda,ids,stabilizer,quotient_size,orbit_stabilizer\n");

  c.quotient_guard = 5;
  CHECK(run("enumerate", c) == cli::kGuardExceeded);
}

TEST_CASE("volume table") {
  TempDir t;
  auto c = from(R"({"family":"ResSL","field":{"kind":"mixed","p":2,"poly":[-2,1],"f":2},"ext_f":2,"window":"-1,1;0,0"})",
                t / "v");
  CHECK(run("volume", c) == cli::kOk);
  auto v = slurp(t / "v/volume.csv");
  CHECK(v.find("\"(-1,1)\",16,16,true") != std::string::npos);
  CHECK(v.find("\"(0,0)\",1,1,true") != std::string::npos);
}

TEST_CASE("verify: default suite, vacuous window, corrupted cache") {
  TempDir t;
  auto c = cli::default_config();
  c.out_dir = t / "v";
  c.cache_dir = t / "cache";
  std::string log;
  CHECK(run("verify", c, &log) == cli::kOk);
  CHECK(json::parse(slurp(t / "v/verify.json"))["passed"] == true);
  CHECK(log.find("FAIL") == std::string::npos);

  auto e = from(R"({"window":[]})", t / "e");
  CHECK(run("verify", e) == cli::kOk);

  // The cache written above now gets a flipped byte in its element list.
  REQUIRE(fs::is_directory(c.cache_dir));
  auto file = fs::directory_iterator(c.cache_dir)->path();
  {
    std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(44);
    f.put('\x7f');
  }
  CHECK(run("verify", c, &log) == cli::kAuditFailure);
  CHECK(log.find("cache") != std::string::npos);
}

TEST_CASE("convolve: CSV and element files") {
  TempDir t;
  auto c = cli::default_config();
  c.out_dir = t / "c";
  CHECK(run("convolve", c) == cli::kOk);
  auto csv = slurp(t / "c/structure_constants.csv");
  CHECK(csv.rfind("x_id,y_id,z_id,c\n", 0) == 0);

  auto s = c.spec;
  CosetEngine E(s, 1, working_level_for(s, 1, 2, 2));
  HeckeAlgebra H(E);
  auto f = H.basis(E.id_of_pi(Cocharacter{-1, 1})) + Rational(1, 2) * H.unit();
  auto g = H.basis(E.id_of_k(2));
  std::ofstream(t / "f.json") << to_json(f, E.cache_version()).dump();
  std::ofstream(t / "g.json") << to_json(g, E.cache_version()).dump();
  c.convolve_f = t / "f.json";
  c.convolve_g = t / "g.json";
  CHECK(run("convolve", c) == cli::kOk);
  auto got = hecke_from_json(json::parse(slurp(t / "c/convolution.json")), E.cache_version());
  CHECK(got == H.convolve(f, g));

  std::ofstream(t / "g.json") << to_json(g, "v1:0000000000000000").dump();
  CHECK(run("convolve", c) == cli::kAuditFailure);
}

TEST_CASE("transfer and eisenstein subcommands") {
  TempDir t;
  const std::string base = R"("family":"SL","field":{"kind":"mixed","p":2,"poly":[-2,0,0,0,1]},"m":1,"window":1)";
  auto c = from("{" + base + R"(,"target_field":{"kind":"equal","p":2},"l":4})", t / "thm");
  CHECK(run("transfer", c) == cli::kOk);
  auto r = json::parse(slurp(t / "thm/transfer.json"));
  CHECK(r["theorem_applicable"] == true);
  CHECK(r["mismatches"].empty());
  CHECK(r["pairs_checked"] == 225);

  // π ↦ t + t^2 is not the aligned choice; the constants still agree.
  auto na = from("{" + base + R"(,"target_field":{"kind":"equal","p":2},"l":4,"psi_pi_image":[0,1,1,0]})", t / "na");
  CHECK(run("transfer", na) == cli::kOk);
  auto nr = json::parse(slurp(t / "na/transfer.json"));
  CHECK(nr["psi_aligned"] == false);
  CHECK(nr["mismatches"].empty());
  CHECK(nr["pairs_checked"] == 225);
  auto bad = from("{" + base + R"(,"target_field":{"kind":"equal","p":2},"l":4,"psi_pi_image":[0,0,1,0]})", t / "bad");
  CHECK(run("transfer", bad) == cli::kAuditFailure);

  auto same = from("{" + base + R"(,"target_field":{"kind":"mixed","p":2,"poly":[-2,0,0,0,1]},"l":1})", t / "id");
  CHECK(run("transfer", same) == cli::kOk);
  CHECK(json::parse(slurp(t / "id/transfer.json"))["mismatches"].empty());

  auto none = from("{" + base + "}", t / "none");
  CHECK(run("transfer", none) == cli::kError);

  // Q_2 and F_2((t)) are 1-close but not 2-close; both are probes here.
  for (int l : {1, 2}) {
    auto probe = from(R"({"target_field":{"kind":"equal","p":2},"l":)" + std::to_string(l) + "}", t / "p");
    CHECK(run("transfer", probe) == cli::kOk);
    auto pr = json::parse(slurp(t / "p/transfer.json"));
    CHECK(pr["theorem_applicable"] == false);
    CHECK(pr.contains("plan_error") == (l == 2));
  }

  auto e = from(R"({"target_field":{"kind":"equal","p":2},"eisenstein":[1,0]})", t / "e");
  CHECK(run("eisenstein", e) == cli::kOk);
  CHECK(json::parse(slurp(t / "e/eisenstein.json"))["target"] == "x^2 + t");
}
