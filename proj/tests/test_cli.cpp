#include "orbergman/cli.hpp"
#include "orbergman/coeffs.hpp"
#include "orbergman/models.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace orbergman;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("orb_bergman_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("coeffs command") {
  auto r = run({"coeffs", "--m", "3", "--canonical-q", "2", "--check-P", "1"});
  CHECK(r.code == kExitOk);
  auto doc = json::parse(r.out);
  CHECK(doc.at("verdict") == "pass");
  CHECK(doc.at("tool") == kToolName);

  r = run({"coeffs", "--m", "3", "--coeffs", R"({"entries": [[0, "1"]]})", "--check-P", "0"});
  CHECK(r.code == kExitVerdict);
  CHECK(json::parse(r.out).at("verdict") == "fail");

  // decimals are read exactly
  r = run({"coeffs", "--m", "2", "--coeffs", R"({"entries": [[0, "0.5"], [1, "1/2"]]})", "--check-P", "0"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("invalid input exits with 2") {
  CHECK(run({"kernel", "--model", "football:m=2,t=1", "--canonical-q", "1"}).code == kExitInvalid);
  const auto bad_model = run({"kernel", "--model", "football:m=2,t=1", "--canonical-q", "1"});
  CHECK(bad_model.err.find("football requires m odd") != std::string::npos);
  CHECK(run({"coeffs", "--m", "3", "--coeffs", "{not json"}).code == kExitInvalid);
  CHECK(run({"coeffs", "--m", "3", "--coeffs", R"({"entries": [[0, 0.5]]})"}).code == kExitInvalid);
  CHECK(run({"coeffs", "--m", "3", "--coeffs-file", "/nonexistent/c.json"}).code == kExitInvalid);
  CHECK(run({"rr", "--model", "football:m=3", "--canonical-q", "2", "--krange", "5:2"}).code == kExitInvalid);
  CHECK(run({"rr", "--model", "flat:n=1,m=2,weights=1", "--canonical-q", "2"}).code == kExitInvalid);
  CHECK(run({"kernel", "--model", "football:m=3", "--canonical-q", "2", "--format", "xml"}).code == kExitInvalid);
  CHECK(run({"bogus"}).code == kExitInvalid);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("kernel command") {
  const auto r = run({"kernel", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "0", "--krange", "1:6"});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  const auto& rows = doc.at("rows");
  REQUIRE(rows.size() == 6);
  // exact law 9k + 27 at the orbifold point
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].at("value").get<double>() == doctest::Approx(9.0 * (i + 1) + 27.0));
}

TEST_CASE("expand command") {
  auto r = run({"expand", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "0", "--krange", "1:100"});
  REQUIRE(r.code == kExitOk);
  auto doc = json::parse(r.out);
  CHECK(doc.at("slope") == "exact");
  CHECK(doc.at("verdict") == "pass");

  r = run({"expand", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "1", "--krange", "20:200"});
  CHECK(r.code == kExitOk);
  doc = json::parse(r.out);
  CHECK(doc.at("verdict") == "pass");
  CHECK(doc.at("slope").is_number());

  r = run({"expand", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "1", "--gamma", "1,1"});
  CHECK(r.code == kExitOk);

  CHECK(run({"expand", "--model", "football:m=3", "--canonical-q", "2", "--rho", "0", "--krange", "1:2"}).code ==
        kExitInvalid);
}

TEST_CASE("rr command") {
  auto r = run({"rr", "--model", "football:m=5,t=1", "--canonical-q", "2", "--krange", "5:100"});
  REQUIRE(r.code == kExitOk);
  auto doc = json::parse(r.out);
  CHECK(doc.at("verdict") == "pass");

  r = run({"rr", "--model", "football:m=3,t=1", "--coeffs", R"({"entries": [[0, "1"]]})", "--krange", "1:30"});
  CHECK(r.code == kExitOk);
  CHECK(json::parse(r.out).at("verdict") == "not-asserted");
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("necessity command") {
  auto r = run({"necessity", "--model", "football:m=3,t=1", "--coeffs", R"({"entries": [[0, "1"]]})", "--rho", "0"});
  REQUIRE(r.code == kExitOk);
  auto doc = json::parse(r.out);
  CHECK(doc.at("verdict") == "pass");
  r = run({"necessity", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "0"});
  CHECK(r.code == kExitOk);
}

TEST_CASE("localcheck command") {
  auto r = run({"localcheck", "--model", "flat:n=1,m=2,weights=1", "--check", "decay", "--s", "2", "--u", "0", "--v",
                "1"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out).at("verdict") == "pass");
  r = run({"localcheck", "--model", "flat:n=1,m=2,weights=1", "--check", "reproducing", "--alpha", "1", "--k", "5",
           "--k", "9", "--x", "0.3"});
  // weights 1 and k = 5, 9 are odd: alpha = 1 has matching weight
  CHECK(r.code == kExitOk);
  CHECK(run({"localcheck", "--model", "flat:n=1,m=2,weights=1", "--check", "decay", "--s", "0"}).code == kExitInvalid);
  CHECK(run({"localcheck", "--model", "flat:n=1,m=2,weights=1", "--check", "other"}).code == kExitInvalid);
}

TEST_CASE("report files are deterministic") {
  const std::vector<std::string> base{"kernel", "--model", "football:m=3,t=1", "--canonical-q", "2", "--rho", "1/2",
                                      "--krange", "1:30"};
  for (const std::string format : {"json", "csv"}) {
    const auto a = temp_dir("a_" + format), b = temp_dir("b_" + format);
    auto args_a = base, args_b = base;
    for (auto* args : {&args_a, &args_b}) {
      args->insert(args->end(), {"--format", format, "--out", (args == &args_a ? a : b).string()});
    }
    const auto ra = run(args_a), rb = run(args_b);
    REQUIRE(ra.code == kExitOk);
    CHECK(ra.out == rb.out);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a)) {
      ++files;
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files == (format == "csv" ? 2u : 1u));
    if (format == "csv") {
      const std::string text = slurp(a / "kernel.csv");
      CHECK(text.rfind("# orb_bergman " + std::string(kToolVersion) + " kernel\n", 0) == 0);
      CHECK(text.find("# model: ") != std::string::npos);
      CHECK(text.find("# coefficients: ") != std::string::npos);
      CHECK(text.find("k,point,value,exact_flag,err_bound\n") != std::string::npos);
      CHECK_FALSE(json::parse(slurp(a / "kernel_summary.json")).contains("rows"));
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
  }
}

TEST_CASE("report JSON round-trips model and coefficients") {
  const auto r = run({"kernel", "--model", "flat:n=2,m=3,weights=1;2", "--coeffs",
                      R"({"entries": [[0, "1"], [2, "3/4"]]})", "--x", "0.1;0.2", "--krange", "1:3"});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  CHECK(model_from_json(doc.at("model")) == Model(FlatCyclicModel::make(2, 3, {1, 2})));
  CHECK(coefficients_from_json(doc.at("coefficients")) ==
        CoefficientSequence::from_entries({{0, Rational(1)}, {2, Rational(3, 4)}}));
}
