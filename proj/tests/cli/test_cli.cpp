#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loewner/exact_maps.hpp"
#include "loewner/traces.hpp"
#include "loewner_cli/cli.hpp"
#include "svg_reader.hpp"

using namespace loewner;
using loewner::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

struct Row {
  double t;
  Complex z;
  std::string curve;
};

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  const auto lines = split_lines(text);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    std::istringstream in(lines[k]);
    std::string t, re, im, curve;
    std::getline(in, t, ',');
    std::getline(in, re, ',');
    std::getline(in, im, ',');
    std::getline(in, curve);
    rows.push_back({std::stod(t), {std::stod(re), std::stod(im)}, curve});
  }
  return rows;
}

Row first_row(const std::vector<Row>& rows, const std::string& curve) {
  for (const auto& r : rows) {
    if (r.curve == curve) return r;
  }
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("loewner_cli_test_" + name);
}

const std::vector<std::string> kCaseI{"--theorem", "1", "--A", "2.5", "--t0", "1", "--T", "3"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_CASE("trace CSV layout and first Gamma2 rows") {
  const Run r = run(with({"trace"}, kCaseI));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,re,im,curve\n", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto rows = parse_csv(r.out);
  const Row g2 = first_row(rows, "G2");
  CHECK(g2.t == 1.0);
  CHECK(g2.z == Complex{1.5, 0.0});
  CHECK(first_row(rows, "G0").z == Complex{});
  CHECK(first_row(rows, "G1").z.real() == -1.5);

  const auto two = parse_csv(
      run({"trace", "--theorem", "2", "--A", "3", "--t0", "1", "--T", "3"}).out);
  CHECK(first_row(two, "G2").z == Complex{0.0, 2.0});
  const auto three = parse_csv(
      run({"trace", "--theorem", "1", "--A", "2", "--t0", "1", "--T", "3"}).out);
  CHECK(first_row(three, "G2").z == Complex{0.0, 0.0});
}

TEST_CASE("trace output is deterministic and round-trips") {
  const Run a = run(with({"trace", "--samples", "100"}, kCaseI));
  const Run b = run(with({"trace", "--samples", "100"}, kCaseI));
  CHECK(a.out == b.out);
  const Scenario sc = Scenario::theorem_one(2.5, 1.0, 3.0);
  for (const Row& row : parse_csv(a.out)) {
    if (row.curve != "G2") continue;
    CHECK(std::abs(thm1_trace_residual(row.z, row.t, sc)) <= 1e-10);
  }
  // 17 significant digits
  CHECK(a.out.find("1.0000020000000001") != std::string::npos);
}

TEST_CASE("trace --numeric is close to the exact trace") {
  const auto exact = parse_csv(run(with({"trace", "--samples", "20"}, kCaseI)).out);
  const auto numeric = parse_csv(run(with({"trace", "--samples", "20", "--numeric"}, kCaseI)).out);
  REQUIRE(exact.size() == numeric.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    CHECK(std::abs(exact[k].z - numeric[k].z) <= 1e-5);
  }
}

TEST_CASE("trace writes to --out and reports I/O failures") {
  const auto path = temp_path("trace.csv");
  CHECK(run(with({"trace", "--samples", "16", "--out", path.string()}, kCaseI)).code == 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,re,im,curve");
  std::filesystem::remove(path);
  CHECK(run(with({"trace", "--out", "/nonexistent/dir/x.csv"}, kCaseI)).code == 5);
}

TEST_CASE("complex flag syntax") {
  CHECK(cli::parse_complex("1+1i") == Complex{1.0, 1.0});
  CHECK(cli::parse_complex("-0.5-2.25i") == Complex{-0.5, -2.25});
  CHECK(cli::parse_complex("1e-3+2E1i") == Complex{1e-3, 20.0});
  CHECK_FALSE(cli::parse_complex("1+i").has_value());
  CHECK_FALSE(cli::parse_complex("1").has_value());
  CHECK_FALSE(cli::parse_complex("1+1j").has_value());
  CHECK_FALSE(cli::parse_complex("abc").has_value());
}

TEST_CASE("solve at t0 returns the slit map") {
  const Run r = run(with({"solve", "--z", "1+1i", "--t", "1"}, kCaseI));
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const Complex expect = sqrt_map({1.0, 1.0}, 1.0);
  CHECK(j["w_re"].get<double>() == expect.real());
  CHECK(j["w_im"].get<double>() == expect.imag());
  CHECK(j["residual"].get<double>() <= 1e-15);
  CHECK(j["method"] == "implicit");
}

TEST_CASE("solve: implicit and ode agree") {
  for (const std::string z : {"1+1i", "-2.5+0.3i", "0.1+4i"}) {
    const auto a = nlohmann::json::parse(
        run(with({"solve", "--z", z, "--t", "2.7", "--method", "implicit"}, kCaseI)).out);
    const auto b = nlohmann::json::parse(
        run(with({"solve", "--z", z, "--t", "2.7", "--method", "ode"}, kCaseI)).out);
    const Complex wa{a["w_re"].get<double>(), a["w_im"].get<double>()};
    const Complex wb{b["w_re"].get<double>(), b["w_im"].get<double>()};
    CHECK(std::abs(wa - wb) <= 1e-7);
    CHECK(a["residual"].get<double>() <= 1e-12);
  }
}

TEST_CASE("solve exit codes") {
  CHECK(run(with({"solve", "--z", "1+i", "--t", "2"}, kCaseI)).code == 2);
  CHECK(run(with({"solve", "--z", "0+1i", "--t", "2"}, kCaseI)).code == 4);
  CHECK(run(with({"solve", "--z", "1-1i", "--t", "2"}, kCaseI)).code == 4);
  CHECK(run(with({"solve", "--z", "1+1i", "--t", "9"}, kCaseI)).code == 2);
  CHECK(run(with({"solve", "--z", "1+1i", "--t", "2", "--method", "rk4"}, kCaseI)).code == 2);
  CHECK(run({"solve", "--z", "1+1i", "--t", "2", "--A", "2.5"}).code == 2);
  CHECK(run({"solve", "--z", "1+1i", "--t", "2", "--A", "-1", "--t0", "1", "--T", "3"}).code ==
        2);
  // A point on Gamma2 at t = 2 is swallowed before t = 2.5.
  const auto rows = parse_csv(run(with({"trace", "--samples", "3"}, kCaseI)).out);
  Complex on_trace;
  for (const auto& row : rows) {
    if (row.curve == "G2" && row.t == 2.0) on_trace = row.z;
  }
  const std::string z = cli::format_real(on_trace.real()) + "+" +
                        cli::format_real(on_trace.imag()) + "i";
  CHECK(run(with({"solve", "--z", z, "--t", "2.5", "--method", "ode"}, kCaseI)).code == 3);
}

TEST_CASE("verify exit status and report contents") {
  const Run all = run({"verify", "--suite", "all", "--theorem", "2", "--A", "3", "--t0", "1",
                       "--T", "3"});
  CHECK(all.code == 0);
  const auto j = nlohmann::json::parse(all.out);
  CHECK(j["suite"] == "all");
  CHECK(j["checks"].size() > 10);
  for (const auto& c : j["checks"]) CHECK(c["pass"].get<bool>());

  const Run case3 = run({"verify", "--suite", "case3", "--t0", "2.25"});
  CHECK(case3.code == 0);
  CHECK(case3.out.find("case3.t0=2.25.corrected_form_residual") != std::string::npos);
  CHECK(case3.out.find("case3.t0=2.25.literal_form_residual") != std::string::npos);

  const Run geom = run({"verify", "--suite", "geometry", "--theorem", "1", "--A", "2", "--t0",
                        "1", "--T", "3"});
  CHECK(geom.code == 0);
  CHECK(geom.out.find("geometry.departure_angle") != std::string::npos);
  CHECK(geom.out.find("pi/4") != std::string::npos);

  CHECK(run({"verify", "--suite", "bogus", "--t0", "1"}).code == 2);
  CHECK(run({"verify", "--suite", "case3"}).code == 2);
}

TEST_CASE("verify --json writes the report and --no-timing makes it reproducible") {
  const auto p1 = temp_path("r1.json");
  const auto p2 = temp_path("r2.json");
  const auto args = with({"verify", "--suite", "geometry", "--no-timing"}, kCaseI);
  const Run a = run(with(args, {"--json", p1.string()}));
  const Run b = run(with(args, {"--json", p2.string()}));
  CHECK(a.code == 0);
  CHECK(a.out.find("checks passed") != std::string::npos);
  std::ifstream f1(p1), f2(p2);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(!s1.empty());
  CHECK(s1 == s2);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("figure presets") {
  struct Expect {
    std::string preset;
    Complex start;
  };
  for (const Expect& e : {Expect{"fig1", {1.5, 0.0}}, Expect{"fig2", {0.0, std::sqrt(1.75)}},
                          Expect{"fig3", {0.0, 0.0}}, Expect{"fig4", {0.0, 2.0}}}) {
    const Run r = run({"figure", "--preset", e.preset});
    REQUIRE(r.code == 0);
    const testing::SvgFigure fig = testing::read_svg(r.out);
    INFO(e.preset);
    REQUIRE(fig.polylines.count("G0") == 1);
    REQUIRE(fig.polylines.count("G1") == 1);
    REQUIRE(fig.polylines.count("G2") == 1);
    CHECK(fig.polylines.at("G0").size() == 2);
    CHECK(fig.has_caption);
    const Complex start = fig.to_model(fig.polylines.at("G2").front());
    CHECK(std::abs(start - e.start) <= 1e-5);
    CHECK(count_self_intersections(fig.polylines.at("G2")) == 0);
    CHECK(count_self_intersections(fig.polylines.at("G1")) == 0);
  }
}

TEST_CASE("figure departure directions") {
  const auto fig3 = testing::read_svg(run({"figure", "--preset", "fig3"}).out);
  const auto& p3 = fig3.polylines.at("G2");
  const Complex d3 = fig3.to_model(p3[1]) - fig3.to_model(p3[0]);
  CHECK(std::arg(d3) == doctest::Approx(kPi / 4.0).epsilon(0.02));

  const auto fig4 = testing::read_svg(run({"figure", "--preset", "fig4"}).out);
  const auto& p4 = fig4.polylines.at("G2");
  const Complex d4 = fig4.to_model(p4[3]) - fig4.to_model(p4[0]);
  CHECK(std::abs(std::arg(d4) + 5.0 * kPi / 26.0) <= 1e-2);
}

TEST_CASE("figure from explicit flags, I/O errors and usage errors") {
  const Run r = run(with({"figure", "--samples", "32"}, kCaseI));
  CHECK(r.code == 0);
  CHECK(r.out.find("A = 2.5, t0 = 1, T = 3") != std::string::npos);
  CHECK(run({"figure", "--preset", "fig1"}).out == run({"figure", "--preset", "fig1"}).out);
  CHECK(run({"figure", "--preset", "fig1", "--out", "/nonexistent/dir/f.svg"}).code == 5);
  CHECK(run({"figure", "--preset", "fig9"}).code == 2);
  CHECK(run(with({"figure", "--samples", "4"}, kCaseI)).code == 2);
}

TEST_CASE("figure axis range grows to fit the curves") {
  cli::FigureSpec spec(Scenario::theorem_one(4.0, 1.0, 6.0));
  const auto fig = testing::read_svg(cli::render_svg(spec));
  for (const auto& [id, pts] : fig.polylines) {
    for (const Complex p : pts) {
      CHECK(p.real() >= 0.0);
      CHECK(p.imag() >= 0.0);
    }
  }
  CHECK_THROWS_AS((void)cli::figure_preset("nope"), DomainError);
}

TEST_CASE("top-level usage") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"trace", "--theorem", "3", "--A", "1", "--t0", "1", "--T", "2"}).code == 2);
}
